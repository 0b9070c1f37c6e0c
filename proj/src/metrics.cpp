#include "flexarm/metrics.hpp"

#include <cmath>

namespace flexarm {

ChannelStats channel_stats(const std::vector<double>& x) {
  if (x.empty()) throw DomainError("channel statistics need at least one sample");
  ChannelStats s;
  double sum = 0.0;
  for (double v : x) {
    sum += std::abs(v);
    s.max = std::max(s.max, std::abs(v));
  }
  const double n = static_cast<double>(x.size());
  s.mav = sum / n;
  double var = 0.0;
  for (double v : x) {
    const double d = std::abs(v) - s.mav;
    var += d * d;
  }
  s.mad = std::sqrt(var / n);
  return s;
}

std::string channel_label(Binding b, Channel c) {
  return std::string(name(b)) + "." + std::string(kChannelLabels[index(c)]);
}

std::vector<std::pair<Binding, Channel>> mc_channel_list() {
  return {{Binding::UA, Channel::Fy}, {Binding::UA, Channel::Fz},
          {Binding::FA, Channel::Fy}, {Binding::FA, Channel::Fz},
          {Binding::HA, Channel::Tx}, {Binding::HA, Channel::Fy},
          {Binding::HA, Channel::Fz}};
}

std::vector<double> channel_series(const Trace& trace, Binding b, Channel c,
                                   double discard) {
  std::vector<double> x;
  x.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    if (row.t + 1e-12 >= discard) x.push_back(row.filtered[index(b)][c]);
  }
  return x;
}

std::vector<ChannelMetric> compute_metrics(const Trace& trace, double discard) {
  if (trace.rows.empty()) throw DomainError("compute_metrics: empty trace");
  std::vector<ChannelMetric> out;
  for (Binding b : kBindings) {
    for (int ci = 0; ci < 6; ++ci) {
      const auto c = static_cast<Channel>(ci);
      const auto x = channel_series(trace, b, c, discard);
      if (x.empty()) {
        throw DomainError("compute_metrics: no samples after the discard window");
      }
      out.push_back({channel_label(b, c), channel_stats(x)});
    }
  }
  return out;
}

const ChannelMetric& find_metric(const std::vector<ChannelMetric>& m,
                                 const std::string& channel) {
  for (const auto& cm : m) {
    if (cm.channel == channel) return cm;
  }
  throw DomainError("no metric for channel " + channel);
}

int count_sign_changes(const std::vector<double>& x, double deadband) {
  int changes = 0;
  int last = 0;
  for (double v : x) {
    if (std::abs(v) <= deadband) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace flexarm
