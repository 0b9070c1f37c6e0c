#include "flexarm/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace flexarm {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void vec9(std::ostream& os, const Vec9& v) {
  for (Eigen::Index i = 0; i < 9; ++i) os << ',' << fmt(v[i]);
}

}  // namespace

std::vector<std::string> trace_columns() {
  std::vector<std::string> c = {"tick", "t"};
  for (const char* p : {"q", "qd", "tau_cmd", "tau_bas", "tau_fcm"}) {
    for (int i = 1; i <= 9; ++i) c.push_back(p + std::to_string(i));
  }
  for (Binding b : kBindings) {
    for (int ch = 0; ch < 6; ++ch) {
      c.push_back(channel_label(b, static_cast<Channel>(ch)));
    }
  }
  c.push_back("mode_elbow");
  c.push_back("mode_wrist");
  for (Binding b : kBindings) {
    for (int k = 1; k <= 2; ++k) {
      c.push_back(std::string(name(b)) + ".k_f" + std::to_string(k));
      c.push_back(std::string(name(b)) + ".k_t" + std::to_string(k));
    }
  }
  c.push_back("k_ce");
  c.push_back("k_cw");
  for (Binding b : kBindings) c.push_back("sat_" + std::string(name(b)));
  for (int i = 1; i <= 9; ++i) c.push_back("tau_sat" + std::to_string(i));
  return c;
}

void write_trace_csv(std::ostream& os, const Trace& trace) {
  const auto cols = trace_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << cols[i];
  }
  os << '\n';
  for (const auto& r : trace.rows) {
    os << r.tick << ',' << fmt(r.t);
    vec9(os, r.q);
    vec9(os, r.qd);
    vec9(os, r.tau_cmd);
    vec9(os, r.tau_bas);
    vec9(os, r.tau_fcm);
    for (const auto& w : r.filtered) {
      for (int ch = 0; ch < 6; ++ch) os << ',' << fmt(w[static_cast<Channel>(ch)]);
    }
    for (IntentMode m : r.modes) {
      os << ',' << (m == IntentMode::TargetOriented ? 1 : 0);
    }
    for (const auto& pair : r.bas_gains) {
      for (const auto& g : pair) os << ',' << fmt(g.k_f) << ',' << fmt(g.k_t);
    }
    os << ',' << fmt(r.k_ce) << ',' << fmt(r.k_cw);
    for (bool s : r.sensor_saturated) os << ',' << (s ? 1 : 0);
    for (bool s : r.torque_saturated) os << ',' << (s ? 1 : 0);
    os << '\n';
  }
}

void write_metrics_header(std::ostream& os) {
  os << "channel,MAV,MAD,max,mode,scenario\n";
}

void write_metrics_csv(std::ostream& os, const Trace& trace,
                       const std::vector<ChannelMetric>& metrics) {
  for (const auto& m : metrics) {
    os << m.channel << ',' << fmt(m.stats.mav) << ',' << fmt(m.stats.mad)
       << ',' << fmt(m.stats.max) << ',' << name(trace.mode) << ','
       << trace.scenario << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<Movement>& movements) {
  os << "movement,speed,mode,max_ac,channels\n";
  for (const auto& r : rows) {
    std::string chans;
    for (const auto& [b, c] : find_movement(movements, r.movement).ac_channels) {
      if (!chans.empty()) chans += '+';
      chans += channel_label(b, c);
    }
    os << r.movement << ',' << fmt(r.speed) << ',' << name(r.mode) << ','
       << fmt(r.max_ac) << ',' << chans << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace flexarm
