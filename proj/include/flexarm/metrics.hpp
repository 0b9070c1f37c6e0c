#pragma once

#include "flexarm/simulation.hpp"

#include <string>
#include <vector>

namespace flexarm {

struct ChannelStats {
  double mav = 0.0;  // mean of |x|
  double mad = 0.0;  // population standard deviation of |x|
  double max = 0.0;  // max of |x|
};

ChannelStats channel_stats(const std::vector<double>& x);

struct ChannelMetric {
  std::string channel;  // e.g. "UA.Fy"
  ChannelStats stats;
};

inline constexpr double kDefaultDiscard = 0.5;  // s

// "UA.Fy" style label for a binding channel.
std::string channel_label(Binding b, Channel c);

// The seven major-component channels in table order: UA Fy Fz, FA Fy Fz,
// HA Tx Fy Fz.
std::vector<std::pair<Binding, Channel>> mc_channel_list();

// Filtered-wrench samples of one channel with t >= discard.
std::vector<double> channel_series(const Trace& trace, Binding b, Channel c,
                                   double discard = kDefaultDiscard);

// Statistics for all 18 filtered channels over t >= discard. Throws
// DomainError when no sample survives the window.
std::vector<ChannelMetric> compute_metrics(const Trace& trace,
                                           double discard = kDefaultDiscard);

const ChannelMetric& find_metric(const std::vector<ChannelMetric>& m,
                                 const std::string& channel);

// Sign changes of x, ignoring samples with |x| <= deadband.
int count_sign_changes(const std::vector<double>& x, double deadband);

}  // namespace flexarm
