#pragma once

#include "flexarm/experiments.hpp"
#include "flexarm/metrics.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace flexarm {

// Fixed trace column order:
//   tick, t, q1..q9, qd1..qd9, tau_cmd1..9, tau_bas1..9, tau_fcm1..9,
//   UA.Fx..UA.Tz, FA.Fx..FA.Tz, HA.Fx..HA.Tz (filtered),
//   mode_elbow, mode_wrist (0 joint-oriented, 1 target-oriented),
//   UA.k_f1, UA.k_t1, UA.k_f2, UA.k_t2, FA..., HA..., k_ce, k_cw,
//   sat_UA, sat_FA, sat_HA, tau_sat1..9.
// Doubles are written with 17 significant digits.
std::vector<std::string> trace_columns();
void write_trace_csv(std::ostream& os, const Trace& trace);

// channel, MAV, MAD, max, mode, scenario.
void write_metrics_header(std::ostream& os);
void write_metrics_csv(std::ostream& os, const Trace& trace,
                       const std::vector<ChannelMetric>& metrics);

// movement, speed, mode, max_ac, channels.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows,
                     const std::vector<Movement>& movements);

// Writes to path, throwing std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace flexarm
