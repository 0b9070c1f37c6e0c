#pragma once

#include "flexarm/chain.hpp"
#include "flexarm/classify.hpp"

namespace flexarm {

struct BasGains {
  double k_f = 0.5;  // major-component (force) gain
  double k_t = 1.0;  // assistant-component (torque) gain
};

// Clamps f to f_max * sgn(f), then
//   k_f = (sin|pi f / f_max| + 1) / 2,  k_t = (cos|pi f / f_max| + 1) / 2.
BasGains bas_gains(double f, double f_max);

// An MC force channel and the AC torque channel it schedules.
struct BasPair {
  Channel force = Channel::Fy;
  Channel torque = Channel::Tz;
};

struct BASConfig {
  // Clamp thresholds per binding for the Fy and Fz channels (N).
  std::array<std::array<double, 2>, 3> f_max = {{{30.0, 30.0},
                                                 {30.0, 30.0},
                                                 {30.0, 30.0}}};
  std::array<BasPair, 2> pairing = {{{Channel::Fy, Channel::Tz},
                                     {Channel::Fz, Channel::Ty}}};
  // First joint of each binding's alignment span; the span ends at the
  // binding's parent joint.
  std::array<Joint, 3> span_first = {Joint::SC2, Joint::EL1, Joint::WR1};

  double threshold(Binding b, Channel force) const;
  void validate() const;
  void validate_for(const ChainModel& model) const;
};

struct AlignedWrench {
  Binding binding = Binding::UA;
  Vec6 fa = Vec6::Zero();  // Fx Fy Fz Tx Ty Tz, sensor frame
  std::array<BasGains, 2> gains{};  // per pairing entry
};

AlignedWrench apply_bas(const ComponentSet& cs, const BASConfig& cfg);

// MC channels with gain 1 and no clamp, AC zeroed; HA's Tx passes through.
AlignedWrench unshaped_wrench(const ComponentSet& cs);

Vec9 bas_torques(const ChainModel& model, const ChainFrames& frames,
                 const std::array<AlignedWrench, 3>& aligned,
                 const BASConfig& cfg);
Vec9 bas_torques(const ChainModel& model, const Vec9& q,
                 const std::array<AlignedWrench, 3>& aligned,
                 const BASConfig& cfg);

}  // namespace flexarm
