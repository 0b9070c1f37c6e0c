#pragma once

#include "flexarm/common.hpp"

#include <span>
#include <vector>

namespace flexarm {

// First-order exponential low-pass, y += alpha * (x - y), zero initial state.
class LowPass {
 public:
  LowPass() = default;
  LowPass(int size, double cutoff_hz, double dt);

  static double alpha_for(double cutoff_hz, double dt);

  Eigen::VectorXd step(const Eigen::VectorXd& x);
  const Eigen::VectorXd& value() const { return y_; }
  double alpha() const { return alpha_; }
  void reset() { y_.setZero(); }

 private:
  double alpha_ = 1.0;
  Eigen::VectorXd y_;
};

// One 6-channel filter per binding.
class FilterState {
 public:
  FilterState(double cutoff_hz, double dt);

  Wrench step(Binding b, const Wrench& raw);
  double cutoff() const { return cutoff_; }
  double dt() const { return dt_; }
  double alpha() const { return filters_[0].alpha(); }

 private:
  double cutoff_;
  double dt_;
  std::array<LowPass, 3> filters_;
};

Wrench lowpass_step(FilterState& state, Binding b, const Wrench& raw);

struct LabeledValue {
  Channel channel;
  double value;

  bool operator==(const LabeledValue&) const = default;
};

struct ComponentSet {
  Binding binding = Binding::UA;
  std::vector<LabeledValue> mc;
  std::vector<LabeledValue> ac;
  std::vector<LabeledValue> cc_uncoupled;
  std::vector<LabeledValue> cc_coupled;
  // Recorded but not used by the control law.
  std::vector<LabeledValue> rc;
  double rc_attenuation = 0.0;

  // Value of a channel in a category; throws DomainError if absent.
  static double get(std::span<const LabeledValue> set, Channel c);
  double mc_value(Channel c) const { return get(mc, c); }
  double ac_value(Channel c) const { return get(ac, c); }
  Eigen::VectorXd mc_vector() const;
  // Coordination force (Fx, Fy, Fz) from the CC channels; channels that are
  // not CC for this binding read as zero.
  Vec3 cc_force() const;
};

// Table membership per binding.
std::span<const Channel> mc_channels(Binding b);
std::span<const Channel> ac_channels(Binding b);
std::span<const Channel> cc_uncoupled_channels(Binding b);
std::span<const Channel> cc_coupled_channels(Binding b);
std::span<const Channel> rc_channels(Binding b);

ComponentSet classify(Binding b, const Wrench& w, double rc_attenuation = 0.0);

// Integer-id overload for external callers; throws DomainError for ids
// outside {0, 1, 2}.
ComponentSet classify(int binding_id, const Wrench& w,
                      double rc_attenuation = 0.0);

}  // namespace flexarm
