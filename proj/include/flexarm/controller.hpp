#pragma once

#include "flexarm/bas.hpp"
#include "flexarm/classify.hpp"
#include "flexarm/dynamics.hpp"
#include "flexarm/fcm.hpp"

#include <limits>
#include <optional>

namespace flexarm {

enum class ControllerMode { FF, BAS_ONLY, FCM_ONLY, BAS_FCM };

inline constexpr std::array<ControllerMode, 4> kAllModes = {
    ControllerMode::FF, ControllerMode::BAS_ONLY, ControllerMode::FCM_ONLY,
    ControllerMode::BAS_FCM};

// "ff", "bas", "fcm", "bas-fcm".
std::string_view name(ControllerMode m);
ControllerMode mode_from_name(std::string_view s);

struct ControllerConfig {
  double dt = 1.0 / 80.0;
  double filter_cutoff = 10.0;  // Hz, wrenches and state estimates
  double rc_attenuation = 0.0;
  // Fraction of the differentiated acceleration fed to the inertia term of
  // the feedforward. 1 cancels nearly all link inertia through a lagged
  // estimate and destabilizes the coupled loop.
  double inertia_gain = 0.5;
  BASConfig bas;
  FCMConfig fcm;
  Vec9 torque_limits =
      (Vec9() << 40, 40, 40, 40, 20, 20, 8, 8, 8).finished();

  void validate() const;
  void validate_for(const ChainModel& model) const;
};

struct TorqueLimitResult {
  Vec9 tau = Vec9::Zero();
  std::array<bool, kNumJoints> saturated{};
};

TorqueLimitResult torque_limit(const Vec9& tau, const Vec9& limits);

// Velocity and acceleration estimates from encoder positions: second-order
// backward differences followed by a first-order low-pass. Both estimates
// are zero on the first tick.
class DifferentiationState {
 public:
  DifferentiationState(double dt, double cutoff_hz);

  void step(const Vec9& q);
  const Vec9& velocity() const { return qd_; }
  const Vec9& acceleration() const { return qdd_; }

 private:
  double dt_;
  LowPass vel_filter_;
  LowPass acc_filter_;
  std::array<Vec9, 4> history_{};
  int count_ = 0;
  Vec9 qd_ = Vec9::Zero();
  Vec9 qdd_ = Vec9::Zero();
};

struct ControlOutput {
  Vec9 tau_cmd = Vec9::Zero();  // before torque limiting
  Vec9 tau_applied = Vec9::Zero();
  Vec9 tau_com = Vec9::Zero();
  Vec9 tau_bas = Vec9::Zero();  // FF mode: the decoupled J^T MC torque
  Vec9 tau_fcm = Vec9::Zero();
  Vec9 tau_ft = Vec9::Zero();
  std::array<bool, kNumJoints> torque_saturated{};
  std::array<IntentMode, 2> modes = {IntentMode::JointOriented,
                                     IntentMode::JointOriented};
  std::array<std::array<BasGains, 2>, 3> bas_gains{};
  double k_ce = 1.0;
  double k_cw = 1.0;
  std::array<Wrench, 3> filtered{};
  Vec9 qd_est = Vec9::Zero();
  Vec9 qdd_est = Vec9::Zero();
};

class Controller {
 public:
  Controller(ControllerMode mode, ControllerConfig cfg, ChainModel model,
             InertialModel inertials, FrictionParams friction);

  ControlOutput step(const Vec9& q, const std::array<Wrench, 3>& raw);

  ControllerMode mode() const { return mode_; }
  const ControllerConfig& config() const { return cfg_; }

 private:
  ControllerMode mode_;
  ControllerConfig cfg_;
  ChainModel model_;
  InertialModel inertials_;
  FrictionParams friction_;
  FilterState filter_;
  DifferentiationState diff_;
  IntentDistinction idm_;
};

}  // namespace flexarm
