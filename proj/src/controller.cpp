#include "flexarm/controller.hpp"

#include <algorithm>
#include <cmath>

namespace flexarm {

std::string_view name(ControllerMode m) {
  switch (m) {
    case ControllerMode::FF:
      return "ff";
    case ControllerMode::BAS_ONLY:
      return "bas";
    case ControllerMode::FCM_ONLY:
      return "fcm";
    case ControllerMode::BAS_FCM:
      return "bas-fcm";
  }
  return "?";
}

ControllerMode mode_from_name(std::string_view s) {
  for (ControllerMode m : kAllModes) {
    if (name(m) == s) return m;
  }
  throw ConfigError("unknown controller mode '" + std::string(s) + "'");
}

void ControllerConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("controller.dt must be positive");
  }
  LowPass::alpha_for(filter_cutoff, dt);
  if (!(rc_attenuation >= 0.0 && rc_attenuation <= 1.0)) {
    throw ConfigError("controller.rc_attenuation must lie in [0, 1]");
  }
  if (!(inertia_gain >= 0.0 && inertia_gain <= 1.0)) {
    throw ConfigError("controller.inertia_gain must lie in [0, 1]");
  }
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (!(torque_limits[i] > 0.0)) {
      throw ConfigError("controller.torque_limits must be positive");
    }
  }
  bas.validate();
  fcm.validate();
}

void ControllerConfig::validate_for(const ChainModel& model) const {
  validate();
  model.validate();
  bas.validate_for(model);
  fcm.validate_for(model);
}

TorqueLimitResult torque_limit(const Vec9& tau, const Vec9& limits) {
  TorqueLimitResult r;
  for (Eigen::Index i = 0; i < 9; ++i) {
    const double lim = limits[i];
    if (!(lim > 0.0)) throw ConfigError("torque limits must be positive");
    r.tau[i] = std::clamp(tau[i], -lim, lim);
    r.saturated[static_cast<std::size_t>(i)] = std::abs(tau[i]) > lim;
  }
  return r;
}

DifferentiationState::DifferentiationState(double dt, double cutoff_hz)
    : dt_(dt),
      vel_filter_(9, cutoff_hz, dt),
      acc_filter_(9, cutoff_hz, dt) {}

void DifferentiationState::step(const Vec9& q) {
  for (std::size_t i = history_.size() - 1; i > 0; --i) {
    history_[i] = history_[i - 1];
  }
  history_[0] = q;
  ++count_;
  const auto& h = history_;
  Vec9 v = Vec9::Zero();
  Vec9 a = Vec9::Zero();
  if (count_ == 2) {
    v = (h[0] - h[1]) / dt_;
  } else if (count_ >= 3) {
    v = (3.0 * h[0] - 4.0 * h[1] + h[2]) / (2.0 * dt_);
  }
  if (count_ == 3) {
    a = (h[0] - 2.0 * h[1] + h[2]) / (dt_ * dt_);
  } else if (count_ >= 4) {
    a = (2.0 * h[0] - 5.0 * h[1] + 4.0 * h[2] - h[3]) / (dt_ * dt_);
  }
  qd_ = vel_filter_.step(v);
  qdd_ = acc_filter_.step(a);
}

Controller::Controller(ControllerMode mode, ControllerConfig cfg,
                       ChainModel model, InertialModel inertials,
                       FrictionParams friction)
    : mode_(mode),
      cfg_(std::move(cfg)),
      model_(std::move(model)),
      inertials_(std::move(inertials)),
      friction_(std::move(friction)),
      filter_(cfg_.filter_cutoff, cfg_.dt),
      diff_(cfg_.dt, cfg_.filter_cutoff),
      idm_(cfg_.fcm) {
  cfg_.validate_for(model_);
  inertials_.validate();
  friction_.validate();
}

ControlOutput Controller::step(const Vec9& q,
                               const std::array<Wrench, 3>& raw) {
  ControlOutput out;
  std::array<ComponentSet, 3> sets;
  for (Binding b : kBindings) {
    out.filtered[index(b)] = filter_.step(b, raw[index(b)]);
    sets[index(b)] = classify(b, out.filtered[index(b)], cfg_.rc_attenuation);
  }
  const ChainFrames frames = forward_kinematics(model_, q);

  const bool shaped = mode_ == ControllerMode::BAS_ONLY ||
                      mode_ == ControllerMode::BAS_FCM;
  const bool coordinated = mode_ == ControllerMode::FCM_ONLY ||
                           mode_ == ControllerMode::BAS_FCM;

  std::array<AlignedWrench, 3> aligned;
  for (Binding b : kBindings) {
    aligned[index(b)] = shaped ? apply_bas(sets[index(b)], cfg_.bas)
                               : unshaped_wrench(sets[index(b)]);
    out.bas_gains[index(b)] = aligned[index(b)].gains;
  }
  out.tau_bas = bas_torques(model_, frames, aligned, cfg_.bas);

  // The intent state advances every tick so mode histories stay comparable.
  const IntentResult intent = idm_.step(sets);
  if (coordinated) {
    out.modes = intent.modes;
    out.k_ce = intent.k_ce;
    out.k_cw = intent.k_cw;
    out.tau_fcm = fcm_torques(model_, frames, coordination_wrenches(sets),
                              intent.modes, intent.k_ce, intent.k_cw,
                              cfg_.fcm);
  }

  diff_.step(q);
  out.qd_est = diff_.velocity();
  out.qdd_est = diff_.acceleration();
  out.tau_com = feedforward(model_, inertials_, friction_, q, out.qd_est,
                            cfg_.inertia_gain * out.qdd_est);

  out.tau_ft = out.tau_bas + out.tau_fcm;
  out.tau_cmd = out.tau_com + out.tau_ft;
  const TorqueLimitResult lim = torque_limit(out.tau_cmd, cfg_.torque_limits);
  out.tau_applied = lim.tau;
  out.torque_saturated = lim.saturated;
  return out;
}

}  // namespace flexarm
