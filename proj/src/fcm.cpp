#include "flexarm/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flexarm {

std::string_view name(IntentMode m) {
  return m == IntentMode::JointOriented ? "joint" : "target";
}

void FCMConfig::validate() const {
  for (Binding b : kBindings) {
    for (Channel c : mc_channels(b)) {
      const double th = thresholds[index(b)][index(c)];
      if (!(th > 0.0) || !std::isfinite(th)) {
        throw ConfigError("fcm.thresholds." + std::string(name(b)) + "." +
                          std::string(kChannelLabels[index(c)]) +
                          " must be positive");
      }
    }
    if (!(normalizers[index(b)] > 0.0)) {
      throw ConfigError("fcm.normalizers." + std::string(name(b)) +
                        " must be positive");
    }
  }
  if (!(lambda_e > 0.0) || !(lambda_w > 0.0)) {
    throw ConfigError("fcm.lambda must be positive");
  }
  if (!(hysteresis >= 0.0) || !(hysteresis < 1.0)) {
    throw ConfigError("fcm.hysteresis must lie in [0, 1)");
  }
}

void FCMConfig::validate_for(const ChainModel& model) const {
  validate();
  const std::array<std::pair<Joint, Binding>, 3> spans = {
      {{shoulder_first, Binding::UA},
       {elbow_first, Binding::FA},
       {wrist_first, Binding::HA}}};
  for (const auto& [first, b] : spans) {
    try {
      span_width(model, first, b);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("fcm span for ") + std::string(name(b)) +
                        ": " + e.what());
    }
  }
}

McGroup mc_group(const ComponentSet& cs, const FCMConfig& cfg) {
  McGroup g;
  for (const auto& lv : cs.mc) {
    g.values.push_back(std::abs(lv.value));
    g.thresholds.push_back(cfg.thresholds[index(cs.binding)][index(lv.channel)]);
  }
  return g;
}

McGroup merge(const McGroup& a, const McGroup& b) {
  McGroup g = a;
  g.values.insert(g.values.end(), b.values.begin(), b.values.end());
  g.thresholds.insert(g.thresholds.end(), b.thresholds.begin(),
                      b.thresholds.end());
  return g;
}

namespace {

bool all_below(const McGroup& g, double scale) {
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (!(std::abs(g.values[i]) < g.thresholds[i] * scale)) return false;
  }
  return true;
}

}  // namespace

IntentMode classify_intent(const McGroup& local, const McGroup& proximal,
                           double hysteresis, IntentMode prev) {
  // Entering target-oriented needs a crossing above th * (1 + band); staying
  // there holds until the values fall below th * (1 - band).
  const double scale = prev == IntentMode::JointOriented ? 1.0 + hysteresis
                                                         : 1.0 - hysteresis;
  if (all_below(local, scale) || all_below(proximal, scale)) {
    return IntentMode::JointOriented;
  }
  return IntentMode::TargetOriented;
}

IntentMode classify_intent(const McGroup& local, const McGroup& proximal,
                           const FCMConfig& cfg, IntentMode prev) {
  return classify_intent(local, proximal, cfg.hysteresis, prev);
}

double magnitude_ratio(double a, double b) {
  if (!(b > 0.0)) {
    throw DegenerateRatioError("magnitude ratio: proximal magnitude is zero");
  }
  if (a / b < 1.0) {
    if (!(a > 0.0)) {
      throw DegenerateRatioError("magnitude ratio: local magnitude is zero");
    }
    return 1.0 - b / a;
  }
  return a / b - 1.0;
}

double magnitude_ratio_elbow(const Vec3& mc_e, const Vec3& mc_s,
                             const FCMConfig& cfg) {
  const double a_e = mc_e.norm() / cfg.normalizers[index(Binding::FA)];
  const double a_s = mc_s.norm() / cfg.normalizers[index(Binding::UA)];
  return magnitude_ratio(a_e, a_s);
}

double magnitude_ratio_wrist(const Vec3& mc_w, const Vec3& mc_e,
                             const Vec3& mc_s, const FCMConfig& cfg) {
  const double a_w = mc_w.norm() / cfg.normalizers[index(Binding::HA)];
  const double a_es = mc_e.norm() / cfg.normalizers[index(Binding::FA)] +
                      mc_s.norm() / cfg.normalizers[index(Binding::UA)];
  return magnitude_ratio(a_w, a_es);
}

double coordination_gain(double p, double lambda) {
  if (!(lambda > 0.0)) {
    throw ConfigError("coordination_gain: lambda must be positive");
  }
  return 2.0 / std::numbers::pi * std::atan(lambda * p) + 1.0;
}

std::array<Vec6, 3> coordination_wrenches(
    const std::array<ComponentSet, 3>& sets) {
  std::array<Vec6, 3> cc;
  for (Binding b : kBindings) {
    cc[index(b)].setZero();
    cc[index(b)].head<3>() = sets[index(b)].cc_force();
  }
  return cc;
}

IntentDistinction::IntentDistinction(FCMConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

IntentResult IntentDistinction::step(const std::array<ComponentSet, 3>& sets) {
  const auto& ua = sets[index(Binding::UA)];
  const auto& fa = sets[index(Binding::FA)];
  const auto& ha = sets[index(Binding::HA)];
  const McGroup g_ua = mc_group(ua, cfg_);
  const McGroup g_fa = mc_group(fa, cfg_);
  const McGroup g_ha = mc_group(ha, cfg_);

  const auto force3 = [](const ComponentSet& cs) {
    return Vec3(cs.cc_uncoupled.empty() ? 0.0 : cs.cc_uncoupled[0].value,
                ComponentSet::get(cs.mc, Channel::Fy),
                ComponentSet::get(cs.mc, Channel::Fz));
  };
  const Vec3 f_s = force3(ua);
  const Vec3 f_e = force3(fa);
  const Vec3 f_w = force3(ha);

  IntentResult r;
  auto& elbow = modes_[static_cast<int>(Stage::Elbow)];
  elbow = classify_intent(g_fa, g_ua, cfg_, elbow);
  if (elbow == IntentMode::TargetOriented) {
    try {
      r.k_ce = coordination_gain(magnitude_ratio_elbow(f_e, f_s, cfg_),
                                 cfg_.lambda_e);
    } catch (const DegenerateRatioError&) {
      elbow = IntentMode::JointOriented;
    }
  }
  auto& wrist = modes_[static_cast<int>(Stage::Wrist)];
  wrist = classify_intent(g_ha, merge(g_ua, g_fa), cfg_, wrist);
  if (wrist == IntentMode::TargetOriented) {
    try {
      r.k_cw = coordination_gain(magnitude_ratio_wrist(f_w, f_e, f_s, cfg_),
                                 cfg_.lambda_w);
    } catch (const DegenerateRatioError&) {
      wrist = IntentMode::JointOriented;
    }
  }
  r.modes = modes_;
  return r;
}

Vec9 fcm_torques(const ChainModel& model, const ChainFrames& frames,
                 const std::array<Vec6, 3>& cc,
                 const std::array<IntentMode, 2>& modes, double k_ce,
                 double k_cw, const FCMConfig& cfg) {
  Vec9 tau = span_torque(model, frames, cfg.shoulder_first, Binding::UA,
                         cc[index(Binding::UA)]);
  if (modes[static_cast<int>(Stage::Elbow)] == IntentMode::TargetOriented) {
    tau += span_torque(model, frames, cfg.elbow_first, Binding::FA,
                       k_ce * cc[index(Binding::FA)]);
  }
  if (modes[static_cast<int>(Stage::Wrist)] == IntentMode::TargetOriented) {
    tau += span_torque(model, frames, cfg.wrist_first, Binding::HA,
                       k_cw * cc[index(Binding::HA)]);
  }
  return tau;
}

Vec9 fcm_torques(const ChainModel& model, const Vec9& q,
                 const std::array<Vec6, 3>& cc,
                 const std::array<IntentMode, 2>& modes, double k_ce,
                 double k_cw, const FCMConfig& cfg) {
  return fcm_torques(model, forward_kinematics(model, q), cc, modes, k_ce,
                     k_cw, cfg);
}

}  // namespace flexarm
