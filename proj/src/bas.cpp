#include "flexarm/bas.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flexarm {

BasGains bas_gains(double f, double f_max) {
  if (!(f_max > 0.0) || !std::isfinite(f_max)) {
    throw ConfigError("bas_gains: f_max must be positive and finite");
  }
  const double fc = std::clamp(f, -f_max, f_max);
  const double phase = std::abs(std::numbers::pi * fc / f_max);
  return {(std::sin(phase) + 1.0) / 2.0, (std::cos(phase) + 1.0) / 2.0};
}

double BASConfig::threshold(Binding b, Channel force) const {
  if (force == Channel::Fy) return f_max[index(b)][0];
  if (force == Channel::Fz) return f_max[index(b)][1];
  throw ConfigError("BAS thresholds exist only for Fy and Fz");
}

void BASConfig::validate() const {
  for (Binding b : kBindings) {
    for (double v : f_max[index(b)]) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(std::string("bas.f_max.") + std::string(name(b)) +
                          " must be positive");
      }
    }
  }
  const auto is_force = [](Channel c) {
    return c == Channel::Fy || c == Channel::Fz;
  };
  const auto is_torque = [](Channel c) {
    return c == Channel::Ty || c == Channel::Tz;
  };
  const auto& [a, b] = pairing;
  if (!is_force(a.force) || !is_force(b.force) || a.force == b.force ||
      !is_torque(a.torque) || !is_torque(b.torque) || a.torque == b.torque) {
    throw ConfigError(
        "bas.pairing must map {Fy, Fz} one-to-one onto {Ty, Tz}");
  }
}

void BASConfig::validate_for(const ChainModel& model) const {
  validate();
  for (Binding b : kBindings) {
    try {
      span_width(model, span_first[index(b)], b);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("bas span for ") + std::string(name(b)) +
                        ": " + e.what());
    }
  }
}

AlignedWrench apply_bas(const ComponentSet& cs, const BASConfig& cfg) {
  AlignedWrench out;
  out.binding = cs.binding;
  for (std::size_t i = 0; i < cfg.pairing.size(); ++i) {
    const BasPair& p = cfg.pairing[i];
    const double f_max = cfg.threshold(cs.binding, p.force);
    const double f = std::clamp(cs.mc_value(p.force), -f_max, f_max);
    const BasGains g = bas_gains(f, f_max);
    out.gains[i] = g;
    out.fa[index(p.force)] = g.k_f * f;
    out.fa[index(p.torque)] = g.k_t * cs.ac_value(p.torque);
  }
  if (cs.binding == Binding::HA) {
    out.fa[index(Channel::Tx)] = cs.mc_value(Channel::Tx);
  }
  return out;
}

AlignedWrench unshaped_wrench(const ComponentSet& cs) {
  AlignedWrench out;
  out.binding = cs.binding;
  for (const auto& lv : cs.mc) out.fa[index(lv.channel)] = lv.value;
  out.gains = {BasGains{1.0, 0.0}, BasGains{1.0, 0.0}};
  return out;
}

Vec9 bas_torques(const ChainModel& model, const ChainFrames& frames,
                 const std::array<AlignedWrench, 3>& aligned,
                 const BASConfig& cfg) {
  Vec9 tau = Vec9::Zero();
  for (Binding b : kBindings) {
    const AlignedWrench& a = aligned[index(b)];
    if (a.binding != b) {
      throw ConfigError("bas_torques: aligned wrench order must be UA, FA, HA");
    }
    tau += span_torque(model, frames, cfg.span_first[index(b)], b, a.fa);
  }
  return tau;
}

Vec9 bas_torques(const ChainModel& model, const Vec9& q,
                 const std::array<AlignedWrench, 3>& aligned,
                 const BASConfig& cfg) {
  return bas_torques(model, forward_kinematics(model, q), aligned, cfg);
}

}  // namespace flexarm
