#include "flexarm/classify.hpp"

#include <cmath>
#include <numbers>

namespace flexarm {

LowPass::LowPass(int size, double cutoff_hz, double dt)
    : alpha_(alpha_for(cutoff_hz, dt)), y_(Eigen::VectorXd::Zero(size)) {}

double LowPass::alpha_for(double cutoff_hz, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("filter sample period must be positive");
  }
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 / dt)) {
    throw ConfigError("filter cutoff must lie in (0, Nyquist)");
  }
  const double tau = 1.0 / (2.0 * std::numbers::pi * cutoff_hz);
  return dt / (dt + tau);
}

Eigen::VectorXd LowPass::step(const Eigen::VectorXd& x) {
  y_ += alpha_ * (x - y_);
  return y_;
}

FilterState::FilterState(double cutoff_hz, double dt)
    : cutoff_(cutoff_hz),
      dt_(dt),
      filters_{LowPass(6, cutoff_hz, dt), LowPass(6, cutoff_hz, dt),
               LowPass(6, cutoff_hz, dt)} {}

Wrench FilterState::step(Binding b, const Wrench& raw) {
  const Eigen::VectorXd y = filters_[index(b)].step(raw.vector());
  return Wrench::from_vector(Vec6(y));
}

Wrench lowpass_step(FilterState& state, Binding b, const Wrench& raw) {
  return state.step(b, raw);
}

namespace {

using C = Channel;

constexpr std::array<C, 2> kMcArm = {C::Fy, C::Fz};
constexpr std::array<C, 3> kMcHand = {C::Tx, C::Fy, C::Fz};
constexpr std::array<C, 2> kAc = {C::Ty, C::Tz};
constexpr std::array<C, 1> kCcUncoupled = {C::Fx};
constexpr std::array<C, 2> kCcCoupled = {C::Fy, C::Fz};
constexpr std::array<C, 1> kRcArm = {C::Tx};

std::vector<LabeledValue> pick(std::span<const Channel> chans, const Wrench& w,
                               double gain = 1.0) {
  std::vector<LabeledValue> out;
  out.reserve(chans.size());
  for (Channel c : chans) out.push_back({c, gain * w[c]});
  return out;
}

}  // namespace

std::span<const Channel> mc_channels(Binding b) {
  if (b == Binding::HA) return kMcHand;
  return kMcArm;
}

std::span<const Channel> ac_channels(Binding) { return kAc; }

std::span<const Channel> cc_uncoupled_channels(Binding) { return kCcUncoupled; }

std::span<const Channel> cc_coupled_channels(Binding b) {
  if (b == Binding::UA) return {};
  return kCcCoupled;
}

std::span<const Channel> rc_channels(Binding b) {
  if (b == Binding::HA) return {};
  return kRcArm;
}

double ComponentSet::get(std::span<const LabeledValue> set, Channel c) {
  for (const auto& lv : set) {
    if (lv.channel == c) return lv.value;
  }
  throw DomainError("channel " + std::string(kChannelLabels[index(c)]) +
                    " is not in this component category");
}

Eigen::VectorXd ComponentSet::mc_vector() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(mc.size()));
  for (std::size_t i = 0; i < mc.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = mc[i].value;
  }
  return v;
}

Vec3 ComponentSet::cc_force() const {
  Vec3 f = Vec3::Zero();
  for (const auto* set : {&cc_uncoupled, &cc_coupled}) {
    for (const auto& lv : *set) {
      if (index(lv.channel) < 3) f[index(lv.channel)] = lv.value;
    }
  }
  return f;
}

ComponentSet classify(Binding b, const Wrench& w, double rc_attenuation) {
  ComponentSet cs;
  cs.binding = b;
  cs.mc = pick(mc_channels(b), w);
  cs.ac = pick(ac_channels(b), w);
  cs.cc_uncoupled = pick(cc_uncoupled_channels(b), w);
  cs.cc_coupled = pick(cc_coupled_channels(b), w);
  cs.rc = pick(rc_channels(b), w);
  cs.rc_attenuation = rc_attenuation;
  return cs;
}

ComponentSet classify(int binding_id, const Wrench& w, double rc_attenuation) {
  if (binding_id < 0 || binding_id > 2) {
    throw DomainError("unknown binding id " + std::to_string(binding_id));
  }
  return classify(static_cast<Binding>(binding_id), w, rc_attenuation);
}

}  // namespace flexarm
