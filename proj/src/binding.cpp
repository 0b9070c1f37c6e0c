#include "flexarm/binding.hpp"

#include <algorithm>
#include <cmath>

namespace flexarm {

void BindingInterface::validate() const {
  if (!((stiffness.array() >= 0.0).all() && (damping.array() >= 0.0).all())) {
    throw ConfigError("binding stiffness and damping must be non-negative");
  }
  if (!(noise_force >= 0.0) || !(noise_torque >= 0.0)) {
    throw ConfigError("binding noise must be non-negative");
  }
  if (!(range_force > 0.0) || !(range_torque > 0.0)) {
    throw ConfigError("sensor ranges must be positive");
  }
  if (!(force_cap > 0.0)) throw ConfigError("force cap must be positive");
  const Mat3 r = mount.linear();
  if ((r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ConfigError("binding mount must be a rigid transform");
  }
}

Wrench interface_wrench(const Frame& human, const Twist& human_twist,
                        const Frame& cuff, const Twist& cuff_twist,
                        const BindingInterface& iface) {
  const Mat3 rt = cuff.R.transpose();
  const Vec3 dp = rt * (human.p - cuff.p);
  const Mat3 re = rt * human.R;
  const Vec3 dr(0.5 * (re(2, 1) - re(1, 2)), 0.5 * (re(0, 2) - re(2, 0)),
                0.5 * (re(1, 0) - re(0, 1)));
  const Vec3 dv = rt * (human_twist.v - cuff_twist.v);
  const Vec3 dw = rt * (human_twist.w - cuff_twist.w);
  Wrench w;
  w.f = iface.stiffness.head<3>().cwiseProduct(dp) +
        iface.damping.head<3>().cwiseProduct(dv);
  w.t = iface.stiffness.tail<3>().cwiseProduct(dr) +
        iface.damping.tail<3>().cwiseProduct(dw);
  const double fn = w.f.norm();
  if (fn > iface.force_cap) w.f *= iface.force_cap / fn;
  return w;
}

Wrench to_sensor(const Wrench& cuff_wrench, const Eigen::Isometry3d& mount) {
  const Mat3 rt = mount.linear().transpose();
  const Vec3& r = mount.translation();
  return {rt * cuff_wrench.f, rt * (cuff_wrench.t - r.cross(cuff_wrench.f))};
}

bool saturate(Wrench& w, double range_force, double range_torque) {
  bool sat = false;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(w.f[i]) > range_force) sat = true;
    if (std::abs(w.t[i]) > range_torque) sat = true;
    w.f[i] = std::clamp(w.f[i], -range_force, range_force);
    w.t[i] = std::clamp(w.t[i], -range_torque, range_torque);
  }
  return sat;
}

BindingReading binding_wrench(const Frame& human, const Twist& human_twist,
                              const Frame& cuff, const Twist& cuff_twist,
                              const BindingInterface& iface,
                              std::mt19937_64* rng) {
  BindingReading r;
  r.physical = interface_wrench(human, human_twist, cuff, cuff_twist, iface);
  r.sensor = to_sensor(r.physical, iface.mount);
  if (rng != nullptr) {
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 3; ++i) r.sensor.f[i] += iface.noise_force * n(*rng);
    for (int i = 0; i < 3; ++i) r.sensor.t[i] += iface.noise_torque * n(*rng);
  }
  r.saturated = saturate(r.sensor, iface.range_force, iface.range_torque);
  return r;
}

}  // namespace flexarm
