#pragma once

#include "flexarm/chain.hpp"

#include <random>

namespace flexarm {

struct Twist {
  Vec3 v = Vec3::Zero();  // linear velocity, world
  Vec3 w = Vec3::Zero();  // angular velocity, world
};

struct BindingInterface {
  Vec6 stiffness = (Vec6() << 800, 800, 800, 4, 4, 4).finished();
  Vec6 damping = (Vec6() << 40, 40, 40, 0.1, 0.1, 0.1).finished();
  // Sensor pose relative to the cuff frame.
  Eigen::Isometry3d mount = Eigen::Isometry3d::Identity();
  double noise_force = 0.1;    // N, std dev
  double noise_torque = 0.01;  // N*m, std dev
  double range_force = 50.0;
  double range_torque = 5.0;
  // Largest force the human applies through this cuff (N).
  double force_cap = 60.0;

  void validate() const;
};

struct BindingReading {
  Wrench physical;  // cuff frame, acts on the exoskeleton
  Wrench sensor;    // sensor frame, after mount, noise, and clamping
  bool saturated = false;
};

// Spring-damper wrench the human attachment exerts on the cuff, expressed in
// the cuff frame. Pose error uses the position difference and the
// small-angle rotation error.
Wrench interface_wrench(const Frame& human, const Twist& human_twist,
                        const Frame& cuff, const Twist& cuff_twist,
                        const BindingInterface& iface);

// Expresses a cuff-frame wrench at the sensor mounted at `mount`.
Wrench to_sensor(const Wrench& cuff_wrench, const Eigen::Isometry3d& mount);

// Clamps to the sensor ranges; returns true when any channel clamped.
bool saturate(Wrench& w, double range_force, double range_torque);

BindingReading binding_wrench(const Frame& human, const Twist& human_twist,
                              const Frame& cuff, const Twist& cuff_twist,
                              const BindingInterface& iface,
                              std::mt19937_64* rng);

}  // namespace flexarm
