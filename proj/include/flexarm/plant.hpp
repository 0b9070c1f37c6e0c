#pragma once

#include "flexarm/dynamics.hpp"

#include <stdexcept>

namespace flexarm {

class SimulationAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlantState {
  Vec9 q = Vec9::Zero();
  Vec9 qd = Vec9::Zero();
  double t = 0.0;
};

struct PlantStepInfo {
  Vec9 qd_mid = Vec9::Zero();   // (qd_before + qd_after) / 2
  double input_work = 0.0;      // tau . qd_mid dt
  double friction_work = 0.0;   // f . qd_mid dt, dissipated
  double limit_loss = 0.0;      // energy removed by the joint-stop clamp
  bool hit_limit = false;
};

struct PlantModel {
  ChainModel chain;
  InertialModel inertials;
  FrictionParams friction;
  // Joints held fixed at their current position.
  std::array<bool, kNumJoints> locked{};
  bool enforce_limits = true;
  double max_speed = 100.0;  // rad/s, abort threshold
};

// Forward dynamics qdd = M^-1 (tau - h - g - f) with semi-implicit Euler:
// qd' = qd + dt qdd, q' = q + dt qd'. Friction is linearized implicitly
// about qd for stability at large slopes near zero speed. The Coriolis and
// centrifugal torques are re-evaluated once at (qd + qd') / 2; qd' is then
// the velocity between the two positions, and the state-synchronous
// velocity at q is qd_mid.
PlantStepInfo plant_step(PlantState& state, const Vec9& tau,
                         const PlantModel& plant, double dt_sub);

}  // namespace flexarm
