#pragma once

#include "flexarm/binding.hpp"
#include "flexarm/controller.hpp"
#include "flexarm/intent.hpp"
#include "flexarm/plant.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace flexarm {

struct HumanSpec {
  double upper_arm = 0.332;
  double forearm = 0.273;
  Vec3 shoulder_offset = Vec3(0.01, -0.01, 0.015);

  void validate() const;
};

struct IntentSpec {
  enum class Kind { kNone, kJoint, kTarget };
  Kind kind = Kind::kNone;
  JointIntent joint;
  TargetIntent target;
};

struct SimulationConfig {
  std::string name = "scenario";
  ChainModel exo = ChainModel::default_model();
  InertialModel inertials = InertialModel::default_for(exo);
  FrictionParams friction;
  double plant_mass_factor = 1.05;
  double plant_friction_factor = 1.2;
  ControllerConfig controller;
  std::array<BindingInterface, 3> bindings;
  HumanSpec human;
  Vec9 q0 = Vec9::Zero();
  IntentSpec intent;
  double duration = 5.0;
  int substeps = 10;
  std::uint64_t seed = 1;
  bool sensor_noise = true;

  void validate() const;
};

struct TraceRow {
  int tick = 0;
  double t = 0.0;
  Vec9 q = Vec9::Zero();
  Vec9 qd = Vec9::Zero();
  Vec9 tau_cmd = Vec9::Zero();
  Vec9 tau_applied = Vec9::Zero();
  Vec9 tau_com = Vec9::Zero();
  Vec9 tau_bas = Vec9::Zero();
  Vec9 tau_fcm = Vec9::Zero();
  std::array<Wrench, 3> filtered{};
  std::array<IntentMode, 2> modes{};
  std::array<std::array<BasGains, 2>, 3> bas_gains{};
  double k_ce = 1.0;
  double k_cw = 1.0;
  std::array<bool, 3> sensor_saturated{};
  std::array<bool, kNumJoints> torque_saturated{};
};

struct EnergyLedger {
  double initial = 0.0;       // kinetic + potential at t = 0
  double final = 0.0;
  double input_work = 0.0;    // actuator and binding work
  double friction_work = 0.0;
  double limit_loss = 0.0;
  int limit_events = 0;

  double residual() const {
    return (final - initial) - (input_work - friction_work - limit_loss);
  }
};

struct Trace {
  std::string scenario;
  ControllerMode mode = ControllerMode::FF;
  double dt = 1.0 / 80.0;
  std::vector<TraceRow> rows;
  EnergyLedger energy;
};

// Human chain and joint trajectory for a configuration.
struct HumanSetup {
  HumanArm arm;
  HumanTrajectory trajectory;
};
HumanSetup prepare_human(const SimulationConfig& cfg);

// Closed loop: sensors and controller at the control period, plant and
// binding forces at the substep.
Trace run_scenario(const SimulationConfig& cfg, ControllerMode mode);
Trace run_scenario(const SimulationConfig& cfg, ControllerMode mode,
                   const HumanSetup& human);

}  // namespace flexarm
