#include "flexarm/simulation.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace flexarm {

void HumanSpec::validate() const {
  if (!(upper_arm > 0.0) || !(forearm > 0.0)) {
    throw ConfigError("human segment lengths must be positive");
  }
  if (!shoulder_offset.allFinite()) {
    throw ConfigError("human shoulder offset must be finite");
  }
}

void SimulationConfig::validate() const {
  exo.validate();
  inertials.validate();
  friction.validate();
  if (!(plant_mass_factor > 0.0) || !(plant_friction_factor >= 0.0)) {
    throw ConfigError("plant mismatch factors must be positive");
  }
  controller.validate_for(exo);
  for (const auto& b : bindings) b.validate();
  human.validate();
  if (!q0.allFinite()) throw ConfigError("initial posture must be finite");
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const double v = q0[static_cast<Eigen::Index>(i)];
    if (v < exo.joints[i].lower || v > exo.joints[i].upper) {
      throw ConfigError("initial posture joint " + std::to_string(i + 1) +
                        " lies outside its limits");
    }
  }
  if (intent.kind == IntentSpec::Kind::kJoint) intent.joint.validate();
  if (intent.kind == IntentSpec::Kind::kTarget) intent.target.validate();
  if (!(duration > 0.0)) throw ConfigError("duration must be positive");
  if (substeps < 1) throw ConfigError("substeps must be at least 1");
}

HumanSetup prepare_human(const SimulationConfig& cfg) {
  HumanSetup h;
  h.arm = HumanArm::fitted(cfg.exo, cfg.human.upper_arm, cfg.human.forearm,
                           cfg.human.shoulder_offset, cfg.q0);
  const double dt = cfg.controller.dt / cfg.substeps;
  const double span = cfg.duration + cfg.controller.dt;
  switch (cfg.intent.kind) {
    case IntentSpec::Kind::kNone:
      h.trajectory = HumanTrajectory::still(cfg.q0, dt, span);
      break;
    case IntentSpec::Kind::kJoint:
      h.trajectory = HumanTrajectory::from_joint_intent(cfg.intent.joint,
                                                        cfg.q0, dt, span);
      break;
    case IntentSpec::Kind::kTarget:
      h.trajectory = HumanTrajectory::from_target_intent(
          cfg.intent.target, h.arm, cfg.q0, dt, span);
      break;
  }
  return h;
}

Trace run_scenario(const SimulationConfig& cfg, ControllerMode mode) {
  cfg.validate();
  return run_scenario(cfg, mode, prepare_human(cfg));
}

namespace {

struct Contact {
  std::array<Wrench, 3> physical;
  Vec9 torque = Vec9::Zero();
};

Contact contact(const ChainModel& exo, const ChainFrames& ef, const Vec9& qd,
                const HumanArm& arm, const ChainFrames& hf, const Vec9& hqd,
                const std::array<BindingInterface, 3>& ifaces) {
  Contact c;
  for (Binding b : kBindings) {
    const Wrench w = interface_wrench(
        arm.attachment(hf, b), arm.attachment_twist(hf, b, hqd),
        ef.binding(b), binding_twist(exo, ef, b, qd), ifaces[index(b)]);
    c.physical[index(b)] = w;
    c.torque += span_torque(exo, ef, Joint::SC1, b, w.vector());
  }
  return c;
}

}  // namespace

Trace run_scenario(const SimulationConfig& cfg, ControllerMode mode,
                   const HumanSetup& human) {
  const double dt = cfg.controller.dt;
  const double dt_sub = dt / cfg.substeps;
  PlantModel plant;
  plant.chain = cfg.exo;
  plant.inertials = cfg.inertials.scaled(cfg.plant_mass_factor);
  plant.friction = cfg.friction.scaled(cfg.plant_friction_factor);

  Controller ctrl(mode, cfg.controller, cfg.exo, cfg.inertials, cfg.friction);
  std::mt19937_64 rng(cfg.seed);
  PlantState st;
  st.q = cfg.q0;

  Trace trace;
  trace.scenario = cfg.name;
  trace.mode = mode;
  trace.dt = dt;
  const auto ticks = static_cast<int>(std::llround(cfg.duration / dt));
  trace.rows.reserve(static_cast<std::size_t>(ticks));
  const auto total_energy = [&](const PlantState& s) {
    return kinetic_energy(plant.chain, plant.inertials, s.q, s.qd) +
           potential_energy(plant.chain, plant.inertials, s.q);
  };
  trace.energy.initial = total_energy(st);

  for (int tick = 0; tick < ticks; ++tick) {
    try {
      const auto k0 = static_cast<std::size_t>(tick) *
                      static_cast<std::size_t>(cfg.substeps);
      TraceRow row;
      row.tick = tick;
      row.t = tick * dt;
      row.q = st.q;
      row.qd = st.qd;

      // Sensor sampling.
      const ChainFrames ef = forward_kinematics(cfg.exo, st.q);
      const ChainFrames hf =
          forward_kinematics(human.arm.chain, human.trajectory.q(k0));
      std::array<Wrench, 3> raw;
      for (Binding b : kBindings) {
        const BindingReading r = binding_wrench(
            human.arm.attachment(hf, b),
            human.arm.attachment_twist(hf, b, human.trajectory.qd(k0)),
            ef.binding(b), binding_twist(cfg.exo, ef, b, st.qd),
            cfg.bindings[index(b)], cfg.sensor_noise ? &rng : nullptr);
        raw[index(b)] = r.sensor;
        row.sensor_saturated[index(b)] = r.saturated;
      }

      const ControlOutput out = ctrl.step(st.q, raw);
      row.tau_cmd = out.tau_cmd;
      row.tau_applied = out.tau_applied;
      row.tau_com = out.tau_com;
      row.tau_bas = out.tau_bas;
      row.tau_fcm = out.tau_fcm;
      row.filtered = out.filtered;
      row.modes = out.modes;
      row.bas_gains = out.bas_gains;
      row.k_ce = out.k_ce;
      row.k_cw = out.k_cw;
      row.torque_saturated = out.torque_saturated;

      for (int s = 0; s < cfg.substeps; ++s) {
        const std::size_t k = k0 + static_cast<std::size_t>(s);
        const ChainFrames efs = forward_kinematics(cfg.exo, st.q);
        const ChainFrames hfs =
            forward_kinematics(human.arm.chain, human.trajectory.q(k));
        const Contact c = contact(cfg.exo, efs, st.qd, human.arm, hfs,
                                  human.trajectory.qd(k), cfg.bindings);
        const PlantStepInfo info =
            plant_step(st, out.tau_applied + c.torque, plant, dt_sub);
        trace.energy.input_work += info.input_work;
        trace.energy.friction_work += info.friction_work;
        trace.energy.limit_loss += info.limit_loss;
        if (info.hit_limit) ++trace.energy.limit_events;
      }
      trace.rows.push_back(std::move(row));
    } catch (const SimulationAbort& e) {
      std::ostringstream os;
      os << "simulation aborted at tick " << tick << " (t = " << tick * dt
         << " s): " << e.what();
      throw SimulationAbort(os.str());
    } catch (const DomainError& e) {
      std::ostringstream os;
      os << "simulation aborted at tick " << tick << " (t = " << tick * dt
         << " s): " << e.what();
      throw SimulationAbort(os.str());
    }
  }
  trace.energy.final = total_energy(st);
  return trace;
}

}  // namespace flexarm
