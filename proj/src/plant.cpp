#include "flexarm/plant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace flexarm {

PlantStepInfo plant_step(PlantState& state, const Vec9& tau,
                         const PlantModel& plant, double dt_sub) {
  if (!(dt_sub > 0.0)) throw ConfigError("plant substep must be positive");
  if (!tau.allFinite()) {
    throw SimulationAbort("non-finite joint torque input");
  }
  PlantStepInfo info;
  std::vector<Eigen::Index> free;
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (!plant.locked[static_cast<std::size_t>(i)]) free.push_back(i);
  }
  const auto n = static_cast<Eigen::Index>(free.size());
  const Vec9 qd0 = state.qd;
  Vec9 fric = Vec9::Zero();
  Vec9 slope = Vec9::Zero();
  if (n > 0) {
    Vec9 qd_lock = state.qd;
    for (Eigen::Index i = 0; i < 9; ++i) {
      if (plant.locked[static_cast<std::size_t>(i)]) qd_lock[i] = 0.0;
    }
    const Mat9 m = mass_matrix(plant.chain, plant.inertials, state.q);
    const Vec9 bias = bias_torques(plant.chain, plant.inertials, state.q, qd_lock);
    fric = friction_compensation(plant.friction, qd_lock);
    slope = friction_slope(plant.friction, qd_lock);
    const Vec9 rhs = tau - bias - fric;

    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index r = 0; r < n; ++r) {
      b[r] = dt_sub * rhs[free[static_cast<std::size_t>(r)]];
      for (Eigen::Index c = 0; c < n; ++c) {
        a(r, c) = m(free[static_cast<std::size_t>(r)],
                    free[static_cast<std::size_t>(c)]);
      }
      a(r, r) += dt_sub * std::max(slope[free[static_cast<std::size_t>(r)]], 0.0);
    }
    const auto ldlt = a.ldlt();
    Eigen::VectorXd dv = ldlt.solve(b);
    // One pass with the velocity-dependent bias at the step-averaged speed.
    Vec9 qd_avg = qd_lock;
    for (Eigen::Index r = 0; r < n; ++r) {
      qd_avg[free[static_cast<std::size_t>(r)]] += 0.5 * dv[r];
    }
    const Vec9 rhs_avg =
        tau - bias_torques(plant.chain, plant.inertials, state.q, qd_avg) - fric;
    for (Eigen::Index r = 0; r < n; ++r) {
      b[r] = dt_sub * rhs_avg[free[static_cast<std::size_t>(r)]];
    }
    dv = ldlt.solve(b);
    for (Eigen::Index r = 0; r < n; ++r) {
      state.qd[free[static_cast<std::size_t>(r)]] = qd_lock[free[static_cast<std::size_t>(r)]] + dv[r];
    }
  }
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (plant.locked[static_cast<std::size_t>(i)]) state.qd[i] = 0.0;
  }
  state.q += dt_sub * state.qd;
  state.t += dt_sub;

  info.qd_mid = 0.5 * (qd0 + state.qd);
  info.input_work = tau.dot(info.qd_mid) * dt_sub;
  // Effective friction of the implicit step: f + max(f', 0) dv.
  const Vec9 fric_eff = fric + slope.cwiseMax(0.0).cwiseProduct(state.qd - qd0);
  info.friction_work = fric_eff.dot(info.qd_mid) * dt_sub;

  if (plant.enforce_limits) {
    const Vec9 q_free = state.q;
    const Vec9 qd_free = state.qd;
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto& j = plant.chain.joints[i];
      if (state.q[ii] < j.lower || state.q[ii] > j.upper) {
        state.q[ii] = std::clamp(state.q[ii], j.lower, j.upper);
        state.qd[ii] = 0.0;
        info.hit_limit = true;
      }
    }
    if (info.hit_limit) {
      info.limit_loss =
          kinetic_energy(plant.chain, plant.inertials, q_free, qd_free) +
          potential_energy(plant.chain, plant.inertials, q_free) -
          kinetic_energy(plant.chain, plant.inertials, state.q, state.qd) -
          potential_energy(plant.chain, plant.inertials, state.q);
    }
  }

  if (!state.q.allFinite() || !state.qd.allFinite()) {
    throw SimulationAbort("non-finite plant state");
  }
  for (Eigen::Index i = 0; i < 9; ++i) {
    if (std::abs(state.qd[i]) > plant.max_speed) {
      std::ostringstream os;
      os << "joint " << i + 1 << " speed " << state.qd[i]
         << " rad/s exceeds " << plant.max_speed;
      throw SimulationAbort(os.str());
    }
  }
  return info;
}

}  // namespace flexarm
