#pragma once

#include "flexarm/chain.hpp"

#include <utility>

namespace flexarm {

// Two-rod model of a user's arm strapped into an exoskeleton whose segment
// lengths differ from the user's.
struct OffsetGeometry {
  PlanarTwoLink human;
  PlanarTwoLink exo;

  void validate() const;
};

struct BindingImpedance {
  double k_ua = 300.0;  // N*m/rad
  double d_ua = 5.0;    // N*m*s/rad
  double k_fa = 300.0;
  double d_fa = 5.0;

  void validate() const;
};

struct OffsetState {
  double theta_h1 = 0.0;
  double theta_h2 = 0.0;
  double theta_e1 = 0.0;
  double theta_e2 = 0.0;
  double err_ua = 0.0;
  double err_fa = 0.0;
  double rate_err_ua = 0.0;
  double rate_err_fa = 0.0;
};

enum class ElbowBranch { kDown, kUp };

// kDown yields theta2 >= 0, kUp theta2 <= 0.
std::pair<double, double> solve_planar_angles(const PlanarTwoLink& geom,
                                              const Vec2& endpoint,
                                              ElbowBranch branch =
                                                  ElbowBranch::kDown);

OffsetState offset_angles(const OffsetGeometry& geom, const Vec2& endpoint,
                          ElbowBranch branch = ElbowBranch::kDown);

enum class OffsetRateForm {
  // Joint-rate difference of the two chains under the shared endpoint
  // velocity; the UA rate error accumulates into the FA row.
  kCleaned,
  // Literal printed form: the inverse-Jacobian difference multiplies the
  // endpoint position vector.
  kRaw,
};

std::pair<double, double> offset_rates(
    const OffsetGeometry& geom, const Vec2& endpoint,
    const Vec2& endpoint_velocity, ElbowBranch branch = ElbowBranch::kDown,
    OffsetRateForm form = OffsetRateForm::kCleaned);

std::pair<double, double> disturbance_torques(const OffsetState& state,
                                              const BindingImpedance& imp);

}  // namespace flexarm
