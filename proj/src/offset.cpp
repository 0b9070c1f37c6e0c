#include "flexarm/offset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flexarm {

namespace {

constexpr double kReachTolerance = 1e-9;

}  // namespace

void OffsetGeometry::validate() const {
  human.validate();
  exo.validate();
  const double reach_h = human.l1 + human.l2;
  const double reach_e = exo.l1 + exo.l2;
  if (!(std::abs(reach_h - reach_e) < std::min(reach_h, reach_e))) {
    throw ConfigError("offset geometry: human and exoskeleton reaches share no workspace");
  }
}

void BindingImpedance::validate() const {
  if (!(k_ua >= 0.0 && d_ua >= 0.0 && k_fa >= 0.0 && d_fa >= 0.0)) {
    throw ConfigError("binding impedance coefficients must be non-negative");
  }
}

std::pair<double, double> solve_planar_angles(const PlanarTwoLink& geom,
                                              const Vec2& endpoint,
                                              ElbowBranch branch) {
  geom.validate();
  if (!endpoint.allFinite()) {
    throw DomainError("solve_planar_angles: endpoint must be finite");
  }
  const double r = endpoint.norm();
  const double r_min = std::abs(geom.l1 - geom.l2);
  const double r_max = geom.l1 + geom.l2;
  if (r > r_max + kReachTolerance) {
    std::ostringstream os;
    os << "endpoint unreachable: distance " << r << " exceeds reach "
       << r_max;
    throw DomainError(os.str());
  }
  if (r < r_min - kReachTolerance) {
    std::ostringstream os;
    os << "endpoint unreachable: distance " << r
       << " is inside the inner radius " << r_min;
    throw DomainError(os.str());
  }
  // Law of cosines for the elbow angle.
  const double c2 = std::clamp(
      (r * r - geom.l1 * geom.l1 - geom.l2 * geom.l2) / (2.0 * geom.l1 * geom.l2),
      -1.0, 1.0);
  double theta2 = std::acos(c2);
  if (branch == ElbowBranch::kUp) theta2 = -theta2;
  const double theta1 =
      std::atan2(endpoint.y(), endpoint.x()) -
      std::atan2(geom.l2 * std::sin(theta2), geom.l1 + geom.l2 * std::cos(theta2));
  return {theta1, theta2};
}

OffsetState offset_angles(const OffsetGeometry& geom, const Vec2& endpoint,
                          ElbowBranch branch) {
  OffsetState s;
  try {
    std::tie(s.theta_h1, s.theta_h2) =
        solve_planar_angles(geom.human, endpoint, branch);
  } catch (const DomainError& e) {
    throw DomainError(std::string("human chain: ") + e.what());
  }
  try {
    std::tie(s.theta_e1, s.theta_e2) =
        solve_planar_angles(geom.exo, endpoint, branch);
  } catch (const DomainError& e) {
    throw DomainError(std::string("exoskeleton chain: ") + e.what());
  }
  s.err_ua = s.theta_e1 - s.theta_h1;
  s.err_fa = (s.theta_e1 + s.theta_e2) - (s.theta_h1 + s.theta_h2);
  return s;
}

std::pair<double, double> offset_rates(const OffsetGeometry& geom,
                                       const Vec2& endpoint,
                                       const Vec2& endpoint_velocity,
                                       ElbowBranch branch,
                                       OffsetRateForm form) {
  const OffsetState s = offset_angles(geom, endpoint, branch);
  const Mat2 inv_e = planar_jacobian_inverse(geom.exo, s.theta_e1, s.theta_e2);
  const Mat2 inv_h =
      planar_jacobian_inverse(geom.human, s.theta_h1, s.theta_h2);
  const Vec2 input =
      form == OffsetRateForm::kCleaned ? endpoint_velocity : endpoint;
  const Vec2 diff = (inv_e - inv_h) * input;
  const double rate_ua = diff.x();
  const double rate_fa = diff.y() + rate_ua;
  return {rate_ua, rate_fa};
}

std::pair<double, double> disturbance_torques(const OffsetState& state,
                                              const BindingImpedance& imp) {
  return {imp.k_ua * state.err_ua + imp.d_ua * state.rate_err_ua,
          imp.k_fa * state.err_fa + imp.d_fa * state.rate_err_fa};
}

}  // namespace flexarm
