#pragma once

#include "flexarm/chain.hpp"

namespace flexarm {

struct LinkInertial {
  double mass = 1.0;
  Vec3 com = Vec3::Zero();        // link frame
  Mat3 inertia = Mat3::Identity();  // about the COM, link frame

  void validate() const;
};

struct InertialModel {
  std::array<LinkInertial, kNumJoints> links;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  // Reflected rotor inertia per joint, kg*m^2.
  Vec9 armature = Vec9::Zero();

  void validate() const;
  // Masses 1.5 kg (proximal) down to 0.3 kg (hand), rod-like inertias with
  // each COM halfway to the next joint, and geared-actuator armature.
  static InertialModel default_for(const ChainModel& chain);
  InertialModel scaled(double mass_factor) const;
};

struct FrictionParams {
  Vec9 f_c = Vec9::Constant(0.5);   // N*m
  Vec9 f_s = Vec9::Constant(1.0);   // N*m
  Vec9 v_s = Vec9::Constant(0.05);  // rad/s
  Vec9 a = Vec9::Constant(0.01);    // rad/s
  // Below this speed sgn(v) in the Stribeck term is replaced by
  // sgn(v) * smoothstep(|v| / sign_blend).
  double sign_blend = 1e-4;

  void validate() const;
  FrictionParams scaled(double factor) const;
};

Vec9 inverse_dynamics(const ChainModel& chain, const InertialModel& inertials,
                      const Vec9& q, const Vec9& qd, const Vec9& qdd);
Vec9 gravity_torques(const ChainModel& chain, const InertialModel& inertials,
                     const Vec9& q);
// Coriolis/centrifugal plus gravity, h(q, qd) + g(q).
Vec9 bias_torques(const ChainModel& chain, const InertialModel& inertials,
                  const Vec9& q, const Vec9& qd);
Mat9 mass_matrix(const ChainModel& chain, const InertialModel& inertials,
                 const Vec9& q);

double kinetic_energy(const ChainModel& chain, const InertialModel& inertials,
                      const Vec9& q, const Vec9& qd);
double potential_energy(const ChainModel& chain, const InertialModel& inertials,
                        const Vec9& q);

double friction_scalar(double f_c, double f_s, double v_s, double a, double v,
                       double sign_blend = 1e-4);
Vec9 friction_compensation(const FrictionParams& params, const Vec9& v);
// Per-joint derivative d f / d v.
Vec9 friction_slope(const FrictionParams& params, const Vec9& v);

Vec9 feedforward(const ChainModel& chain, const InertialModel& inertials,
                 const FrictionParams& friction, const Vec9& q,
                 const Vec9& qd_est, const Vec9& qdd_est);

}  // namespace flexarm
