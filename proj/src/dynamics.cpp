#include "flexarm/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace flexarm {

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return s;
}

struct LinkKinematics {
  std::array<Vec3, kNumJoints> omega;
  std::array<Vec3, kNumJoints> com;  // world COM positions
  std::array<Mat3, kNumJoints> inertia;  // world-aligned, about the COM
};

LinkKinematics link_geometry(const InertialModel& inertials,
                             const ChainFrames& frames) {
  LinkKinematics k;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const Frame& f = frames.joints[i];
    const LinkInertial& l = inertials.links[i];
    k.com[i] = f.p + f.R * l.com;
    k.inertia[i] = f.R * l.inertia * f.R.transpose();
  }
  return k;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

void LinkInertial::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ConfigError("link mass must be positive");
  }
  if (!com.allFinite() || !inertia.allFinite()) {
    throw ConfigError("link inertial parameters must be finite");
  }
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("link inertia must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> es(inertia);
  if (!(es.eigenvalues().minCoeff() > 1e-10)) {
    throw ConfigError("link inertia must be positive definite");
  }
}

void InertialModel::validate() const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    try {
      links[i].validate();
    } catch (const ConfigError& e) {
      throw ConfigError("link " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  if (!gravity.allFinite()) throw ConfigError("gravity must be finite");
  if (!armature.allFinite() || armature.minCoeff() < 0.0) {
    throw ConfigError("armature must be finite and non-negative");
  }
}

InertialModel InertialModel::default_for(const ChainModel& chain) {
  static constexpr std::array<double, kNumJoints> kMass = {
      1.5, 1.2, 1.0, 1.2, 0.8, 0.9, 0.5, 0.4, 0.3};
  constexpr double kRadius = 0.04;
  InertialModel m;
  m.armature << 0.03, 0.03, 0.03, 0.03, 0.02, 0.02, 0.01, 0.01, 0.01;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    LinkInertial& l = m.links[i];
    l.mass = kMass[i];
    // Vector to the next joint, in this link's frame.
    Vec3 span = i + 1 < kNumJoints ? chain.joints[i + 1].origin.translation()
                                   : Vec3(0.0, 0.0, -0.08);
    if (span.norm() < 1e-3) span = Vec3(0.0, 0.0, -0.02);
    l.com = 0.5 * span;
    const double len = span.norm();
    const double tr = l.mass * (len * len / 12.0 + kRadius * kRadius / 4.0);
    const double ax = l.mass * kRadius * kRadius / 2.0;
    const Vec3 dir = span.normalized();
    l.inertia = tr * (Mat3::Identity() - dir * dir.transpose()) +
                ax * dir * dir.transpose();
  }
  return m;
}

InertialModel InertialModel::scaled(double mass_factor) const {
  if (!(mass_factor > 0.0)) throw ConfigError("mass factor must be positive");
  InertialModel m = *this;
  for (auto& l : m.links) {
    l.mass *= mass_factor;
    l.inertia *= mass_factor;
  }
  m.armature *= mass_factor;
  return m;
}

void FrictionParams::validate() const {
  for (Eigen::Index i = 0; i < 9; ++i) {
    const std::string j = "joint " + std::to_string(i + 1);
    if (!(f_c[i] >= 0.0) || !(f_s[i] >= f_c[i]) || !std::isfinite(f_s[i])) {
      throw ConfigError(j + " friction must satisfy f_s >= f_c >= 0");
    }
    if (!(v_s[i] > 0.0) || !(a[i] > 0.0)) {
      throw ConfigError(j + " friction v_s and a must be positive");
    }
  }
  if (!(sign_blend > 0.0)) {
    throw ConfigError("friction sign_blend must be positive");
  }
}

FrictionParams FrictionParams::scaled(double factor) const {
  FrictionParams p = *this;
  p.f_c *= factor;
  p.f_s *= factor;
  return p;
}

Vec9 inverse_dynamics(const ChainModel& chain, const InertialModel& inertials,
                      const Vec9& q, const Vec9& qd, const Vec9& qdd) {
  if (!qd.allFinite() || !qdd.allFinite()) {
    throw DomainError("inverse_dynamics: state must be finite");
  }
  const ChainFrames frames = forward_kinematics(chain, q);
  const LinkKinematics geo = link_geometry(inertials, frames);

  // Forward pass in world coordinates. lin = linear acceleration of the
  // current joint origin; gravity enters as a base acceleration.
  std::array<Vec3, kNumJoints> omega, alpha, acc_com;
  Vec3 w = Vec3::Zero();
  Vec3 wd = Vec3::Zero();
  Vec3 lin = -inertials.gravity;
  Vec3 prev_p = Vec3::Zero();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    const Vec3& z = frames.axes[i];
    const Vec3& p = frames.joints[i].p;
    const Vec3 d = p - prev_p;
    lin = lin + wd.cross(d) + w.cross(w.cross(d));
    const Vec3 w_new = w + z * qd[ii];
    wd = wd + z * qdd[ii] + w.cross(z * qd[ii]);
    w = w_new;
    const Vec3 r = geo.com[i] - p;
    acc_com[i] = lin + wd.cross(r) + w.cross(w.cross(r));
    omega[i] = w;
    alpha[i] = wd;
    prev_p = p;
  }

  // Backward pass: forces and moments about each joint origin.
  Vec9 tau;
  Vec3 f_next = Vec3::Zero();
  Vec3 n_next = Vec3::Zero();
  for (std::size_t k = kNumJoints; k-- > 0;) {
    const Vec3& p = frames.joints[k].p;
    const double m = inertials.links[k].mass;
    const Vec3 force = m * acc_com[k];
    const Vec3 moment =
        geo.inertia[k] * alpha[k] + omega[k].cross(geo.inertia[k] * omega[k]);
    Vec3 n = moment + (geo.com[k] - p).cross(force) + n_next;
    if (k + 1 < kNumJoints) {
      n += (frames.joints[k + 1].p - p).cross(f_next);
    }
    const Vec3 f = force + f_next;
    const auto kk = static_cast<Eigen::Index>(k);
    tau[kk] = frames.axes[k].dot(n) + inertials.armature[kk] * qdd[kk];
    f_next = f;
    n_next = n;
  }
  return tau;
}

Vec9 gravity_torques(const ChainModel& chain, const InertialModel& inertials,
                     const Vec9& q) {
  return inverse_dynamics(chain, inertials, q, Vec9::Zero(), Vec9::Zero());
}

Vec9 bias_torques(const ChainModel& chain, const InertialModel& inertials,
                  const Vec9& q, const Vec9& qd) {
  return inverse_dynamics(chain, inertials, q, qd, Vec9::Zero());
}

Mat9 mass_matrix(const ChainModel& chain, const InertialModel& inertials,
                 const Vec9& q) {
  const ChainFrames frames = forward_kinematics(chain, q);
  const LinkKinematics geo = link_geometry(inertials, frames);

  // Composite bodies i..n as spatial inertias about the world origin:
  // mass, first moment h = m c, rotational inertia about the origin.
  Mat9 M = Mat9::Zero();
  double mc = 0.0;
  Vec3 hc = Vec3::Zero();
  Mat3 ic = Mat3::Zero();
  for (std::size_t i = kNumJoints; i-- > 0;) {
    const double m = inertials.links[i].mass;
    const Vec3& c = geo.com[i];
    mc += m;
    hc += m * c;
    ic += geo.inertia[i] + m * skew(c) * skew(c).transpose();

    // Unit rate at joint i: omega = z_i, origin velocity p_i x z_i.
    const Vec3& z = frames.axes[i];
    const Vec3 v_o = frames.joints[i].p.cross(z);
    const Vec3 lin_mom = mc * v_o + z.cross(hc);
    const Vec3 ang_mom = ic * z + hc.cross(v_o);
    for (std::size_t j = 0; j <= i; ++j) {
      const double mji = frames.axes[j].dot(
          ang_mom - frames.joints[j].p.cross(lin_mom));
      M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = mji;
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mji;
    }
  }
  M.diagonal() += inertials.armature;
  return M;
}

double kinetic_energy(const ChainModel& chain, const InertialModel& inertials,
                      const Vec9& q, const Vec9& qd) {
  const ChainFrames frames = forward_kinematics(chain, q);
  const LinkKinematics geo = link_geometry(inertials, frames);
  double t = 0.0;
  Vec3 w = Vec3::Zero();
  Vec3 v = Vec3::Zero();  // velocity of the current joint origin
  Vec3 prev_p = Vec3::Zero();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const Vec3& p = frames.joints[i].p;
    v = v + w.cross(p - prev_p);
    w = w + frames.axes[i] * qd[static_cast<Eigen::Index>(i)];
    const Vec3 vc = v + w.cross(geo.com[i] - p);
    t += 0.5 * inertials.links[i].mass * vc.squaredNorm() +
         0.5 * w.dot(geo.inertia[i] * w);
    prev_p = p;
  }
  return t + 0.5 * qd.dot(inertials.armature.cwiseProduct(qd));
}

double potential_energy(const ChainModel& chain, const InertialModel& inertials,
                        const Vec9& q) {
  const ChainFrames frames = forward_kinematics(chain, q);
  const LinkKinematics geo = link_geometry(inertials, frames);
  double v = 0.0;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    v -= inertials.links[i].mass * inertials.gravity.dot(geo.com[i]);
  }
  return v;
}

double friction_scalar(double f_c, double f_s, double v_s, double a, double v,
                       double sign_blend) {
  if (v == 0.0) return 0.0;
  const double av = std::abs(v);
  const double sgn = v > 0.0 ? 1.0 : -1.0;
  const double s = av >= sign_blend ? sgn : sgn * smoothstep(av / sign_blend);
  return 2.0 * f_c / std::numbers::pi * std::atan(v / a) +
         (f_s - f_c) * std::exp(-av / v_s) * s;
}

Vec9 friction_compensation(const FrictionParams& params, const Vec9& v) {
  Vec9 f;
  for (Eigen::Index i = 0; i < 9; ++i) {
    f[i] = friction_scalar(params.f_c[i], params.f_s[i], params.v_s[i],
                           params.a[i], v[i], params.sign_blend);
  }
  return f;
}

Vec9 friction_slope(const FrictionParams& params, const Vec9& v) {
  Vec9 d;
  for (Eigen::Index i = 0; i < 9; ++i) {
    const double x = v[i] / params.a[i];
    const double coulomb =
        2.0 * params.f_c[i] / (std::numbers::pi * params.a[i] * (1.0 + x * x));
    const double av = std::abs(v[i]);
    const double decay = std::exp(-av / params.v_s[i]);
    double shape;
    if (av >= params.sign_blend) {
      shape = -1.0 / params.v_s[i];
    } else {
      const double t = av / params.sign_blend;
      const double ds = 6.0 * t * (1.0 - t) / params.sign_blend;
      shape = ds - smoothstep(t) / params.v_s[i];
    }
    d[i] = coulomb + (params.f_s[i] - params.f_c[i]) * decay * shape;
  }
  return d;
}

Vec9 feedforward(const ChainModel& chain, const InertialModel& inertials,
                 const FrictionParams& friction, const Vec9& q,
                 const Vec9& qd_est, const Vec9& qdd_est) {
  return inverse_dynamics(chain, inertials, q, qd_est, qdd_est) +
         friction_compensation(friction, qd_est);
}

}  // namespace flexarm
