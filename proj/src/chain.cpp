#include "flexarm/chain.hpp"

#include <cmath>
#include <sstream>

namespace flexarm {

std::string_view name(Binding b) {
  switch (b) {
    case Binding::UA:
      return "UA";
    case Binding::FA:
      return "FA";
    case Binding::HA:
      return "HA";
  }
  return "?";
}

Binding binding_from_name(std::string_view s) {
  if (s == "UA" || s == "ua") return Binding::UA;
  if (s == "FA" || s == "fa") return Binding::FA;
  if (s == "HA" || s == "ha") return Binding::HA;
  throw DomainError("unknown binding id '" + std::string(s) + "'");
}

namespace {

Eigen::Isometry3d translation(double x, double y, double z) {
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.translation() = Vec3(x, y, z);
  return t;
}

// Cuff frame: sensor x along the distal limb direction (-z of the link),
// sensor y forward, sensor z completing the right-handed triad.
Eigen::Isometry3d cuff(double along) {
  Eigen::Isometry3d t = translation(0.0, 0.0, -along);
  Mat3 r;
  r.col(0) = Vec3(0.0, 0.0, -1.0);
  r.col(1) = Vec3(1.0, 0.0, 0.0);
  r.col(2) = Vec3(0.0, -1.0, 0.0);
  t.linear() = r;
  return t;
}

bool is_rotation(const Mat3& r, double tol) {
  return (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff() < tol &&
         std::abs(r.determinant() - 1.0) < tol;
}

}  // namespace

ChainModel ChainModel::default_model() {
  ChainModel m;
  auto set = [&m](Joint j, Vec3 axis, Eigen::Isometry3d origin, double lo,
                  double hi) {
    auto& d = m.joints[index(j)];
    d.label = std::string(kJointLabels[index(j)]);
    d.axis = axis;
    d.origin = origin;
    d.lower = lo;
    d.upper = hi;
  };
  // Scapular pair: elevation about the forward axis, protraction about the
  // vertical axis.
  set(Joint::SC1, Vec3::UnitX(), translation(0, 0, 0), -0.6, 0.6);
  set(Joint::SC2, Vec3::UnitZ(), translation(0, -0.12, 0), -0.6, 0.6);
  // Shoulder: flexion (+ forward), abduction (+ lateral).
  set(Joint::SH1, -Vec3::UnitY(), translation(0, -0.06, -0.03), -1.0, 3.0);
  set(Joint::SH2, -Vec3::UnitX(), translation(0, 0, 0), -0.6, 2.5);
  // Humeral rotation along the upper arm, then elbow flexion.
  set(Joint::EL1, Vec3::UnitZ(), translation(0, 0, -0.15), -1.6, 1.6);
  set(Joint::EL2, -Vec3::UnitY(), translation(0, 0, -0.168), -0.1, 2.6);
  // Wrist: pronation/supination, flexion/extension, ulnar/radial deviation.
  set(Joint::WR1, Vec3::UnitZ(), translation(0, 0, -0.17), -1.6, 1.6);
  set(Joint::WR2, -Vec3::UnitY(), translation(0, 0, -0.091), -1.3, 1.3);
  set(Joint::WR3, Vec3::UnitX(), translation(0, 0, 0), -0.7, 0.7);

  m.bindings[index(Binding::UA)] = {index(Joint::SH2), cuff(0.10)};
  m.bindings[index(Binding::FA)] = {index(Joint::EL2), cuff(0.12)};
  m.bindings[index(Binding::HA)] = {index(Joint::WR3), cuff(0.07)};
  return m;
}

double ChainModel::upper_arm_length() const {
  return -(joints[index(Joint::EL1)].origin.translation().z() +
           joints[index(Joint::EL2)].origin.translation().z());
}

double ChainModel::forearm_length() const {
  return -(joints[index(Joint::WR1)].origin.translation().z() +
           joints[index(Joint::WR2)].origin.translation().z());
}

ChainModel ChainModel::with_segment_lengths(double upper_arm,
                                            double forearm) const {
  if (!(upper_arm > 0.0) || !(forearm > 0.0)) {
    throw ConfigError("segment lengths must be positive");
  }
  ChainModel m = *this;
  const double su = upper_arm / upper_arm_length();
  const double sf = forearm / forearm_length();
  m.joints[index(Joint::EL1)].origin.translation() *= su;
  m.joints[index(Joint::EL2)].origin.translation() *= su;
  m.joints[index(Joint::WR1)].origin.translation() *= sf;
  m.joints[index(Joint::WR2)].origin.translation() *= sf;
  return m;
}

void ChainModel::validate() const {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto& j = joints[i];
    if (!j.axis.allFinite() || std::abs(j.axis.norm() - 1.0) > 1e-12) {
      throw ConfigError("joint " + std::to_string(i + 1) +
                        " axis must be a unit vector");
    }
    if (!j.origin.matrix().allFinite() || !is_rotation(j.origin.linear(), 1e-9)) {
      throw ConfigError("joint " + std::to_string(i + 1) +
                        " origin must be a rigid transform");
    }
    if (!(j.lower < j.upper)) {
      throw ConfigError("joint " + std::to_string(i + 1) +
                        " limits must satisfy lower < upper");
    }
  }
  const auto check_parent = [this](Binding b, int lo, int hi) {
    const int p = mount(b).parent;
    if (p < lo || p > hi) {
      std::ostringstream os;
      os << name(b) << " parent joint must lie in [" << lo + 1 << ", "
         << hi + 1 << "], got " << p + 1;
      throw ConfigError(os.str());
    }
    if (!is_rotation(mount(b).offset.linear(), 1e-9)) {
      throw ConfigError(std::string(name(b)) +
                        " offset must be a rigid transform");
    }
  };
  check_parent(Binding::UA, 2, 3);
  check_parent(Binding::FA, 4, 5);
  check_parent(Binding::HA, 8, 8);
}

Mat3 axis_rotation(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

ChainFrames forward_kinematics(const ChainModel& model, const Vec9& q) {
  if (!q.allFinite()) {
    throw DomainError("forward_kinematics: joint vector must be finite");
  }
  ChainFrames out;
  Vec3 p = Vec3::Zero();
  Mat3 r = Mat3::Identity();
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    const auto& j = model.joints[i];
    p = p + r * j.origin.translation();
    r = r * j.origin.linear();
    out.axes[i] = r * j.axis;
    r = r * axis_rotation(j.axis, q[static_cast<Eigen::Index>(i)]);
    out.joints[i] = Frame{p, r};
  }
  for (Binding b : kBindings) {
    const auto& mnt = model.mount(b);
    const Frame& parent = out.joints[static_cast<std::size_t>(mnt.parent)];
    out.bindings[index(b)] =
        Frame{parent.p + parent.R * mnt.offset.translation(),
              parent.R * mnt.offset.linear()};
  }
  return out;
}

int span_width(const ChainModel& model, Joint first, Binding point) {
  const int parent = model.mount(point).parent;
  const int f = index(first);
  if (f < 0 || f > parent) {
    std::ostringstream os;
    os << "jacobian span: first joint " << f + 1 << " lies beyond "
       << name(point) << "'s parent joint " << parent + 1;
    throw DomainError(os.str());
  }
  return parent - f + 1;
}

Jacobian jacobian(const ChainModel& model, const ChainFrames& frames,
                  Joint first, Binding point) {
  const int k = span_width(model, first, point);
  const Vec3& target = frames.binding(point).p;
  Jacobian jac(6, k);
  for (int c = 0; c < k; ++c) {
    const auto i = static_cast<std::size_t>(index(first) + c);
    const Vec3& z = frames.axes[i];
    jac.block<3, 1>(0, c) = z.cross(target - frames.joints[i].p);
    jac.block<3, 1>(3, c) = z;
  }
  return jac;
}

Jacobian jacobian(const ChainModel& model, const Vec9& q, Joint first,
                  Binding point) {
  return jacobian(model, forward_kinematics(model, q), first, point);
}

Vec6 wrench_to_base(const Frame& sensor_frame, const Vec6& w_sensor) {
  Vec6 w;
  w.head<3>() = sensor_frame.R * w_sensor.head<3>();
  w.tail<3>() = sensor_frame.R * w_sensor.tail<3>();
  return w;
}

Vec9 span_torque(const ChainModel& model, const ChainFrames& frames,
                 Joint first, Binding point, const Vec6& w_sensor) {
  const Jacobian jac = jacobian(model, frames, first, point);
  const Eigen::VectorXd tau =
      jac.transpose() * wrench_to_base(frames.binding(point), w_sensor);
  Vec9 out = Vec9::Zero();
  out.segment(index(first), tau.size()) = tau;
  return out;
}

void PlanarTwoLink::validate() const {
  if (!(l1 > 0.0) || !(l2 > 0.0)) {
    throw ConfigError("planar two-link lengths must be positive");
  }
}

Vec2 planar_forward(const PlanarTwoLink& geom, double theta1, double theta2) {
  return {geom.l1 * std::cos(theta1) + geom.l2 * std::cos(theta1 + theta2),
          geom.l1 * std::sin(theta1) + geom.l2 * std::sin(theta1 + theta2)};
}

Mat2 planar_jacobian(const PlanarTwoLink& geom, double theta1, double theta2) {
  const double s1 = std::sin(theta1);
  const double c1 = std::cos(theta1);
  const double s12 = std::sin(theta1 + theta2);
  const double c12 = std::cos(theta1 + theta2);
  Mat2 j;
  j << -geom.l1 * s1 - geom.l2 * s12, -geom.l2 * s12,
      geom.l1 * c1 + geom.l2 * c12, geom.l2 * c12;
  return j;
}

Mat2 planar_jacobian_inverse(const PlanarTwoLink& geom, double theta1,
                             double theta2) {
  const double s2 = std::sin(theta2);
  if (!(std::abs(s2) > kPlanarSingularityTolerance)) {
    throw SingularConfigurationError(
        "planar_jacobian_inverse: |sin(theta2)| at or below singularity "
        "tolerance");
  }
  const double s1 = std::sin(theta1);
  const double c1 = std::cos(theta1);
  const double s12 = std::sin(theta1 + theta2);
  const double c12 = std::cos(theta1 + theta2);
  const double l1 = geom.l1;
  const double l2 = geom.l2;
  Mat2 inv;
  inv << c12 / (l1 * s2), s12 / (l1 * s2),
      -(l2 * c12 + l1 * c1) / (l1 * l2 * s2),
      -(l2 * s12 + l1 * s1) / (l1 * l2 * s2);
  return inv;
}

}  // namespace flexarm
