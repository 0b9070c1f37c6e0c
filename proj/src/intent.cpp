#include "flexarm/intent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flexarm {

HumanArm HumanArm::fitted(const ChainModel& exo, double upper_arm,
                          double forearm, const Vec3& shoulder_offset,
                          const Vec9& q0) {
  HumanArm arm;
  arm.chain = exo.with_segment_lengths(upper_arm, forearm);
  arm.chain.joints[index(Joint::SH1)].origin.translation() += shoulder_offset;
  const ChainFrames ef = forward_kinematics(exo, q0);
  const ChainFrames hf = forward_kinematics(arm.chain, q0);
  for (Binding b : kBindings) {
    auto& mnt = arm.chain.bindings[index(b)];
    const Frame& parent = hf.joints[static_cast<std::size_t>(mnt.parent)];
    const Frame& cuff = ef.binding(b);
    Eigen::Isometry3d off = Eigen::Isometry3d::Identity();
    off.linear() = parent.R.transpose() * cuff.R;
    off.translation() = parent.R.transpose() * (cuff.p - parent.p);
    mnt.offset = off;
  }
  return arm;
}

Twist binding_twist(const ChainModel& model, const ChainFrames& frames,
                    Binding b, const Vec9& qd) {
  const Jacobian j = jacobian(model, frames, Joint::SC1, b);
  const Vec6 tw = j * qd.head(j.cols());
  return {tw.head<3>(), tw.tail<3>()};
}

Twist HumanArm::attachment_twist(const ChainFrames& frames, Binding b,
                                 const Vec9& qd) const {
  return binding_twist(chain, frames, b, qd);
}

void JointIntent::validate() const {
  if (joints.empty()) throw ConfigError("joint intent needs at least one joint");
  if (signs.size() != joints.size()) {
    throw ConfigError("joint intent signs must match joints");
  }
  for (int j : joints) {
    if (j < 0 || j >= static_cast<int>(kNumJoints)) {
      throw ConfigError("joint intent index out of range");
    }
  }
  if (!(amplitude > 0.0) || !(speed > 0.0) || cycles < 1 || !(start >= 0.0)) {
    throw ConfigError(
        "joint intent needs positive amplitude, speed, cycles, and start >= 0");
  }
}

double JointIntent::end_time() const {
  return start + cycles * 2.0 * std::numbers::pi / omega();
}

void JointIntent::evaluate(const Vec9& q0, double t, Vec9& q, Vec9& qd) const {
  q = q0;
  qd.setZero();
  if (t <= start || t >= end_time()) return;
  const double w = omega();
  const double ph = w * (t - start);
  for (std::size_t i = 0; i < joints.size(); ++i) {
    q[joints[i]] += signs[i] * amplitude * (1.0 - std::cos(ph));
    qd[joints[i]] = signs[i] * amplitude * w * std::sin(ph);
  }
}

void TargetIntent::validate() const {
  if (waypoints.size() < 2) {
    throw ConfigError("target intent needs at least two waypoints");
  }
  if (!(corner_radius >= 0.0) || !(duration > 0.0) || !(start >= 0.0) ||
      repeats < 1) {
    throw ConfigError("target intent timing parameters are invalid");
  }
}

double min_jerk(double x) {
  x = std::clamp(x, 0.0, 1.0);
  return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

double min_jerk_rate(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

HandPath::HandPath(const std::vector<Vec3>& w, double r) {
  if (w.size() < 2) throw ConfigError("hand path needs two waypoints");
  // Corner trims per waypoint.
  const std::size_t n = w.size();
  std::vector<double> trim(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec3 d1 = (w[i] - w[i - 1]).normalized();
    const Vec3 d2 = (w[i + 1] - w[i]).normalized();
    const double phi = std::acos(std::clamp(d1.dot(d2), -1.0, 1.0));
    if (r > 0.0 && phi > 1e-9 && phi < std::numbers::pi - 1e-9) {
      trim[i] = r * std::tan(phi / 2.0);
      const double room = 0.5 * std::min((w[i] - w[i - 1]).norm(),
                                         (w[i + 1] - w[i]).norm());
      if (trim[i] > room) {
        throw ConfigError("corner radius too large for the waypoint spacing");
      }
    }
  }
  double s = 0.0;
  waypoint_s_.push_back(0.0);
  Vec3 cursor = w[0];
  for (std::size_t i = 1; i < n; ++i) {
    const Vec3 d1 = (w[i] - w[i - 1]).normalized();
    const Vec3 line_end = w[i] - d1 * trim[i];
    Piece line;
    line.a = cursor;
    line.b = line_end;
    line.s0 = s;
    line.len = (line_end - cursor).norm();
    if (line.len > 0.0) {
      pieces_.push_back(line);
      s += line.len;
    }
    if (trim[i] > 0.0) {
      const Vec3 d2 = (w[i + 1] - w[i]).normalized();
      Piece arc;
      arc.arc = true;
      const Vec3 nrm = (d2 - d2.dot(d1) * d1).normalized();
      arc.radius = r;
      arc.center = line_end + r * nrm;
      arc.u = -nrm;
      arc.v = d1;
      arc.sweep = std::acos(std::clamp(d1.dot(d2), -1.0, 1.0));
      arc.s0 = s;
      arc.len = r * arc.sweep;
      pieces_.push_back(arc);
      waypoint_s_.push_back(s + 0.5 * arc.len);
      s += arc.len;
      cursor = w[i] + d2 * trim[i];
    } else {
      waypoint_s_.push_back(s);
      cursor = w[i];
    }
  }
  length_ = s;
  if (!(length_ > 0.0)) throw ConfigError("hand path has zero length");
}

const HandPath::Piece& HandPath::find(double s) const {
  for (const auto& p : pieces_) {
    if (s <= p.s0 + p.len) return p;
  }
  return pieces_.back();
}

Vec3 HandPath::point(double s) const {
  s = std::clamp(s, 0.0, length_);
  const Piece& p = find(s);
  const double u = std::clamp(s - p.s0, 0.0, p.len);
  if (!p.arc) return p.a + (p.b - p.a) * (u / p.len);
  const double th = u / p.radius;
  return p.center + p.radius * (std::cos(th) * p.u + std::sin(th) * p.v);
}

Vec3 HandPath::tangent(double s) const {
  s = std::clamp(s, 0.0, length_);
  const Piece& p = find(s);
  if (!p.arc) return (p.b - p.a) / p.len;
  const double th = std::clamp(s - p.s0, 0.0, p.len) / p.radius;
  return -std::sin(th) * p.u + std::cos(th) * p.v;
}

HumanTrajectory HumanTrajectory::still(const Vec9& q0, double dt,
                                       double duration) {
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt)) + 1;
  return HumanTrajectory(dt, std::vector<Vec9>(n, q0),
                         std::vector<Vec9>(n, Vec9::Zero()));
}

HumanTrajectory HumanTrajectory::from_joint_intent(const JointIntent& intent,
                                                   const Vec9& q0, double dt,
                                                   double duration) {
  intent.validate();
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt)) + 1;
  std::vector<Vec9> q(n), qd(n);
  for (std::size_t k = 0; k < n; ++k) {
    intent.evaluate(q0, static_cast<double>(k) * dt, q[k], qd[k]);
  }
  return HumanTrajectory(dt, std::move(q), std::move(qd));
}

namespace {

// Arm joints driven by the hand-path solver.
constexpr int kArmFirst = index(Joint::SH1);
constexpr int kArmCols = static_cast<int>(kNumJoints) - kArmFirst;

Vec3 rotation_error(const Mat3& target, const Mat3& current) {
  const Mat3 re = target * current.transpose();
  return 0.5 * Vec3(re(2, 1) - re(1, 2), re(0, 2) - re(2, 0),
                    re(1, 0) - re(0, 1));
}

Eigen::Matrix<double, 7, 1> dls_step(const Jacobian& j_full, const Vec6& task,
                                     double damping) {
  const Eigen::Matrix<double, 6, kArmCols> j = j_full.rightCols<kArmCols>();
  const Eigen::Matrix<double, 6, 6> jjt =
      j * j.transpose() +
      damping * damping * Eigen::Matrix<double, 6, 6>::Identity();
  return j.transpose() * jjt.ldlt().solve(task);
}

struct PathSample {
  Vec3 p;
  Vec3 v;
};

PathSample sample_path(const HandPath& path, const TargetIntent& intent,
                       double t) {
  const double tau = t - intent.start;
  if (tau <= 0.0) return {path.point(0.0), Vec3::Zero()};
  const double per = intent.duration;
  const int rep = static_cast<int>(tau / per);
  if (rep >= intent.repeats) {
    return {path.point(path.length()), Vec3::Zero()};
  }
  const double x = (tau - rep * per) / per;
  if (intent.timing == PathTiming::kGlobal) {
    const double s = path.length() * min_jerk(x);
    const double sd = path.length() * min_jerk_rate(x) / per;
    return {path.point(s), path.tangent(s) * sd};
  }
  // Per segment: time shares proportional to segment length.
  const auto& ws = path.waypoint_arcs();
  const double s_lin = x * path.length();
  std::size_t seg = 0;
  while (seg + 2 < ws.size() && s_lin > ws[seg + 1]) ++seg;
  const double s0 = ws[seg];
  const double s1 = ws[seg + 1];
  const double seg_len = s1 - s0;
  const double seg_t = per * seg_len / path.length();
  const double xi = (s_lin - s0) / seg_len;
  const double s = s0 + seg_len * min_jerk(xi);
  const double sd = seg_len * min_jerk_rate(xi) / seg_t;
  return {path.point(s), path.tangent(s) * sd};
}

}  // namespace

Vec9 solve_hand_posture(const ChainModel& chain, const Vec9& q_seed,
                        const Vec3& target, int iterations) {
  Vec9 q = q_seed;
  const Mat3 r_goal = forward_kinematics(chain, q_seed).binding(Binding::HA).R;
  for (int it = 0; it < iterations; ++it) {
    const ChainFrames f = forward_kinematics(chain, q);
    const Frame& h = f.binding(Binding::HA);
    Vec6 e;
    e << target - h.p, rotation_error(r_goal, h.R);
    if (e.norm() < 1e-12) break;
    const Jacobian j = jacobian(chain, f, Joint::SC1, Binding::HA);
    q.tail<kArmCols>() += dls_step(j, e, 1e-3);
  }
  return q;
}

HumanTrajectory HumanTrajectory::from_target_intent(const TargetIntent& intent,
                                                    const HumanArm& arm,
                                                    const Vec9& q0, double dt,
                                                    double duration) {
  intent.validate();
  Vec9 q = q0;
  const Frame hand0 = forward_kinematics(arm.chain, q).binding(Binding::HA);
  std::vector<Vec3> pts;
  for (const Vec3& w : intent.waypoints) {
    pts.push_back(hand0.p + w - intent.waypoints.front());
  }
  const HandPath path(pts, intent.corner_radius);
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt)) + 1;
  std::vector<Vec9> qs(n), qds(n);
  constexpr double kGain = 40.0;
  constexpr double kPosture = 2.0;
  constexpr double kDamping = 1e-2;
  using ArmVec = Eigen::Matrix<double, kArmCols, 1>;
  using ArmMat = Eigen::Matrix<double, kArmCols, kArmCols>;
  const ArmVec rest = q0.tail<kArmCols>();
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    const PathSample ps = sample_path(path, intent, t);
    const ChainFrames f = forward_kinematics(arm.chain, q);
    const Jacobian j = jacobian(arm.chain, f, Joint::SC1, Binding::HA);
    const Eigen::Matrix<double, 3, kArmCols> jp =
        j.topRows<3>().rightCols<kArmCols>();
    // Damped pseudo-inverse for the hand position; the null space pulls the
    // arm back toward its starting posture.
    const Eigen::Matrix<double, kArmCols, 3> pinv =
        jp.transpose() *
        (jp * jp.transpose() + kDamping * kDamping * Mat3::Identity()).inverse();
    const Vec3 v = ps.v + kGain * (ps.p - f.binding(Binding::HA).p);
    const ArmVec null_term = (ArmMat::Identity() - pinv * jp) *
                             (kPosture * (rest - q.tail<kArmCols>()));
    Vec9 qd = Vec9::Zero();
    qd.tail<kArmCols>() = pinv * v + null_term;
    qs[k] = q;
    qds[k] = qd;
    q += dt * qd;
  }
  return HumanTrajectory(dt, std::move(qs), std::move(qds));
}

}  // namespace flexarm
