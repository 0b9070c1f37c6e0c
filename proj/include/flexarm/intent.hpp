#pragma once

#include "flexarm/binding.hpp"
#include "flexarm/chain.hpp"

#include <vector>

namespace flexarm {

// Human arm: a kinematic chain with its own segment lengths and shoulder
// placement. Attachment frames are stored as the chain's binding mounts.
struct HumanArm {
  ChainModel chain;

  // Builds a human chain from the exoskeleton chain and places each
  // attachment so it coincides with the exoskeleton cuff at posture q0.
  static HumanArm fitted(const ChainModel& exo, double upper_arm,
                         double forearm, const Vec3& shoulder_offset,
                         const Vec9& q0);

  Frame attachment(const ChainFrames& frames, Binding b) const {
    return frames.binding(b);
  }
  Twist attachment_twist(const ChainFrames& frames, Binding b,
                         const Vec9& qd) const;
};

// Twist of a binding point from the full-chain Jacobian.
Twist binding_twist(const ChainModel& model, const ChainFrames& frames,
                    Binding b, const Vec9& qd);

struct JointIntent {
  std::vector<int> joints;     // 0-based joint indices
  std::vector<double> signs;   // per joint, +1 or -1
  double amplitude = 0.4;      // rad
  double speed = 1.0;          // peak joint speed, rad/s
  int cycles = 5;
  double start = 0.5;          // s, hold before motion

  void validate() const;
  double omega() const { return speed / amplitude; }
  double end_time() const;
  // q0 + sign * A (1 - cos(omega (t - start))) on the listed joints.
  void evaluate(const Vec9& q0, double t, Vec9& q, Vec9& qd) const;
};

enum class PathTiming { kGlobal, kPerSegment };

struct TargetIntent {
  // Hand displacements in world axes; the path starts at the hand position
  // of the initial posture.
  std::vector<Vec3> waypoints;
  double corner_radius = 0.0;
  double duration = 10.0;       // s of motion
  double start = 1.0;           // s, hold before motion
  PathTiming timing = PathTiming::kGlobal;
  int repeats = 1;

  void validate() const;
};

// Hand path sampled by arc length with rounded corners.
class HandPath {
 public:
  HandPath(const std::vector<Vec3>& waypoints, double corner_radius);

  double length() const { return length_; }
  Vec3 point(double s) const;
  Vec3 tangent(double s) const;
  // Arc length at each original waypoint (corners measured at the arc
  // midpoint).
  const std::vector<double>& waypoint_arcs() const { return waypoint_s_; }

 private:
  struct Piece {
    bool arc = false;
    Vec3 a, b;               // line ends
    Vec3 center, u, v;       // arc: center + r (cos th u + sin th v)
    double radius = 0.0;
    double sweep = 0.0;
    double s0 = 0.0, len = 0.0;
  };
  std::vector<Piece> pieces_;
  std::vector<double> waypoint_s_;
  double length_ = 0.0;

  const Piece& find(double s) const;
};

// Minimum-jerk profile on [0, 1]: value and derivative w.r.t. the phase.
double min_jerk(double x);
double min_jerk_rate(double x);

// Human joint trajectory sampled on a uniform grid.
class HumanTrajectory {
 public:
  HumanTrajectory() = default;
  HumanTrajectory(double dt, std::vector<Vec9> q, std::vector<Vec9> qd)
      : dt_(dt), q_(std::move(q)), qd_(std::move(qd)) {}

  static HumanTrajectory still(const Vec9& q0, double dt, double duration);
  static HumanTrajectory from_joint_intent(const JointIntent& intent,
                                           const Vec9& q0, double dt,
                                           double duration);
  // Differential IK on the arm joints (SH1..WR3): the hand position follows
  // the path while the null space relaxes toward q0.
  static HumanTrajectory from_target_intent(const TargetIntent& intent,
                                            const HumanArm& arm,
                                            const Vec9& q0, double dt,
                                            double duration);

  std::size_t size() const { return q_.size(); }
  double dt() const { return dt_; }
  const Vec9& q(std::size_t k) const { return q_[std::min(k, q_.size() - 1)]; }
  const Vec9& qd(std::size_t k) const {
    return qd_[std::min(k, qd_.size() - 1)];
  }

 private:
  double dt_ = 0.0;
  std::vector<Vec9> q_;
  std::vector<Vec9> qd_;
};

// Solves for a posture with the hand at `target` (orientation of q_seed
// kept), iterating damped least squares on joints SH1..WR3.
Vec9 solve_hand_posture(const ChainModel& chain, const Vec9& q_seed,
                        const Vec3& target, int iterations = 200);

}  // namespace flexarm
