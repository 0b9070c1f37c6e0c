#pragma once

#include "flexarm/common.hpp"

#include <Eigen/Geometry>

#include <array>
#include <span>
#include <string>

namespace flexarm {

using Jacobian = Eigen::Matrix<double, 6, Eigen::Dynamic>;

struct JointDescriptor {
  std::string label;
  // Rotation axis in the joint's own frame (unit norm).
  Vec3 axis = Vec3::UnitZ();
  // Fixed transform from the previous joint frame (or base) to this joint's
  // frame at q = 0.
  Eigen::Isometry3d origin = Eigen::Isometry3d::Identity();
  double lower = -3.14159;
  double upper = 3.14159;
};

// A cuff attached to a link. The offset's rotation defines the sensor frame:
// sensor x runs along the limb segment (distal), y/z are transverse.
struct BindingMount {
  int parent = 0;  // 0-based joint index
  Eigen::Isometry3d offset = Eigen::Isometry3d::Identity();
};

struct ChainModel {
  std::array<JointDescriptor, kNumJoints> joints;
  std::array<BindingMount, 3> bindings;

  // Throws ConfigError when the structural invariants fail.
  void validate() const;

  const BindingMount& mount(Binding b) const { return bindings[index(b)]; }

  // 2-2-2-3 layout, right arm, base at the sternum. Base frame: x forward,
  // y left, z up. At q = 0 the arm hangs straight down.
  static ChainModel default_model();

  // Rescales the upper-arm (SH2 -> EL2) and forearm (EL2 -> WR2) segments,
  // keeping the relative placement of the intermediate joint and cuffs.
  ChainModel with_segment_lengths(double upper_arm, double forearm) const;

  double upper_arm_length() const;
  double forearm_length() const;
};

struct Frame {
  Vec3 p = Vec3::Zero();
  Mat3 R = Mat3::Identity();
};

struct ChainFrames {
  std::array<Frame, kNumJoints> joints;
  std::array<Vec3, kNumJoints> axes;  // joint axes in base coordinates
  std::array<Frame, 3> bindings;

  const Frame& binding(Binding b) const { return bindings[index(b)]; }
};

ChainFrames forward_kinematics(const ChainModel& model, const Vec9& q);

// 6 x k geometric Jacobian of `point` w.r.t. joints first..parent(point).
// Column i = [axis_i x (p_point - p_i); axis_i] in base coordinates.
Jacobian jacobian(const ChainModel& model, const Vec9& q, Joint first,
                  Binding point);
Jacobian jacobian(const ChainModel& model, const ChainFrames& frames,
                  Joint first, Binding point);

// Number of columns of the span first..parent(point); throws DomainError when
// first lies beyond the point's parent.
int span_width(const ChainModel& model, Joint first, Binding point);

// Maps a sensor-frame wrench into base coordinates at the binding point.
Vec6 wrench_to_base(const Frame& sensor_frame, const Vec6& w_sensor);

// Jacobian-transpose map of a sensor-frame wrench onto the span's joints,
// scattered into a 9-vector.
Vec9 span_torque(const ChainModel& model, const ChainFrames& frames,
                 Joint first, Binding point, const Vec6& w_sensor);

Mat3 axis_rotation(const Vec3& axis, double angle);

// Planar two-link arm of the offset analysis.
struct PlanarTwoLink {
  double l1 = 0.0;
  double l2 = 0.0;

  void validate() const;
};

Vec2 planar_forward(const PlanarTwoLink& geom, double theta1, double theta2);
Mat2 planar_jacobian(const PlanarTwoLink& geom, double theta1, double theta2);

inline constexpr double kPlanarSingularityTolerance = 1e-6;

// Closed-form inverse; throws SingularConfigurationError when
// |sin(theta2)| <= kPlanarSingularityTolerance.
Mat2 planar_jacobian_inverse(const PlanarTwoLink& geom, double theta1,
                             double theta2);

}  // namespace flexarm
