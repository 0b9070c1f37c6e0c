#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace flexarm {

inline constexpr std::size_t kNumJoints = 9;

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

// Joint order follows the 2-2-2-3 layout, proximal to distal.
enum class Joint : int { SC1 = 0, SC2, SH1, SH2, EL1, EL2, WR1, WR2, WR3 };

inline constexpr std::array<std::string_view, kNumJoints> kJointLabels = {
    "SC1", "SC2", "SH1", "SH2", "EL1", "EL2", "WR1", "WR2", "WR3"};

inline constexpr int index(Joint j) { return static_cast<int>(j); }

// Binding points (cuffs) carrying a 6-axis F/T sensor each.
enum class Binding : int { UA = 0, FA = 1, HA = 2 };

inline constexpr std::array<Binding, 3> kBindings = {Binding::UA, Binding::FA,
                                                     Binding::HA};

inline constexpr int index(Binding b) { return static_cast<int>(b); }

std::string_view name(Binding b);
Binding binding_from_name(std::string_view s);

// Wrench channel order used throughout: Fx Fy Fz Tx Ty Tz.
enum class Channel : int { Fx = 0, Fy, Fz, Tx, Ty, Tz };

inline constexpr std::array<std::string_view, 6> kChannelLabels = {
    "Fx", "Fy", "Fz", "Tx", "Ty", "Tz"};

inline constexpr int index(Channel c) { return static_cast<int>(c); }

struct Wrench {
  Vec3 f = Vec3::Zero();
  Vec3 t = Vec3::Zero();

  static Wrench from_vector(const Vec6& v) {
    return Wrench{v.head<3>(), v.tail<3>()};
  }
  Vec6 vector() const {
    Vec6 v;
    v << f, t;
    return v;
  }
  double operator[](Channel c) const {
    const int i = index(c);
    return i < 3 ? f[i] : t[i - 3];
  }
  double& operator[](Channel c) {
    const int i = index(c);
    return i < 3 ? f[i] : t[i - 3];
  }
  bool all_finite() const { return f.allFinite() && t.allFinite(); }
};

// Input outside an operation's domain (non-finite values, bad indices,
// unreachable endpoints).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Invalid static configuration (gains, spans, thresholds).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SingularConfigurationError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace flexarm
