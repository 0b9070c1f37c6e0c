#pragma once

#include "flexarm/chain.hpp"
#include "flexarm/classify.hpp"

#include <optional>

namespace flexarm {

enum class IntentMode { JointOriented, TargetOriented };

std::string_view name(IntentMode m);

// Coordination stages gated by intent.
enum class Stage : int { Elbow = 0, Wrist = 1 };

struct FCMConfig {
  // MC thresholds per binding, indexed by channel (only MC channels read).
  std::array<Vec6, 3> thresholds = {
      (Vec6() << 0, 3, 3, 0, 0, 0).finished(),
      (Vec6() << 0, 3, 3, 0, 0, 0).finished(),
      (Vec6() << 0, 3, 3, 0.3, 0, 0).finished()};
  // Coordination normalizers per binding (N).
  std::array<double, 3> normalizers = {10.0, 10.0, 10.0};
  double lambda_e = 2.0;
  double lambda_w = 2.0;
  // Switching band as a fraction of each channel threshold.
  double hysteresis = 0.1;
  // First joint of each FCM span; spans end at the binding's parent joint.
  Joint shoulder_first = Joint::SC1;
  Joint elbow_first = Joint::SC2;
  Joint wrist_first = Joint::SC2;

  void validate() const;
  void validate_for(const ChainModel& model) const;
};

// Absolute MC values with their thresholds, one entry per channel.
struct McGroup {
  std::vector<double> values;
  std::vector<double> thresholds;
};

McGroup mc_group(const ComponentSet& cs, const FCMConfig& cfg);
McGroup merge(const McGroup& a, const McGroup& b);

// Joint-oriented iff all local or all proximal MC lie below threshold;
// target-oriented iff some local and some proximal MC reach it. Leaving
// `prev` requires crossing the thresholds by the hysteresis band.
IntentMode classify_intent(const McGroup& local, const McGroup& proximal,
                           double hysteresis, IntentMode prev);
IntentMode classify_intent(const McGroup& local, const McGroup& proximal,
                           const FCMConfig& cfg, IntentMode prev);

class DegenerateRatioError : public DomainError {
 public:
  using DomainError::DomainError;
};

// p = 1 - b/a if a/b < 1, else a/b - 1. Throws DegenerateRatioError when the
// denominator in use is zero.
double magnitude_ratio(double a, double b);

double magnitude_ratio_elbow(const Vec3& mc_e, const Vec3& mc_s,
                             const FCMConfig& cfg);
double magnitude_ratio_wrist(const Vec3& mc_w, const Vec3& mc_e,
                             const Vec3& mc_s, const FCMConfig& cfg);

// k_c = (2 / pi) atan(lambda p) + 1.
double coordination_gain(double p, double lambda);

// Coordination wrenches: shoulder (Fx, 0...), elbow/wrist (Fx, Fy, Fz, 0...).
std::array<Vec6, 3> coordination_wrenches(
    const std::array<ComponentSet, 3>& sets);

struct IntentResult {
  std::array<IntentMode, 2> modes = {IntentMode::JointOriented,
                                     IntentMode::JointOriented};
  double k_ce = 1.0;
  double k_cw = 1.0;
};

// Per-stage intent state carried between ticks.
class IntentDistinction {
 public:
  explicit IntentDistinction(FCMConfig cfg);

  // MC magnitudes for the ratios use each binding's force 3-vector.
  IntentResult step(const std::array<ComponentSet, 3>& sets);
  const FCMConfig& config() const { return cfg_; }

 private:
  FCMConfig cfg_;
  std::array<IntentMode, 2> modes_ = {IntentMode::JointOriented,
                                      IntentMode::JointOriented};
};

Vec9 fcm_torques(const ChainModel& model, const ChainFrames& frames,
                 const std::array<Vec6, 3>& cc,
                 const std::array<IntentMode, 2>& modes, double k_ce,
                 double k_cw, const FCMConfig& cfg);
Vec9 fcm_torques(const ChainModel& model, const Vec9& q,
                 const std::array<Vec6, 3>& cc,
                 const std::array<IntentMode, 2>& modes, double k_ce,
                 double k_cw, const FCMConfig& cfg);

}  // namespace flexarm
