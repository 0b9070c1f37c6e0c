#include "flexarm/chain.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace flexarm {
namespace {

using testing::fd_jacobian;
using testing::random_posture;

TEST(Chain, DefaultModelValidates) {
  EXPECT_NO_THROW(ChainModel::default_model().validate());
}

TEST(Chain, ArmHangsDownAtZero) {
  const auto m = ChainModel::default_model();
  const auto f = forward_kinematics(m, Vec9::Zero());
  const Vec3 ua = f.binding(Binding::UA).p;
  const Vec3 fa = f.binding(Binding::FA).p;
  const Vec3 ha = f.binding(Binding::HA).p;
  EXPECT_GT(ua.z(), fa.z());
  EXPECT_GT(fa.z(), ha.z());
  EXPECT_NEAR(fa.x(), ha.x(), 1e-9);
  EXPECT_NEAR(fa.y(), ha.y(), 1e-9);
}

TEST(Chain, SensorXRunsDistal) {
  const auto m = ChainModel::default_model();
  const auto f = forward_kinematics(m, Vec9::Zero());
  const Vec3 dir = (f.binding(Binding::HA).p - f.binding(Binding::FA).p).normalized();
  EXPECT_NEAR(f.binding(Binding::FA).R.col(0).dot(dir), 1.0, 1e-9);
}

TEST(Chain, SegmentLengthsRescale) {
  const auto m = ChainModel::default_model().with_segment_lengths(0.35, 0.3);
  EXPECT_NEAR(m.upper_arm_length(), 0.35, 1e-12);
  EXPECT_NEAR(m.forearm_length(), 0.3, 1e-12);
}

TEST(Chain, JacobianMatchesFiniteDifferences) {
  const auto m = ChainModel::default_model();
  std::mt19937_64 rng(1);
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Vec9 q = random_posture(m, rng);
    for (Binding b : kBindings) {
      const auto fd = fd_jacobian(m, q, b);
      for (Joint first : {Joint::SC1, Joint::SC2, Joint::SH1}) {
        const Jacobian j = jacobian(m, q, first, b);
        const auto ref = fd.middleCols(index(first), j.cols());
        worst = std::max(worst, (j - ref).cwiseAbs().maxCoeff() /
                                    std::max(1.0, ref.cwiseAbs().maxCoeff()));
      }
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(Chain, JacobianSpanWidth) {
  const auto m = ChainModel::default_model();
  EXPECT_EQ(span_width(m, Joint::SC1, Binding::HA), 9);
  EXPECT_EQ(span_width(m, Joint::WR1, Binding::HA), 3);
  EXPECT_EQ(span_width(m, Joint::EL1, Binding::FA), m.mount(Binding::FA).parent - 3);
  EXPECT_THROW(span_width(m, Joint::EL2, Binding::UA), DomainError);
  EXPECT_THROW(jacobian(m, Vec9::Zero(), Joint::WR1, Binding::FA), DomainError);
}

TEST(Chain, SpanTorqueIsVirtualWork) {
  const auto m = ChainModel::default_model();
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int n = 0; n < 20; ++n) {
    const Vec9 q = random_posture(m, rng);
    const auto frames = forward_kinematics(m, q);
    Vec6 w;
    for (int i = 0; i < 6; ++i) w[i] = g(rng);
    const auto fd = fd_jacobian(m, q, Binding::FA);
    // Sensor-frame wrench expressed in base coordinates by hand.
    const Mat3& r = frames.binding(Binding::FA).R;
    Vec6 wb;
    wb << r * w.head<3>(), r * w.tail<3>();
    const Vec9 expected = fd.transpose() * wb;
    const Vec9 tau = span_torque(m, frames, Joint::SC2, Binding::FA, w);
    EXPECT_EQ(tau[0], 0.0);
    for (int i = 1; i <= m.mount(Binding::FA).parent; ++i) {
      EXPECT_NEAR(tau[i], expected[i], 1e-6);
    }
    for (int i = m.mount(Binding::FA).parent + 1; i < 9; ++i) {
      EXPECT_EQ(tau[i], 0.0);
    }
  }
}

TEST(Planar, JacobianExamples) {
  const PlanarTwoLink g{1.0, 1.0};
  const Mat2 j = planar_jacobian(g, 0.0, std::numbers::pi / 2);
  EXPECT_NEAR(j(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(j(0, 1), -1.0, 1e-12);
  EXPECT_NEAR(j(1, 0), 1.0, 1e-12);
  EXPECT_NEAR(j(1, 1), 0.0, 1e-12);
  const PlanarTwoLink g2{0.3, 0.2};
  const Mat2 z = planar_jacobian(g2, 0.0, 0.0);
  EXPECT_NEAR(z(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(z(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(z(1, 0), 0.5, 1e-15);
  EXPECT_NEAR(z(1, 1), 0.2, 1e-15);
}

TEST(Planar, JacobianMatchesFiniteDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(-3.0, 3.0), len(0.1, 1.0);
  for (int n = 0; n < 500; ++n) {
    const PlanarTwoLink g{len(rng), len(rng)};
    const double t1 = ang(rng), t2 = ang(rng), h = 1e-6;
    const Mat2 j = planar_jacobian(g, t1, t2);
    const Vec2 c1 = (planar_forward(g, t1 + h, t2) - planar_forward(g, t1 - h, t2)) / (2 * h);
    const Vec2 c2 = (planar_forward(g, t1, t2 + h) - planar_forward(g, t1, t2 - h)) / (2 * h);
    EXPECT_LT((j.col(0) - c1).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((j.col(1) - c2).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Planar, InverseExampleAndIdentity) {
  const PlanarTwoLink g{1.0, 1.0};
  const Mat2 inv = planar_jacobian_inverse(g, 0.0, std::numbers::pi / 2);
  EXPECT_NEAR(inv(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(inv(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(inv(1, 0), -1.0, 1e-12);
  EXPECT_NEAR(inv(1, 1), -1.0, 1e-12);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(-3.0, 3.0), len(0.1, 1.0);
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const PlanarTwoLink gg{len(rng), len(rng)};
    const double t1 = ang(rng), t2 = ang(rng);
    if (std::abs(std::sin(t2)) <= 1e-3) continue;
    const Mat2 p = planar_jacobian_inverse(gg, t1, t2) * planar_jacobian(gg, t1, t2);
    worst = std::max(worst, (p - Mat2::Identity()).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-9);
}

TEST(Planar, SingularInverseThrows) {
  const PlanarTwoLink g{1.0, 1.0};
  EXPECT_THROW(planar_jacobian_inverse(g, 0.3, 0.0), SingularConfigurationError);
  EXPECT_THROW(planar_jacobian_inverse(g, 0.3, std::numbers::pi), SingularConfigurationError);
  EXPECT_NO_THROW(planar_jacobian_inverse(g, 0.3, 1e-5));
}

TEST(Planar, InvalidGeometry) {
  EXPECT_THROW((PlanarTwoLink{0.0, 1.0}.validate()), ConfigError);
}

}  // namespace
}  // namespace flexarm
