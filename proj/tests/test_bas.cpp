#include "flexarm/bas.hpp"

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace flexarm {
namespace {

TEST(BasGains, Examples) {
  const double fmax = 30.0;
  const BasGains g0 = bas_gains(0.0, fmax);
  EXPECT_EQ(g0.k_f, 0.5);
  EXPECT_EQ(g0.k_t, 1.0);
  const BasGains gh = bas_gains(fmax / 2, fmax);
  EXPECT_NEAR(gh.k_f, 1.0, 1e-12);
  EXPECT_NEAR(gh.k_t, 0.5, 1e-12);
  const BasGains gc = bas_gains(2 * fmax, fmax);
  EXPECT_NEAR(gc.k_f, 0.5, 1e-12);
  EXPECT_NEAR(gc.k_t, 0.0, 1e-12);
}

TEST(BasGains, EvenInForce) {
  for (double f : {0.1, 3.0, 17.0, 29.0, 45.0}) {
    EXPECT_EQ(bas_gains(f, 30.0).k_f, bas_gains(-f, 30.0).k_f);
    EXPECT_EQ(bas_gains(f, 30.0).k_t, bas_gains(-f, 30.0).k_t);
  }
}

TEST(BasGains, InvalidThreshold) {
  EXPECT_THROW(bas_gains(1.0, 0.0), ConfigError);
}

Wrench make(double fx, double fy, double fz, double tx, double ty, double tz) {
  return Wrench{Vec3(fx, fy, fz), Vec3(tx, ty, tz)};
}

TEST(ApplyBas, ZeroForceGivesFullAssistAuthority) {
  const BASConfig cfg;
  const AlignedWrench a = apply_bas(classify(Binding::UA, make(0, 0, 0, 0, 0.7, -0.4)), cfg);
  EXPECT_EQ(a.fa[1], 0.0);
  EXPECT_EQ(a.fa[2], 0.0);
  EXPECT_EQ(a.fa[4], 0.7);
  EXPECT_EQ(a.fa[5], -0.4);
}

TEST(ApplyBas, HalfThreshold) {
  const BASConfig cfg;
  const double fy = cfg.threshold(Binding::FA, Channel::Fy) / 2;
  const AlignedWrench a = apply_bas(classify(Binding::FA, make(0, fy, 0, 0, 0, 2.0)), cfg);
  EXPECT_NEAR(a.fa[1], fy, 1e-12);
  EXPECT_NEAR(a.fa[5], 1.0, 1e-12);
}

TEST(ApplyBas, HandTxPassesThrough) {
  const BASConfig cfg;
  const AlignedWrench a = apply_bas(classify(Binding::HA, make(0, 50, -50, 0.3, 0, 0)), cfg);
  EXPECT_EQ(a.fa[3], 0.3);
}

TEST(ApplyBas, ClampedForceBounded) {
  const BASConfig cfg;
  for (double f : {-200.0, -31.0, 5.0, 29.9, 30.0, 1e6}) {
    const AlignedWrench a = apply_bas(classify(Binding::UA, make(0, f, f, 0, 0, 0)), cfg);
    EXPECT_LE(std::abs(a.fa[1]), cfg.threshold(Binding::UA, Channel::Fy) + 1e-12);
    EXPECT_LE(std::abs(a.fa[2]), cfg.threshold(Binding::UA, Channel::Fz) + 1e-12);
  }
}

TEST(BasTorques, ZeroAndLocality) {
  const ChainModel m = ChainModel::default_model();
  const BASConfig cfg;
  std::array<AlignedWrench, 3> w;
  for (Binding b : kBindings) w[static_cast<std::size_t>(index(b))].binding = b;
  Vec9 q;
  q << 0.1, -0.1, 0.5, 0.2, 0.3, 1.0, 0.2, 0.1, -0.1;
  EXPECT_TRUE(bas_torques(m, q, w, cfg).isZero(0.0));
  w[2].fa << 1, 2, 3, 0.1, 0.2, 0.3;
  const Vec9 tau = bas_torques(m, q, w, cfg);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(tau[i], 0.0);
  EXPECT_FALSE(tau.tail<3>().isZero());
}

TEST(BasTorques, DenseOracle) {
  const ChainModel m = ChainModel::default_model();
  const BASConfig cfg;
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  for (int n = 0; n < 50; ++n) {
    const Vec9 q = testing::random_posture(m, rng);
    const ChainFrames f = forward_kinematics(m, q);
    std::array<AlignedWrench, 3> w;
    Vec9 expected = Vec9::Zero();
    for (Binding b : kBindings) {
      auto& a = w[static_cast<std::size_t>(index(b))];
      a.binding = b;
      for (int i = 0; i < 6; ++i) a.fa[i] = g(rng);
      // Full-chain Jacobian padded to 6 x 9, then a diagonal span selector.
      Eigen::Matrix<double, 6, 9> full = Eigen::Matrix<double, 6, 9>::Zero();
      const Jacobian j = jacobian(m, f, Joint::SC1, b);
      full.leftCols(j.cols()) = j;
      Mat9 sel = Mat9::Zero();
      for (int i = index(cfg.span_first[static_cast<std::size_t>(index(b))]);
           i <= m.mount(b).parent; ++i) {
        sel(i, i) = 1.0;
      }
      Eigen::Matrix<double, 6, 6> rot = Eigen::Matrix<double, 6, 6>::Zero();
      rot.topLeftCorner<3, 3>() = f.binding(b).R;
      rot.bottomRightCorner<3, 3>() = f.binding(b).R;
      expected += sel * full.transpose() * rot * a.fa;
    }
    const Vec9 tau = bas_torques(m, f, w, cfg);
    EXPECT_LT((tau - expected).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
  }
}

TEST(BasConfig, Validation) {
  BASConfig cfg;
  cfg.f_max[1][0] = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  BASConfig span;
  span.span_first[0] = Joint::EL1;
  EXPECT_THROW(span.validate_for(ChainModel::default_model()), ConfigError);
}

}  // namespace
}  // namespace flexarm
