#include "flexarm/check.hpp"

#include "flexarm/bas.hpp"
#include "flexarm/fcm.hpp"
#include "flexarm/plant.hpp"
#include "flexarm/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace flexarm {

namespace {

struct Ctx {
  std::mt19937_64 rng;
  std::string fault;
};

Vec9 random_posture(const ChainModel& m, std::mt19937_64& rng) {
  Vec9 q;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(m.joints[i].lower, m.joints[i].upper);
    q[static_cast<Eigen::Index>(i)] = u(rng);
  }
  return q;
}

std::string describe(const char* invariant, double worst, double tol) {
  std::ostringstream os;
  os << invariant << ": worst " << worst << " (tolerance " << tol << ")";
  return os.str();
}

// Central differences of the binding position and orientation.
Jacobian fd_jacobian(const ChainModel& m, const Vec9& q, Binding b, int cols) {
  constexpr double h = 1e-6;
  Jacobian j(6, cols);
  for (int c = 0; c < cols; ++c) {
    Vec9 qp = q, qm = q;
    qp[c] += h;
    qm[c] -= h;
    const Frame fp = forward_kinematics(m, qp).binding(b);
    const Frame fm = forward_kinematics(m, qm).binding(b);
    const Eigen::AngleAxisd aa(Mat3(fp.R * fm.R.transpose()));
    j.col(c) << (fp.p - fm.p) / (2 * h), aa.axis() * aa.angle() / (2 * h);
  }
  return j;
}

CheckResult check_jacobian(Ctx& ctx) {
  const ChainModel m = ChainModel::default_model();
  constexpr double tol = 1e-6;
  double worst = 0.0;
  for (int n = 0; n < 200; ++n) {
    const Vec9 q = random_posture(m, ctx.rng);
    for (Binding b : kBindings) {
      Jacobian ja = jacobian(m, q, Joint::SC1, b);
      if (ctx.fault == "jacobian") ja(0, ja.cols() - 1) += 1e-3;
      const Jacobian jf = fd_jacobian(m, q, b, static_cast<int>(ja.cols()));
      const double scale = std::max(1.0, jf.cwiseAbs().maxCoeff());
      worst = std::max(worst, (ja - jf).cwiseAbs().maxCoeff() / scale);
    }
  }
  return {"jacobian", worst < tol,
          describe("analytic vs finite-difference Jacobian", worst, tol)};
}

CheckResult check_gains(Ctx&) {
  double worst = 0.0;
  bool ok = true;
  constexpr double fmax = 30.0;
  for (int i = 0; i <= 2000; ++i) {
    const double f = -2.0 * fmax + 4.0 * fmax * i / 2000.0;
    const BasGains g = bas_gains(f, fmax);
    ok = ok && g.k_f >= 0.0 && g.k_f <= 1.0 && g.k_t >= 0.0 && g.k_t <= 1.0;
    const double p = -50.0 + 100.0 * i / 2000.0;
    const double kc = coordination_gain(p, 2.0);
    ok = ok && kc > 0.0 && kc < 2.0;
    worst = std::max(worst, std::abs(coordination_gain(-p, 2.0) - (2.0 - kc)));
  }
  ok = ok && worst < 1e-12;
  return {"gains", ok,
          describe("gain bounds and k_c(-p) = 2 - k_c(p)", worst, 1e-12)};
}

CheckResult check_friction(Ctx&) {
  const FrictionParams f;
  double worst = 0.0;
  for (double v : {1e-9, 1e-6, 1e-3, 0.05, 1.0, 10.0}) {
    const Vec9 vv = Vec9::Constant(v);
    worst = std::max(worst, (friction_compensation(f, vv) +
                             friction_compensation(f, -vv)).cwiseAbs().maxCoeff());
  }
  const bool zero = friction_compensation(f, Vec9::Zero()).isZero(0.0);
  return {"friction", worst == 0.0 && zero,
          describe("friction oddness and f(0) = 0", worst, 0.0)};
}

CheckResult check_dynamics(Ctx& ctx) {
  const ChainModel m = ChainModel::default_model();
  const InertialModel in = InertialModel::default_for(m);
  double asym = 0.0;
  bool pd = true;
  for (int n = 0; n < 200; ++n) {
    const Mat9 mm = mass_matrix(m, in, random_posture(m, ctx.rng));
    asym = std::max(asym, (mm - mm.transpose()).cwiseAbs().maxCoeff());
    pd = pd && Eigen::LLT<Mat9>(mm).info() == Eigen::Success;
  }
  return {"dynamics", asym < 1e-10 && pd,
          describe(pd ? "mass matrix symmetry" : "mass matrix not positive definite",
                   asym, 1e-10)};
}

CheckResult check_energy(Ctx&) {
  PlantModel p;
  p.chain = ChainModel::default_model();
  p.inertials = InertialModel::default_for(p.chain);
  p.friction.f_c.setZero();
  p.friction.f_s.setZero();
  p.enforce_limits = false;
  PlantState s;
  s.q << 0.1, -0.1, 0.6, 0.3, 0.2, 0.9, 0.2, 0.1, -0.1;
  // Energy at q with the state-synchronous velocity of the step from q.
  const auto energy = [&](const Vec9& q, const Vec9& qd) {
    return kinetic_energy(p.chain, p.inertials, q, qd) +
           potential_energy(p.chain, p.inertials, q);
  };
  const double e0 = energy(s.q, s.qd);
  double ke_max = 0.0;
  double drift = 0.0;
  for (int k = 0; k < 1600; ++k) {
    const Vec9 q = s.q;
    const PlantStepInfo info = plant_step(s, Vec9::Zero(), p, 1.0 / 800.0);
    if (k == 0) continue;
    ke_max = std::max(ke_max, kinetic_energy(p.chain, p.inertials, q, info.qd_mid));
    drift = std::max(drift, std::abs(energy(q, info.qd_mid) - e0));
  }
  const double rel = drift / std::max(ke_max, 1e-12);
  return {"energy", rel < 1e-3,
          describe("free-chain energy drift / peak kinetic energy", rel, 1e-3)};
}

CheckResult check_determinism(Ctx&) {
  SimulationConfig cfg;
  cfg.name = "determinism";
  cfg.q0 << 0, 0, 0.5, 0.05, 0, 1.0, 0, 0, 0;
  cfg.duration = 1.0;
  cfg.intent.kind = IntentSpec::Kind::kJoint;
  cfg.intent.joint.joints = {index(Joint::EL2)};
  cfg.intent.joint.signs = {1.0};
  cfg.intent.joint.cycles = 1;
  const Trace a = run_scenario(cfg, ControllerMode::BAS_FCM);
  const Trace b = run_scenario(cfg, ControllerMode::BAS_FCM);
  bool same = a.rows.size() == b.rows.size();
  for (std::size_t i = 0; same && i < a.rows.size(); ++i) {
    same = a.rows[i].q == b.rows[i].q && a.rows[i].tau_cmd == b.rows[i].tau_cmd;
    for (std::size_t k = 0; k < 3; ++k) {
      same = same && a.rows[i].filtered[k].vector() == b.rows[i].filtered[k].vector();
    }
  }
  return {"determinism", same,
          same ? "repeated run reproduces the trace bit-exactly"
               : "repeated run diverged"};
}

using Suite = std::function<CheckResult(Ctx&)>;

const std::vector<std::pair<std::string, Suite>>& registry() {
  static const std::vector<std::pair<std::string, Suite>> r = {
      {"jacobian", check_jacobian}, {"gains", check_gains},
      {"friction", check_friction}, {"dynamics", check_dynamics},
      {"energy", check_energy},     {"determinism", check_determinism}};
  return r;
}

}  // namespace

std::vector<std::string> check_suites() {
  std::vector<std::string> out;
  for (const auto& [n, s] : registry()) out.push_back(n);
  return out;
}

std::vector<CheckResult> run_checks(const CheckOptions& opts) {
  if (!opts.inject_fault.empty() && opts.inject_fault != "jacobian") {
    throw ConfigError("unknown fault '" + opts.inject_fault + "'");
  }
  const auto names = check_suites();
  for (const auto& s : opts.suites) {
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw ConfigError("unknown check suite '" + s + "'");
    }
  }
  Ctx ctx{std::mt19937_64(opts.seed), opts.inject_fault};
  std::vector<CheckResult> out;
  for (const auto& [n, suite] : registry()) {
    if (!opts.suites.empty() &&
        std::find(opts.suites.begin(), opts.suites.end(), n) == opts.suites.end()) {
      continue;
    }
    out.push_back(suite(ctx));
  }
  return out;
}

}  // namespace flexarm
