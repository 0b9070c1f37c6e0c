// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Scenario files and the CLI binary are located via compile
// definitions set by CMake.
#include "flexarm/bas.hpp"
#include "flexarm/experiments.hpp"
#include "flexarm/fcm.hpp"
#include "flexarm/offset.hpp"
#include "flexarm/plant.hpp"
#include "flexarm/scenario.hpp"

#include <CLI11.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace flexarm;

namespace {

// Tolerances and limits.
constexpr int kJacobianConfigs = 1000;
constexpr double kJacobianRelTol = 1e-6;
constexpr double kPlanarIdentityTol = 1e-9;
constexpr double kPlanarSingularGuard = 1e-6;
constexpr double kGainExactTol = 1e-12;
constexpr int kGridPoints = 10000;
constexpr double kFrictionLimitRel = 1e-3;
constexpr double kFrictionContinuityGap = 1e-6;
constexpr double kFrictionWorked = 1.0535;
constexpr double kFrictionWorkedTol = 1e-3;
constexpr int kDynamicsConfigs = 1000;
constexpr double kSymmetryTol = 1e-10;
constexpr double kGravityRelTol = 1e-6;
constexpr double kEnergyRelTol = 1e-3;
constexpr double kOffsetRateTol = 1e-5;
constexpr int kSquareMavWins = 6;
constexpr int kSquareMadWins = 5;
constexpr int kSweepInversionsAllowed = 1;
constexpr double kSweepBasFromSpeed = 1.0;
constexpr int kReachMinSignChanges = 3;
constexpr double kReachWindowStart = 0.5;
constexpr double kReachWindow = 2.0;
constexpr double kReachDeadband = 0.05;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void add(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.ok = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += (ok ? "" : "FAILED ") + what;
}

Vec9 random_posture(const ChainModel& m, std::mt19937_64& rng) {
  Vec9 q;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(m.joints[i].lower, m.joints[i].upper);
    q[static_cast<Eigen::Index>(i)] = u(rng);
  }
  return q;
}

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

Outcome criterion1() {
  Outcome o;
  const ChainModel m = ChainModel::default_model();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int n = 0; n < kJacobianConfigs; ++n) {
    const Vec9 q = random_posture(m, rng);
    for (Binding b : kBindings) {
      const Jacobian ja = jacobian(m, q, Joint::SC1, b);
      const Jacobian jf = fd_jacobian(m, q, b, static_cast<int>(ja.cols()));
      worst = std::max(worst, (ja - jf).cwiseAbs().maxCoeff() /
                                  std::max(1.0, jf.cwiseAbs().maxCoeff()));
    }
  }
  add(o, worst < kJacobianRelTol, fmt("Jacobian vs FD worst %.2e at %d configs", worst, kJacobianConfigs));

  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi), len(0.1, 1.0);
  double planar = 0.0;
  int used = 0;
  for (int n = 0; n < kJacobianConfigs; ++n) {
    const PlanarTwoLink g{len(rng), len(rng)};
    const double t1 = ang(rng), t2 = ang(rng);
    if (std::abs(std::sin(t2)) <= kPlanarSingularGuard) continue;
    const Mat2 p = planar_jacobian_inverse(g, t1, t2) * planar_jacobian(g, t1, t2);
    planar = std::max(planar, (p - Mat2::Identity()).cwiseAbs().maxCoeff());
    ++used;
  }
  add(o, planar < kPlanarIdentityTol, fmt("planar inverse x Jacobian - I worst %.2e over %d", planar, used));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const double fmax = 30.0;
  const BasGains g0 = bas_gains(0.0, fmax), gh = bas_gains(fmax / 2, fmax),
                 gm = bas_gains(fmax, fmax);
  const double e = std::max({std::abs(g0.k_f - 0.5), std::abs(g0.k_t - 1.0),
                             std::abs(gh.k_f - 1.0), std::abs(gm.k_t)});
  add(o, e < kGainExactTol, fmt("anchor values error %.1e", e));

  bool bounded = true, clamped = true;
  const BASConfig cfg;
  for (int i = 0; i < kGridPoints; ++i) {
    const double f = -3.0 * fmax + 6.0 * fmax * i / (kGridPoints - 1);
    const BasGains g = bas_gains(f, fmax);
    bounded = bounded && g.k_f >= 0 && g.k_f <= 1 && g.k_t >= 0 && g.k_t <= 1;
    for (Binding b : kBindings) {
      const Wrench w{Vec3(0, f, -f), Vec3(0, 1, 1)};
      const AlignedWrench a = apply_bas(classify(b, w), cfg);
      clamped = clamped && std::abs(a.fa[1]) <= cfg.threshold(b, Channel::Fy) &&
                std::abs(a.fa[2]) <= cfg.threshold(b, Channel::Fz);
    }
  }
  add(o, bounded, fmt("gains in [0, 1] on %d-point grid", kGridPoints));
  add(o, clamped, "aligned |F'| <= f_max");
  return o;
}

std::array<ComponentSet, 3> sets_of(const Vec3& ua, const Vec3& fa, const Vec3& ha, double ha_tx) {
  return {classify(Binding::UA, Wrench{ua, Vec3::Zero()}),
          classify(Binding::FA, Wrench{fa, Vec3::Zero()}),
          classify(Binding::HA, Wrench{ha, Vec3(ha_tx, 0, 0)})};
}

Outcome criterion3() {
  Outcome o;
  double odd = 0.0;
  bool bounds = true, mono = true;
  double prev = -1.0;
  for (int i = 0; i < kGridPoints; ++i) {
    const double p = -20.0 + 40.0 * i / (kGridPoints - 1);
    const double k = coordination_gain(p, 2.0);
    bounds = bounds && k > 0.0 && k < 2.0;
    mono = mono && k >= prev;
    prev = k;
    odd = std::max(odd, std::abs(coordination_gain(-p, 2.0) - (2.0 - k)));
  }
  add(o, coordination_gain(0.0, 2.0) == 1.0, "k_c(0) = 1");
  add(o, bounds && mono, "k_c in (0, 2) and monotone on grid");
  add(o, odd < kGainExactTol, fmt("odd symmetry error %.1e", odd));

  // Truth table: group patterns none / some / all above threshold, for both
  // stages, against "target iff some local and some proximal reach it".
  FCMConfig cfg;
  cfg.hysteresis = 0.0;
  const double th = 3.0;
  const auto pattern = [&](int p, int k) { return (p == 2 || (p == 1 && k == 0)) ? 2 * th : 0.5 * th; };
  int cases = 0, mismatches = 0;
  for (int loc = 0; loc < 3; ++loc) {
    for (int prox = 0; prox < 3; ++prox) {
      const bool expect = loc > 0 && prox > 0;
      {
        IntentDistinction id(cfg);
        const Vec3 ua(0, pattern(prox, 0), pattern(prox, 1));
        const Vec3 fa(0, pattern(loc, 0), pattern(loc, 1));
        const auto r = id.step(sets_of(ua, fa, Vec3::Zero(), 0.0));
        mismatches += (r.modes[0] == IntentMode::TargetOriented) != expect;
        ++cases;
      }
      {
        IntentDistinction id(cfg);
        const Vec3 ua(0, pattern(prox, 0), pattern(prox, 2));
        const Vec3 fa(0, pattern(prox, 2), pattern(prox, 2));
        const Vec3 ha(0, pattern(loc, 1), pattern(loc, 1));
        const auto r = id.step(sets_of(ua, fa, ha, pattern(loc, 0) / 10.0));
        mismatches += (r.modes[1] == IntentMode::TargetOriented) != expect;
        ++cases;
      }
    }
  }
  add(o, mismatches == 0, fmt("truth table %d/%d cases", cases - mismatches, cases));

  // Hysteresis: oscillation of +-0.5 band about every threshold.
  FCMConfig hc;
  const double band = hc.hysteresis;
  int switches = 0;
  for (bool start_target : {false, true}) {
    IntentDistinction id(hc);
    IntentResult r;
    if (start_target) r = id.step(sets_of(Vec3(0, 10, 10), Vec3(0, 10, 10), Vec3(0, 10, 10), 1.0));
    std::array<IntentMode, 2> last = r.modes;
    for (int k = 0; k < 400; ++k) {
      const double s = 1.0 + (k % 2 ? 0.5 : -0.5) * band;
      const Vec3 v(0, th * s, th * s);
      r = id.step(sets_of(v, v, v, 0.3 * s));
      switches += (r.modes[0] != last[0]) + (r.modes[1] != last[1]);
      last = r.modes;
    }
  }
  add(o, switches == 0, fmt("%d mode switches under +-0.5 band oscillation", switches));
  return o;
}

Outcome criterion4() {
  Outcome o;
  const double fc = 1.0, fs = 2.0, vs = 0.1, a = 0.01;
  const auto f = [&](double v) { return friction_scalar(fc, fs, vs, a, v); };
  bool odd = true;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ex(-12.0, 3.0);
  for (int i = 0; i < kGridPoints; ++i) {
    const double v = std::pow(10.0, ex(rng));
    odd = odd && f(v) == -f(-v);
  }
  add(o, odd, "exact oddness");
  add(o, f(0.0) == 0.0, "f(0) = 0");
  const double big = 1e6 * vs;
  const double lim = std::abs(std::abs(f(big)) - fc) / fc;
  add(o, lim < kFrictionLimitRel, fmt("|f| vs f_c at 1e6 v_s rel %.1e", lim));
  const double gap = std::abs(f(1e-9) - f(-1e-9));
  add(o, gap < kFrictionContinuityGap, fmt("continuity gap %.1e", gap));
  const double w = f(0.001);
  add(o, std::abs(w - kFrictionWorked) < kFrictionWorkedTol, fmt("worked value %.5f", w));
  return o;
}

Outcome criterion5() {
  Outcome o;
  const ChainModel m = ChainModel::default_model();
  const InertialModel in = InertialModel::default_for(m);
  std::mt19937_64 rng(5);
  double asym = 0.0, grav = 0.0;
  bool pd = true;
  for (int n = 0; n < kDynamicsConfigs; ++n) {
    const Vec9 q = random_posture(m, rng);
    const Mat9 mm = mass_matrix(m, in, q);
    asym = std::max(asym, (mm - mm.transpose()).cwiseAbs().maxCoeff());
    pd = pd && Eigen::LLT<Mat9>(mm).info() == Eigen::Success;
    if (n % 10 == 0) {
      const Vec9 g = gravity_torques(m, in, q);
      Vec9 fd;
      for (int i = 0; i < 9; ++i) {
        const double h = 1e-6;
        fd[i] = (potential_energy(m, in, q + h * Vec9::Unit(i)) -
                 potential_energy(m, in, q - h * Vec9::Unit(i))) / (2 * h);
      }
      grav = std::max(grav, (g - fd).cwiseAbs().maxCoeff() / std::max(1.0, g.cwiseAbs().maxCoeff()));
    }
  }
  add(o, asym < kSymmetryTol && pd, fmt("M symmetric (%.1e) and PD at %d configs", asym, kDynamicsConfigs));
  add(o, grav < kGravityRelTol, fmt("gravity vs PE gradient rel %.1e", grav));

  PlantModel p;
  p.chain = m;
  p.inertials = in;
  p.friction.f_c.setZero();
  p.friction.f_s.setZero();
  p.enforce_limits = false;
  PlantState s;
  s.q << 0.1, -0.1, 0.6, 0.3, 0.2, 0.9, 0.2, 0.1, -0.1;
  const double e0 = potential_energy(m, in, s.q);
  double drift = 0.0, ke_max = 0.0;
  const double dt = 1.0 / 800.0;
  for (int k = 0; k < 1600; ++k) {
    const Vec9 q = s.q;
    const PlantStepInfo info = plant_step(s, Vec9::Zero(), p, dt);
    if (k == 0) continue;
    const double ke = kinetic_energy(m, in, q, info.qd_mid);
    ke_max = std::max(ke_max, ke);
    drift = std::max(drift, std::abs(ke + potential_energy(m, in, q) - e0));
  }
  const double rel = drift / ke_max;
  add(o, rel < kEnergyRelTol, fmt("free-chain energy drift %.2e of peak KE over 2 s", rel));
  return o;
}

Outcome criterion6() {
  Outcome o;
  const OffsetGeometry same{{0.318, 0.261}, {0.318, 0.261}};
  const OffsetGeometry diff{{0.318, 0.261}, {0.332, 0.273}};
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> px(0.15, 0.4), py(0.05, 0.35), v(-1.0, 1.0);
  bool zero = true;
  double worst = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const Vec2 p(px(rng), py(rng)), vel(v(rng), v(rng));
    const OffsetState s = offset_angles(same, p);
    const auto [zu, zf] = offset_rates(same, p, vel);
    zero = zero && s.err_ua == 0.0 && s.err_fa == 0.0 && zu == 0.0 && zf == 0.0;
    const double h = 1e-6;
    const OffsetState a = offset_angles(diff, p + h * vel);
    const OffsetState b = offset_angles(diff, p - h * vel);
    const auto [ru, rf] = offset_rates(diff, p, vel);
    worst = std::max({worst, std::abs(ru - (a.err_ua - b.err_ua) / (2 * h)),
                      std::abs(rf - (a.err_fa - b.err_fa) / (2 * h))});
  }
  add(o, zero, "identical geometries give exactly zero");
  add(o, worst < kOffsetRateTol, fmt("rate vs FD worst %.1e", worst));

  BindingImpedance imp;
  imp.k_ua = 120.0;
  imp.d_ua = 3.0;
  imp.k_fa = 80.0;
  imp.d_fa = 2.0;
  bool linear = true;
  for (double c : {2.0, -1.0, 0.0}) {
    OffsetState s;
    s.err_ua = 0.01;
    s.err_fa = -0.02;
    s.rate_err_ua = 0.3;
    s.rate_err_fa = -0.1;
    OffsetState t = s;
    t.err_ua *= c;
    t.err_fa *= c;
    t.rate_err_ua *= c;
    t.rate_err_fa *= c;
    const auto a = disturbance_torques(s, imp), b = disturbance_torques(t, imp);
    linear = linear && b.first == c * a.first && b.second == c * a.second;
  }
  add(o, linear, "impedance linearity");
  return o;
}

std::string scenario_path(const char* name) { return std::string(FLEXARM_SCENARIO_DIR) + "/" + name; }

Outcome criterion7() {
  Outcome o;
  const ScenarioFile f = load_scenario(scenario_path("square.json"));
  const auto traces = run_modes(f.sim, {ControllerMode::FF, ControllerMode::BAS_FCM});
  const auto ff = compute_metrics(traces[0]);
  const auto bf = compute_metrics(traces[1]);
  int mav = 0, mad = 0;
  for (const auto& [b, c] : mc_channel_list()) {
    const auto label = channel_label(b, c);
    mav += find_metric(bf, label).stats.mav < find_metric(ff, label).stats.mav;
    mad += find_metric(bf, label).stats.mad < find_metric(ff, label).stats.mad;
  }
  add(o, mav >= kSquareMavWins, fmt("BAS_FCM MAV lower on %d/7 (need %d)", mav, kSquareMavWins));
  add(o, mad >= kSquareMadWins, fmt("BAS_FCM MAD lower on %d/7 (need %d)", mad, kSquareMadWins));
  return o;
}

Outcome criterion8() {
  Outcome o;
  const ScenarioFile f = load_scenario(scenario_path("sweep.json"));
  SweepConfig cfg = make_sweep(f);
  cfg.modes = {ControllerMode::FF, ControllerMode::BAS_ONLY};
  const auto rows = run_sweep(cfg);
  const auto ac = [&](const std::string& mv, double s, ControllerMode m) {
    return find_row(rows, mv, s, m).max_ac;
  };
  for (const auto& mv : cfg.movements) {
    int inv = 0;
    for (std::size_t i = 1; i < cfg.speeds.size(); ++i) {
      inv += ac(mv.name, cfg.speeds[i], ControllerMode::FF) <
             ac(mv.name, cfg.speeds[i - 1], ControllerMode::FF);
    }
    add(o, inv <= kSweepInversionsAllowed, fmt("%s FF inversions %d", mv.name.c_str(), inv));
    std::string worse;
    for (double s : cfg.speeds) {
      if (s < kSweepBasFromSpeed) continue;
      const double b = ac(mv.name, s, ControllerMode::BAS_ONLY), a = ac(mv.name, s, ControllerMode::FF);
      if (!(b < a)) worse += fmt(" %.1f (%.3f vs %.3f)", s, b, a);
    }
    add(o, worse.empty(), mv.name + " BAS < FF" + (worse.empty() ? "" : " except at" + worse));
  }
  const std::map<std::string, std::pair<std::string, std::string>> compounds = {
      {"Lift", {"El.Fl/Ex", "Sh.Fl/Ex"}}, {"Swing", {"Sh.IR/ER", "Sh.Ad/Ab"}}};
  for (const auto& [c, parts] : compounds) {
    std::string worse;
    for (double s : cfg.speeds) {
      const double v = ac(c, s, ControllerMode::FF);
      const double m = std::max(ac(parts.first, s, ControllerMode::FF), ac(parts.second, s, ControllerMode::FF));
      if (!(v > m)) worse += fmt(" %.1f (%.3f vs %.3f)", s, v, m);
    }
    add(o, worse.empty(), c + " > max of singles" + (worse.empty() ? "" : " except at" + worse));
  }
  return o;
}

Outcome criterion9() {
  Outcome o;
  const ScenarioFile f = load_scenario(scenario_path("reach.json"));
  const auto traces = run_modes(f.sim, {ControllerMode::FF, ControllerMode::BAS_FCM});
  std::array<int, 2> count{};
  std::array<double, 2> peak{};
  for (int i = 0; i < 2; ++i) {
    std::vector<double> x;
    for (const auto& r : traces[static_cast<std::size_t>(i)].rows) {
      if (r.t < kReachWindowStart || r.t >= kReachWindowStart + kReachWindow) continue;
      const double v = r.filtered[index(Binding::UA)][Channel::Tz];
      x.push_back(v);
      peak[static_cast<std::size_t>(i)] = std::max(peak[static_cast<std::size_t>(i)], std::abs(v));
    }
    count[static_cast<std::size_t>(i)] = count_sign_changes(x, kReachDeadband);
  }
  add(o, count[0] >= kReachMinSignChanges, fmt("FF UA.Tz sign changes %d in 2 s (need %d)", count[0], kReachMinSignChanges));
  add(o, count[1] < count[0], fmt("BAS_FCM sign changes %d < %d", count[1], count[0]));
  add(o, peak[1] < peak[0], fmt("BAS_FCM max |AC| %.3f < %.3f", peak[1], peak[0]));
  return o;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + FLEXARM_CLI + "\" " + args + " > \"" +
                          log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Outcome criterion10() {
  Outcome o;
  const fs::path data = FLEXARM_TEST_DATA_DIR;
  const fs::path tmp = fs::temp_directory_path() / fs::path("flexarm_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const int rc = run_cli("run --scenario \"" + (data / "golden.json").string() + "\" --out \"" +
                             tmp.string() + "\"", tmp / "run.log");
  add(o, rc == 0, fmt("valid scenario exit %d", rc));
  const bool trace = slurp(tmp / "trace.csv") == slurp(data / "golden_trace.csv") &&
                     fs::exists(tmp / "trace.csv");
  const bool metrics = slurp(tmp / "metrics.csv") == slurp(data / "golden_metrics.csv") &&
                       fs::exists(tmp / "metrics.csv");
  add(o, trace, "golden trace bit-exact");
  add(o, metrics, "golden metrics bit-exact");
  const int bad = run_cli("run --scenario \"" + (data / "malformed.json").string() + "\" --out \"" +
                              tmp.string() + "\"", tmp / "bad.log");
  add(o, bad == 2, fmt("malformed scenario exit %d", bad));
  const int ab = run_cli("run --scenario \"" + (data / "abort.json").string() + "\" --out \"" +
                             tmp.string() + "\"", tmp / "abort.log");
  add(o, ab == 3, fmt("aborting scenario exit %d", ab));
  std::error_code ec;
  fs::remove_all(tmp, ec);
  return o;
}

struct Criterion {
  std::function<Outcome()> run;
  double budget_s;  // 0: no runtime bound
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> which;
  app.add_option("--criterion", which, "Criterion number 1-10 (repeatable; default all)")
      ->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);
  const std::map<int, Criterion> all = {
      {1, {criterion1, 10.0}}, {2, {criterion2, 0.0}},  {3, {criterion3, 0.0}},
      {4, {criterion4, 0.0}},  {5, {criterion5, 30.0}}, {6, {criterion6, 0.0}},
      {7, {criterion7, 60.0}}, {8, {criterion8, 300.0}}, {9, {criterion9, 0.0}},
      {10, {criterion10, 0.0}}};
  if (which.empty()) {
    for (const auto& [n, c] : all) which.push_back(n);
  }
  bool ok = true;
  for (int n : which) {
    const Criterion& c = all.at(n);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0) add(out, secs < c.budget_s, fmt("runtime %.1f s (limit %.0f s)", secs, c.budget_s));
    std::cout << "criterion " << n << ": " << (out.ok ? "PASS" : "FAIL") << " | " << out.detail << "\n";
    ok = ok && out.ok;
  }
  return ok ? 0 : 1;
}
