#include "flexarm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace flexarm {

std::vector<Trace> run_modes(const SimulationConfig& cfg,
                             const std::vector<ControllerMode>& modes) {
  cfg.validate();
  const HumanSetup human = prepare_human(cfg);
  std::vector<Trace> out;
  out.reserve(modes.size());
  for (ControllerMode m : modes) out.push_back(run_scenario(cfg, m, human));
  return out;
}

std::vector<Movement> default_movements() {
  constexpr int kSh1 = index(Joint::SH1);
  constexpr int kSh2 = index(Joint::SH2);
  constexpr int kEl1 = index(Joint::EL1);
  constexpr int kEl2 = index(Joint::EL2);
  const auto fa_tz = std::pair{Binding::FA, Channel::Tz};
  const auto fa_ty = std::pair{Binding::FA, Channel::Ty};
  const auto ua_tz = std::pair{Binding::UA, Channel::Tz};
  const auto ua_ty = std::pair{Binding::UA, Channel::Ty};
  return {
      {"El.Fl/Ex", {kEl2}, {1.0}, {fa_tz}},
      {"Sh.Fl/Ex", {kSh1}, {1.0}, {ua_tz}},
      {"Sh.IR/ER", {kEl1}, {1.0}, {fa_ty}},
      {"Sh.Ad/Ab", {kSh2}, {1.0}, {ua_ty}},
      {"Lift", {kEl2, kSh1}, {1.0, 1.0}, {fa_tz, ua_tz}},
      {"Swing", {kEl1, kSh2}, {1.0, 1.0}, {fa_ty, ua_ty}},
  };
}

const Movement& find_movement(const std::vector<Movement>& set,
                              const std::string& name) {
  for (const auto& m : set) {
    if (m.name == name) return m;
  }
  throw DomainError("unknown movement " + name);
}

std::vector<double> default_speeds() {
  std::vector<double> s;
  for (int i = 1; i <= 7; ++i) s.push_back(0.5 * i);
  return s;
}

double max_ac(const Trace& trace, const Movement& movement, double discard) {
  double best = 0.0;
  for (const auto& row : trace.rows) {
    if (row.t + 1e-12 < discard) continue;
    double sum = 0.0;
    for (const auto& [b, c] : movement.ac_channels) {
      sum += std::abs(row.filtered[index(b)][c]);
    }
    best = std::max(best, sum);
  }
  return best;
}

std::vector<std::pair<double, double>> cycle_windows(
    const JointIntent& intent) {
  std::vector<std::pair<double, double>> w;
  const double period = 2.0 * std::numbers::pi / intent.omega();
  for (int k = 0; k < intent.cycles; ++k) {
    w.emplace_back(intent.start + k * period, intent.start + (k + 1) * period);
  }
  return w;
}

double cycle_max_ac(const Trace& trace,
                    const std::vector<std::pair<Binding, Channel>>& channels,
                    const std::vector<std::pair<double, double>>& windows) {
  if (windows.empty()) throw DomainError("cycle_max_ac: no windows");
  double total = 0.0;
  for (const auto& [t0, t1] : windows) {
    double best = 0.0;
    bool any = false;
    for (const auto& row : trace.rows) {
      if (row.t + 1e-12 < t0 || row.t + 1e-12 >= t1) continue;
      any = true;
      double sum = 0.0;
      for (const auto& [b, c] : channels) {
        sum += std::abs(row.filtered[index(b)][c]);
      }
      best = std::max(best, sum);
    }
    if (!any) throw DomainError("cycle_max_ac: window outside the trace");
    total += best;
  }
  return total / static_cast<double>(windows.size());
}

void SweepConfig::validate() const {
  base.validate();
  if (movements.empty() || speeds.empty() || modes.empty()) {
    throw ConfigError("sweep needs movements, speeds, and modes");
  }
  for (const auto& m : movements) {
    if (m.ac_channels.empty()) {
      throw ConfigError("movement " + m.name + " lists no AC channels");
    }
  }
  for (double s : speeds) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("sweep speeds must be positive");
    }
  }
  if (!(amplitude > 0.0) || cycles < 1 || !(start >= 0.0) || !(tail >= 0.0)) {
    throw ConfigError("sweep amplitude, cycles, start, or tail invalid");
  }
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<SweepRow> rows;
  for (const auto& mv : cfg.movements) {
    for (double speed : cfg.speeds) {
      SimulationConfig sc = cfg.base;
      sc.intent.kind = IntentSpec::Kind::kJoint;
      sc.intent.joint.joints = mv.joints;
      sc.intent.joint.signs = mv.signs;
      sc.intent.joint.amplitude = cfg.amplitude;
      sc.intent.joint.speed = speed;
      sc.intent.joint.cycles = cfg.cycles;
      sc.intent.joint.start = cfg.start;
      sc.duration = sc.intent.joint.end_time() + cfg.tail;
      const auto traces = run_modes(sc, cfg.modes);
      const auto windows = cycle_windows(sc.intent.joint);
      for (std::size_t i = 0; i < traces.size(); ++i) {
        SweepRow r;
        r.movement = mv.name;
        r.speed = speed;
        r.mode = cfg.modes[i];
        r.max_ac = cycle_max_ac(traces[i], mv.ac_channels, windows);
        for (const auto& ch : mv.ac_channels) {
          r.channel_max.push_back(cycle_max_ac(traces[i], {ch}, windows));
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

const SweepRow& find_row(const std::vector<SweepRow>& rows,
                         const std::string& movement, double speed,
                         ControllerMode mode) {
  for (const auto& r : rows) {
    if (r.movement == movement && std::abs(r.speed - speed) < 1e-9 &&
        r.mode == mode) {
      return r;
    }
  }
  throw DomainError("no sweep row for " + movement);
}

}  // namespace flexarm
