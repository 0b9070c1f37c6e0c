#pragma once

#include "flexarm/metrics.hpp"
#include "flexarm/simulation.hpp"

#include <string>
#include <vector>

namespace flexarm {

// One trace per mode, all sharing the scenario seed and human trajectory.
std::vector<Trace> run_modes(const SimulationConfig& cfg,
                             const std::vector<ControllerMode>& modes);

struct Movement {
  std::string name;
  std::vector<int> joints;     // 0-based
  std::vector<double> signs;
  // Assistant channels summed for the movement's AC measure.
  std::vector<std::pair<Binding, Channel>> ac_channels;
};

// El.Fl/Ex, Sh.Fl/Ex, Sh.IR/ER, Sh.Ad/Ab, Lift (elbow + shoulder flexion),
// Swing (humeral rotation + abduction).
std::vector<Movement> default_movements();
const Movement& find_movement(const std::vector<Movement>& set,
                              const std::string& name);

// 0.5 to 3.5 rad/s in 0.5 rad/s steps.
std::vector<double> default_speeds();

// Max over t >= discard of the summed absolute filtered AC channels.
double max_ac(const Trace& trace, const Movement& movement,
              double discard = kDefaultDiscard);

// Time windows [t0, t1) of each motion cycle.
std::vector<std::pair<double, double>> cycle_windows(const JointIntent& intent);

// Mean over windows of the per-window max of the summed absolute AC
// channels; one window per repetition of the movement.
double cycle_max_ac(const Trace& trace,
                    const std::vector<std::pair<Binding, Channel>>& channels,
                    const std::vector<std::pair<double, double>>& windows);

struct SweepRow {
  std::string movement;
  double speed = 0.0;
  ControllerMode mode = ControllerMode::FF;
  double max_ac = 0.0;              // cycle_max_ac of the summed channels
  std::vector<double> channel_max;  // the same per entry of ac_channels
};

struct SweepConfig {
  SimulationConfig base;       // intent is replaced per movement and speed
  std::vector<Movement> movements = default_movements();
  std::vector<double> speeds = default_speeds();
  std::vector<ControllerMode> modes = {kAllModes.begin(), kAllModes.end()};
  double amplitude = 0.4;      // rad
  int cycles = 3;
  double start = 0.5;          // s
  double tail = 0.5;           // s simulated after the motion ends

  void validate() const;
};

// Rows ordered by movement, speed, mode.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

const SweepRow& find_row(const std::vector<SweepRow>& rows,
                         const std::string& movement, double speed,
                         ControllerMode mode);

}  // namespace flexarm
