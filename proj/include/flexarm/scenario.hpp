#pragma once

#include "flexarm/experiments.hpp"
#include "flexarm/simulation.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flexarm {

inline constexpr int kScenarioSchema = 1;

struct SweepSpec {
  std::vector<std::string> movements;  // empty: all default movements
  std::vector<double> speeds = default_speeds();
  double amplitude = 0.4;
  int cycles = 3;
  double start = 0.5;
  double tail = 0.5;
};

struct ScenarioFile {
  SimulationConfig sim;
  std::vector<ControllerMode> modes = {kAllModes.begin(), kAllModes.end()};
  std::optional<SweepSpec> sweep;
  std::string output_dir;  // empty: caller decides
};

// Parses a schema-1 scenario document. Unknown keys, wrong types, and
// failed sub-config validation throw ConfigError whose message starts with
// the offending key path.
ScenarioFile parse_scenario(std::string_view text);
ScenarioFile load_scenario(const std::string& path);

// Sweep configuration from a scenario's base simulation and sweep block.
SweepConfig make_sweep(const ScenarioFile& file);

Joint joint_from_name(std::string_view s);
Channel channel_from_name(std::string_view s);

}  // namespace flexarm
