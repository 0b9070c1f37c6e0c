#include "flexarm/check.hpp"
#include "flexarm/scenario.hpp"
#include "flexarm/trace_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace flexarm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitAbort = 3;

std::string output_dir(const std::string& flag, const ScenarioFile& file) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("FLEXARM_OUT_DIR"); env && *env) return env;
  if (!file.output_dir.empty()) return file.output_dir;
  return "results";
}

void prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
}

std::vector<ControllerMode> modes_from(const std::string& flag,
                                       const ScenarioFile& file) {
  if (flag.empty()) return file.modes;
  if (flag == "all") return {kAllModes.begin(), kAllModes.end()};
  try {
    return {mode_from_name(flag)};
  } catch (const ConfigError&) {
    throw ConfigError("--mode: unknown mode '" + flag +
                      "' (expected ff, bas, fcm, bas-fcm, or all)");
  }
}

int cmd_run(const std::string& scenario, const std::string& mode_flag,
            const std::optional<std::uint64_t>& seed, const std::string& out_flag) {
  ScenarioFile file = load_scenario(scenario);
  if (seed) file.sim.seed = *seed;
  const auto modes = modes_from(mode_flag, file);
  const std::string dir = output_dir(out_flag, file);
  const auto traces = run_modes(file.sim, modes);
  prepare_dir(dir);
  std::ostringstream metrics;
  write_metrics_header(metrics);
  for (const auto& tr : traces) {
    const auto m = compute_metrics(tr);
    write_metrics_csv(metrics, tr, m);
    std::ostringstream csv;
    write_trace_csv(csv, tr);
    const std::string fname = traces.size() == 1
                                  ? "trace.csv"
                                  : "trace_" + std::string(name(tr.mode)) + ".csv";
    write_file((fs::path(dir) / fname).string(), csv.str());
    std::printf("%-8s", std::string(name(tr.mode)).c_str());
    for (const auto& [b, c] : mc_channel_list()) {
      const auto label = channel_label(b, c);
      std::printf(" %s %.3f", label.c_str(), find_metric(m, label).stats.mav);
    }
    std::printf("\n");
  }
  write_file((fs::path(dir) / "metrics.csv").string(), metrics.str());
  std::printf("wrote %s\n", dir.c_str());
  return kExitOk;
}

int cmd_sweep(const std::string& scenario, const std::string& mode_flag,
              const std::vector<std::string>& movements,
              const std::vector<double>& speeds,
              const std::optional<std::uint64_t>& seed, const std::string& out_flag) {
  ScenarioFile file = load_scenario(scenario);
  if (seed) file.sim.seed = *seed;
  file.modes = modes_from(mode_flag, file);
  SweepConfig sc = make_sweep(file);
  if (!movements.empty()) {
    const auto known = default_movements();
    sc.movements.clear();
    for (const auto& n : movements) {
      try {
        sc.movements.push_back(find_movement(known, n));
      } catch (const DomainError&) {
        throw ConfigError("--movement: unknown movement '" + n + "'");
      }
    }
  }
  if (!speeds.empty()) sc.speeds = speeds;
  sc.validate();
  const std::string dir = output_dir(out_flag, file);
  const auto rows = run_sweep(sc);
  prepare_dir(dir);
  std::ostringstream csv;
  write_sweep_csv(csv, rows, sc.movements);
  write_file((fs::path(dir) / "sweep.csv").string(), csv.str());
  for (const auto& r : rows) {
    std::printf("%-9s %.1f %-8s %.4f\n", r.movement.c_str(), r.speed,
                std::string(name(r.mode)).c_str(), r.max_ac);
  }
  std::printf("wrote %s\n", dir.c_str());
  return kExitOk;
}

int cmd_check(bool list, const std::vector<std::string>& suites,
              const std::string& fault) {
  if (list) {
    for (const auto& s : check_suites()) std::printf("%s\n", s.c_str());
    return kExitOk;
  }
  CheckOptions opts;
  opts.suites = suites;
  opts.inject_fault = fault;
  const auto results = run_checks(opts);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%-12s %s  %s\n", r.suite.c_str(), r.ok ? "PASS" : "FAIL",
                r.detail.c_str());
    failed += r.ok ? 0 : 1;
  }
  std::printf("%zu suites, %d failed\n", results.size(), failed);
  return failed ? kExitFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flexarm: exoskeleton control simulator"};
  app.require_subcommand(1);

  std::string scenario, mode, out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run a scenario under one or all modes");
  run->add_option("--scenario", scenario, "Scenario JSON file")->required();
  run->add_option("--mode", mode, "ff, bas, fcm, bas-fcm, or all");
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out", out, "Output directory");

  std::vector<std::string> movements;
  std::vector<double> speeds;
  auto* sweep = app.add_subcommand("sweep", "Speed sweep of the movement set");
  sweep->add_option("--scenario", scenario, "Scenario JSON file")->required();
  sweep->add_option("--mode", mode, "ff, bas, fcm, bas-fcm, or all");
  sweep->add_option("--movement", movements, "Movement name (repeatable)");
  sweep->add_option("--speed", speeds, "Speed in rad/s (repeatable)");
  sweep->add_option("--seed", seed, "Override the scenario seed");
  sweep->add_option("--out", out, "Output directory");

  bool list = false;
  std::vector<std::string> suites;
  std::string fault;
  auto* check = app.add_subcommand("check", "Run the invariant suites");
  check->add_flag("--list", list, "List suites without running them");
  check->add_option("--suite", suites, "Suite name (repeatable)");
  check->add_option("--inject-fault", fault, "Inject a named fault (jacobian)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) return cmd_run(scenario, mode, seed, out);
    if (*sweep) return cmd_sweep(scenario, mode, movements, speeds, seed, out);
    return cmd_check(list, suites, fault);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const SimulationAbort& e) {
    std::fprintf(stderr, "abort: %s\n", e.what());
    return kExitAbort;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitAbort;
  }
}
