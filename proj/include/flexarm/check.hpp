#pragma once

#include <string>
#include <vector>

namespace flexarm {

struct CheckResult {
  std::string suite;
  bool ok = false;
  std::string detail;  // named invariant and worst value
};

struct CheckOptions {
  std::vector<std::string> suites;  // empty: all
  // "jacobian" perturbs the analytic Jacobian under test.
  std::string inject_fault;
  unsigned seed = 12345;
};

// jacobian, gains, friction, dynamics, energy, determinism.
std::vector<std::string> check_suites();

// Throws ConfigError on an unknown suite or fault name.
std::vector<CheckResult> run_checks(const CheckOptions& opts);

}  // namespace flexarm
