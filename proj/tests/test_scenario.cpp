#include "flexarm/scenario.hpp"

#include <gtest/gtest.h>

#include <string>

namespace flexarm {
namespace {

std::string error_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

TEST(Scenario, MinimalDocument) {
  const ScenarioFile f = parse_scenario(R"({"schema": 1})");
  EXPECT_EQ(f.modes.size(), 4u);
  EXPECT_FALSE(f.sweep.has_value());
  EXPECT_EQ(f.sim.intent.kind, IntentSpec::Kind::kNone);
}

TEST(Scenario, FieldsApplied) {
  const ScenarioFile f = parse_scenario(R"({
    "schema": 1, "name": "x", "seed": 7, "duration": 2.5, "substeps": 4,
    "q0": 0.1, "modes": ["ff", "bas-fcm"],
    "controller": {"inertia_gain": 0.25, "fcm": {"lambda_e": 3.0}, "bas": {"f_max": {"FA": [20, 25]}}},
    "bindings": {"HA": {"mount": {"translation": [0.01, 0, 0], "rpy": [0, 0, 0.1]}, "force_cap": 30}},
    "human": {"upper_arm": 0.3},
    "intent": {"kind": "joint", "joints": ["EL2"], "signs": [-1], "speed": 2.0}
  })");
  EXPECT_EQ(f.sim.name, "x");
  EXPECT_EQ(f.sim.seed, 7u);
  EXPECT_EQ(f.sim.duration, 2.5);
  EXPECT_EQ(f.sim.substeps, 4);
  EXPECT_EQ(f.sim.q0, Vec9::Constant(0.1));
  ASSERT_EQ(f.modes.size(), 2u);
  EXPECT_EQ(f.modes[1], ControllerMode::BAS_FCM);
  EXPECT_EQ(f.sim.controller.inertia_gain, 0.25);
  EXPECT_EQ(f.sim.controller.fcm.lambda_e, 3.0);
  EXPECT_EQ(f.sim.controller.bas.f_max[1][1], 25.0);
  const auto& mount = f.sim.bindings[2].mount;
  EXPECT_NEAR(mount.translation().x(), 0.01, 1e-15);
  EXPECT_NEAR(Eigen::AngleAxisd(mount.linear()).angle(), 0.1, 1e-12);
  EXPECT_EQ(f.sim.bindings[2].force_cap, 30.0);
  EXPECT_EQ(f.sim.human.upper_arm, 0.3);
  EXPECT_EQ(f.sim.intent.kind, IntentSpec::Kind::kJoint);
  EXPECT_EQ(f.sim.intent.joint.joints, std::vector<int>{5});
  EXPECT_EQ(f.sim.intent.joint.signs, std::vector<double>{-1.0});
}

TEST(Scenario, ErrorsNameTheKeyPath) {
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 1, "bogus": 1})"), "bogus"));
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 1, "controller": {"dtt": 1}})"),
                          "controller.dtt"));
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 1, "duration": "long"})"), "duration"));
  EXPECT_TRUE(starts_with(
      error_of(R"({"schema": 1, "bindings": {"FA": {"stiffness": [1, 2, 3, 4, 5]}}})"),
      "bindings.FA.stiffness"));
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 1, "seed": -1})"), "seed"));
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 1, "modes": ["pid"]})"), "modes"));
  EXPECT_TRUE(starts_with(
      error_of(R"({"schema": 1, "intent": {"kind": "joint", "joints": ["XX"]}})"),
      "intent.joints"));
}

TEST(Scenario, SchemaRequired) {
  EXPECT_TRUE(starts_with(error_of("{}"), "schema"));
  EXPECT_TRUE(starts_with(error_of(R"({"schema": 2})"), "schema"));
  EXPECT_FALSE(error_of("[1, 2]").empty());
  EXPECT_FALSE(error_of("{not json").empty());
}

TEST(Scenario, SweepBlock) {
  const ScenarioFile f = parse_scenario(R"({
    "schema": 1, "modes": ["ff", "bas"],
    "sweep": {"movements": ["El.Fl/Ex"], "speeds": [1.0, 2.0], "cycles": 2}
  })");
  ASSERT_TRUE(f.sweep.has_value());
  const SweepConfig s = make_sweep(f);
  ASSERT_EQ(s.movements.size(), 1u);
  EXPECT_EQ(s.movements[0].name, "El.Fl/Ex");
  EXPECT_EQ(s.speeds, (std::vector<double>{1.0, 2.0}));
  EXPECT_EQ(s.cycles, 2);
  EXPECT_EQ(s.modes.size(), 2u);
}

TEST(Scenario, ParsedScenarioRuns) {
  ScenarioFile f = parse_scenario(R"({"schema": 1, "duration": 0.25,
    "q0": [0, 0, 0.5, 0.05, 0, 1.0, 0, 0, 0]})");
  const Trace t = run_scenario(f.sim, f.modes[0]);
  EXPECT_EQ(t.rows.size(), 20u);
}

TEST(Scenario, Names) {
  EXPECT_EQ(joint_from_name("WR3"), Joint::WR3);
  EXPECT_EQ(channel_from_name("Tz"), Channel::Tz);
  EXPECT_THROW(joint_from_name("EL3"), ConfigError);
}

}  // namespace
}  // namespace flexarm
