#include "flexarm/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace flexarm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError((path.empty() ? std::string("<root>") : path) + ": " + msg);
}

// Object reader that remembers which keys were consumed.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  const json* get(const std::string& key) {
    const auto it = j_.find(key);
    if (it == j_.end()) return nullptr;
    used_.insert(key);
    return &*it;
  }
  const json& require(const std::string& key) {
    const json* v = get(key);
    if (!v) fail(at(key), "missing required key");
    return *v;
  }
  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  const std::string& path() const { return path_; }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!used_.count(item.key())) fail(at(item.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

double num(const json& v, const std::string& p) {
  if (!v.is_number()) fail(p, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(p, "must be finite");
  return d;
}

long long integer(const json& v, const std::string& p) {
  if (!v.is_number_integer()) fail(p, "expected an integer");
  return v.get<long long>();
}

std::string str(const json& v, const std::string& p) {
  if (!v.is_string()) fail(p, "expected a string");
  return v.get<std::string>();
}

template <int N>
Eigen::Matrix<double, N, 1> vec(const json& v, const std::string& p,
                                bool allow_scalar) {
  if (allow_scalar && v.is_number()) {
    return Eigen::Matrix<double, N, 1>::Constant(num(v, p));
  }
  if (!v.is_array() || v.size() != static_cast<std::size_t>(N)) {
    fail(p, "expected an array of " + std::to_string(N) + " numbers");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    out[i] = num(v[static_cast<std::size_t>(i)],
                 p + "[" + std::to_string(i) + "]");
  }
  return out;
}

void field(Obj& o, const std::string& k, double& out) {
  if (const json* v = o.get(k)) out = num(*v, o.at(k));
}
void field(Obj& o, const std::string& k, int& out) {
  if (const json* v = o.get(k)) {
    const long long x = integer(*v, o.at(k));
    if (x < -1000000000LL || x > 1000000000LL) fail(o.at(k), "out of range");
    out = static_cast<int>(x);
  }
}
void field(Obj& o, const std::string& k, bool& out) {
  if (const json* v = o.get(k)) {
    if (!v->is_boolean()) fail(o.at(k), "expected true or false");
    out = v->get<bool>();
  }
}
void field(Obj& o, const std::string& k, std::string& out) {
  if (const json* v = o.get(k)) out = str(*v, o.at(k));
}
void field(Obj& o, const std::string& k, Vec3& out) {
  if (const json* v = o.get(k)) out = vec<3>(*v, o.at(k), false);
}
void field(Obj& o, const std::string& k, Vec6& out) {
  if (const json* v = o.get(k)) out = vec<6>(*v, o.at(k), false);
}
// Nine-joint vectors accept a scalar broadcast to every joint.
void field(Obj& o, const std::string& k, Vec9& out) {
  if (const json* v = o.get(k)) out = vec<9>(*v, o.at(k), true);
}

template <class F>
void validated(const std::string& path, F&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    fail(path, e.what());
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
}

Joint joint_at(const json& v, const std::string& p) {
  const std::string s = str(v, p);
  try {
    return joint_from_name(s);
  } catch (const ConfigError&) {
    fail(p, "unknown joint '" + s + "'");
  }
}

Binding binding_key(const std::string& key, const std::string& p) {
  try {
    return binding_from_name(key);
  } catch (const std::exception&) {
    fail(p, "unknown binding (expected UA, FA, or HA)");
  }
}

// Object keyed by binding name; calls f(binding, value, path) per entry.
template <class F>
void per_binding(Obj& o, const std::string& k, F&& f) {
  const json* v = o.get(k);
  if (!v) return;
  const std::string p = o.at(k);
  if (!v->is_object()) fail(p, "expected an object keyed by UA, FA, HA");
  for (const auto& item : v->items()) {
    const std::string ip = p + "." + item.key();
    f(binding_key(item.key(), ip), item.value(), ip);
  }
}

void parse_exo(Obj o, ChainModel& exo) {
  double ua = exo.upper_arm_length();
  double fa = exo.forearm_length();
  const bool lengths = o.get("upper_arm") || o.get("forearm");
  field(o, "upper_arm", ua);
  field(o, "forearm", fa);
  if (lengths) {
    validated(o.path(), [&] {
      if (!(ua > 0.0) || !(fa > 0.0)) {
        throw ConfigError("segment lengths must be positive");
      }
      exo = exo.with_segment_lengths(ua, fa);
    });
  }
  Vec9 lower, upper;
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    lower[static_cast<Eigen::Index>(i)] = exo.joints[i].lower;
    upper[static_cast<Eigen::Index>(i)] = exo.joints[i].upper;
  }
  field(o, "lower", lower);
  field(o, "upper", upper);
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    exo.joints[i].lower = lower[static_cast<Eigen::Index>(i)];
    exo.joints[i].upper = upper[static_cast<Eigen::Index>(i)];
  }
  o.finish();
  validated(o.path(), [&] { exo.validate(); });
}

void parse_inertials(Obj o, InertialModel& m) {
  double scale = 1.0;
  field(o, "mass_scale", scale);
  if (const json* links = o.get("links")) {
    const std::string p = o.at("links");
    if (!links->is_array() || links->size() != kNumJoints) {
      fail(p, "expected an array of 9 link objects");
    }
    for (std::size_t i = 0; i < kNumJoints; ++i) {
      Obj l((*links)[i], p + "[" + std::to_string(i) + "]");
      auto& link = m.links[i];
      field(l, "mass", link.mass);
      field(l, "com", link.com);
      if (const json* in = l.get("inertia")) {
        const std::string ip = l.at("inertia");
        if (in->is_array() && in->size() == 3) {
          link.inertia = vec<3>(*in, ip, false).asDiagonal();
        } else if (in->is_array() && in->size() == 9) {
          const Vec9 v = vec<9>(*in, ip, false);
          link.inertia = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(v.data());
        } else {
          fail(ip, "expected 3 diagonal or 9 row-major entries");
        }
      }
      l.finish();
    }
  }
  field(o, "gravity", m.gravity);
  field(o, "armature", m.armature);
  o.finish();
  validated(o.path(), [&] {
    if (!(scale > 0.0)) throw ConfigError("mass_scale must be positive");
    m = m.scaled(scale);
    m.validate();
  });
}

void parse_friction(Obj o, FrictionParams& f) {
  field(o, "f_c", f.f_c);
  field(o, "f_s", f.f_s);
  field(o, "v_s", f.v_s);
  field(o, "a", f.a);
  field(o, "sign_blend", f.sign_blend);
  o.finish();
  validated(o.path(), [&] { f.validate(); });
}

void parse_bas(Obj o, BASConfig& b) {
  per_binding(o, "f_max", [&](Binding bd, const json& v, const std::string& p) {
    const Vec2 x = vec<2>(v, p, false);
    b.f_max[static_cast<std::size_t>(index(bd))] = {x[0], x[1]};
  });
  per_binding(o, "span_first",
              [&](Binding bd, const json& v, const std::string& p) {
                b.span_first[static_cast<std::size_t>(index(bd))] = joint_at(v, p);
              });
  o.finish();
  validated(o.path(), [&] { b.validate(); });
}

void parse_fcm(Obj o, FCMConfig& c) {
  per_binding(o, "thresholds",
              [&](Binding bd, const json& v, const std::string& p) {
                c.thresholds[static_cast<std::size_t>(index(bd))] = vec<6>(v, p, false);
              });
  per_binding(o, "normalizers",
              [&](Binding bd, const json& v, const std::string& p) {
                c.normalizers[static_cast<std::size_t>(index(bd))] = num(v, p);
              });
  field(o, "lambda_e", c.lambda_e);
  field(o, "lambda_w", c.lambda_w);
  field(o, "hysteresis", c.hysteresis);
  if (const json* v = o.get("shoulder_first")) c.shoulder_first = joint_at(*v, o.at("shoulder_first"));
  if (const json* v = o.get("elbow_first")) c.elbow_first = joint_at(*v, o.at("elbow_first"));
  if (const json* v = o.get("wrist_first")) c.wrist_first = joint_at(*v, o.at("wrist_first"));
  o.finish();
  validated(o.path(), [&] { c.validate(); });
}

void parse_controller(Obj o, ControllerConfig& c, const ChainModel& exo) {
  field(o, "dt", c.dt);
  field(o, "filter_cutoff", c.filter_cutoff);
  field(o, "rc_attenuation", c.rc_attenuation);
  field(o, "inertia_gain", c.inertia_gain);
  field(o, "torque_limits", c.torque_limits);
  if (const json* v = o.get("bas")) parse_bas(Obj(*v, o.at("bas")), c.bas);
  if (const json* v = o.get("fcm")) parse_fcm(Obj(*v, o.at("fcm")), c.fcm);
  o.finish();
  validated(o.path(), [&] { c.validate_for(exo); });
}

Eigen::Isometry3d parse_mount(Obj o) {
  Vec3 t = Vec3::Zero();
  Vec3 rpy = Vec3::Zero();
  field(o, "translation", t);
  field(o, "rpy", rpy);
  o.finish();
  Eigen::Isometry3d m = Eigen::Isometry3d::Identity();
  m.linear() = (Eigen::AngleAxisd(rpy[2], Vec3::UnitZ()) *
                Eigen::AngleAxisd(rpy[1], Vec3::UnitY()) *
                Eigen::AngleAxisd(rpy[0], Vec3::UnitX()))
                   .toRotationMatrix();
  m.translation() = t;
  return m;
}

void parse_binding(Obj o, BindingInterface& b) {
  field(o, "stiffness", b.stiffness);
  field(o, "damping", b.damping);
  if (const json* v = o.get("mount")) b.mount = parse_mount(Obj(*v, o.at("mount")));
  field(o, "noise_force", b.noise_force);
  field(o, "noise_torque", b.noise_torque);
  field(o, "range_force", b.range_force);
  field(o, "range_torque", b.range_torque);
  field(o, "force_cap", b.force_cap);
  o.finish();
  validated(o.path(), [&] { b.validate(); });
}

void parse_human(Obj o, HumanSpec& h) {
  field(o, "upper_arm", h.upper_arm);
  field(o, "forearm", h.forearm);
  field(o, "shoulder_offset", h.shoulder_offset);
  o.finish();
  validated(o.path(), [&] { h.validate(); });
}

void parse_joint_intent(Obj& o, JointIntent& ji) {
  const json& joints = o.require("joints");
  const std::string jp = o.at("joints");
  if (!joints.is_array()) fail(jp, "expected an array of joint names");
  ji.joints.clear();
  for (std::size_t i = 0; i < joints.size(); ++i) {
    ji.joints.push_back(index(joint_at(joints[i], jp + "[" + std::to_string(i) + "]")));
  }
  ji.signs.assign(ji.joints.size(), 1.0);
  if (const json* s = o.get("signs")) {
    const std::string sp = o.at("signs");
    if (!s->is_array()) fail(sp, "expected an array of numbers");
    ji.signs.clear();
    for (std::size_t i = 0; i < s->size(); ++i) {
      ji.signs.push_back(num((*s)[i], sp + "[" + std::to_string(i) + "]"));
    }
  }
  field(o, "amplitude", ji.amplitude);
  field(o, "speed", ji.speed);
  field(o, "cycles", ji.cycles);
  field(o, "start", ji.start);
}

void parse_target_intent(Obj& o, TargetIntent& ti) {
  const json& w = o.require("waypoints");
  const std::string wp = o.at("waypoints");
  if (!w.is_array()) fail(wp, "expected an array of [x, y, z] points");
  ti.waypoints.clear();
  for (std::size_t i = 0; i < w.size(); ++i) {
    ti.waypoints.push_back(vec<3>(w[i], wp + "[" + std::to_string(i) + "]", false));
  }
  field(o, "corner_radius", ti.corner_radius);
  field(o, "duration", ti.duration);
  field(o, "start", ti.start);
  field(o, "repeats", ti.repeats);
  if (const json* v = o.get("timing")) {
    const std::string s = str(*v, o.at("timing"));
    if (s == "global") {
      ti.timing = PathTiming::kGlobal;
    } else if (s == "per-segment") {
      ti.timing = PathTiming::kPerSegment;
    } else {
      fail(o.at("timing"), "expected 'global' or 'per-segment'");
    }
  }
}

void parse_intent(Obj o, IntentSpec& in) {
  const std::string kind = str(o.require("kind"), o.at("kind"));
  if (kind == "none") {
    in.kind = IntentSpec::Kind::kNone;
  } else if (kind == "joint") {
    in.kind = IntentSpec::Kind::kJoint;
    parse_joint_intent(o, in.joint);
  } else if (kind == "target") {
    in.kind = IntentSpec::Kind::kTarget;
    parse_target_intent(o, in.target);
  } else {
    fail(o.at("kind"), "expected 'none', 'joint', or 'target'");
  }
  o.finish();
  validated(o.path(), [&] {
    if (in.kind == IntentSpec::Kind::kJoint) in.joint.validate();
    if (in.kind == IntentSpec::Kind::kTarget) in.target.validate();
  });
}

std::vector<double> number_list(const json& v, const std::string& p) {
  if (!v.is_array() || v.empty()) fail(p, "expected a nonempty array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(num(v[i], p + "[" + std::to_string(i) + "]"));
  }
  return out;
}

SweepSpec parse_sweep(Obj o) {
  SweepSpec s;
  if (const json* v = o.get("movements")) {
    const std::string p = o.at("movements");
    if (!v->is_array() || v->empty()) fail(p, "expected a nonempty array");
    const auto known = default_movements();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string ip = p + "[" + std::to_string(i) + "]";
      const std::string name = str((*v)[i], ip);
      try {
        find_movement(known, name);
      } catch (const DomainError&) {
        fail(ip, "unknown movement '" + name + "'");
      }
      s.movements.push_back(name);
    }
  }
  if (const json* v = o.get("speeds")) s.speeds = number_list(*v, o.at("speeds"));
  field(o, "amplitude", s.amplitude);
  field(o, "cycles", s.cycles);
  field(o, "start", s.start);
  field(o, "tail", s.tail);
  o.finish();
  return s;
}

std::vector<ControllerMode> parse_modes(const json& v, const std::string& p) {
  if (v.is_string() && v.get<std::string>() == "all") {
    return {kAllModes.begin(), kAllModes.end()};
  }
  if (!v.is_array() || v.empty()) fail(p, "expected \"all\" or an array of modes");
  std::vector<ControllerMode> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ip = p + "[" + std::to_string(i) + "]";
    const std::string s = str(v[i], ip);
    try {
      out.push_back(mode_from_name(s));
    } catch (const std::exception&) {
      fail(ip, "unknown mode '" + s + "'");
    }
  }
  return out;
}

}  // namespace

Joint joint_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kNumJoints; ++i) {
    if (kJointLabels[i] == s) return static_cast<Joint>(i);
  }
  throw ConfigError("unknown joint " + std::string(s));
}

Channel channel_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kChannelLabels.size(); ++i) {
    if (kChannelLabels[i] == s) return static_cast<Channel>(i);
  }
  throw ConfigError("unknown channel " + std::string(s));
}

ScenarioFile parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("<document>: ") + e.what());
  }
  Obj root(j, "");
  const json& schema = root.require("schema");
  if (integer(schema, "schema") != kScenarioSchema) {
    fail("schema", "unsupported version (expected 1)");
  }
  ScenarioFile out;
  SimulationConfig& s = out.sim;
  field(root, "name", s.name);
  if (const json* v = root.get("seed")) {
    const long long seed = integer(*v, "seed");
    if (seed < 0) fail("seed", "must be non-negative");
    s.seed = static_cast<std::uint64_t>(seed);
  }
  field(root, "duration", s.duration);
  field(root, "substeps", s.substeps);
  field(root, "sensor_noise", s.sensor_noise);
  field(root, "q0", s.q0);
  field(root, "output_dir", out.output_dir);
  if (const json* v = root.get("modes")) out.modes = parse_modes(*v, "modes");

  if (const json* v = root.get("exo")) parse_exo(Obj(*v, "exo"), s.exo);
  s.inertials = InertialModel::default_for(s.exo);
  if (const json* v = root.get("inertials")) parse_inertials(Obj(*v, "inertials"), s.inertials);
  if (const json* v = root.get("friction")) parse_friction(Obj(*v, "friction"), s.friction);
  if (const json* v = root.get("plant")) {
    Obj p(*v, "plant");
    field(p, "mass_factor", s.plant_mass_factor);
    field(p, "friction_factor", s.plant_friction_factor);
    p.finish();
  }
  if (const json* v = root.get("controller")) {
    parse_controller(Obj(*v, "controller"), s.controller, s.exo);
  }
  per_binding(root, "bindings", [&](Binding b, const json& v, const std::string& p) {
    parse_binding(Obj(v, p), s.bindings[static_cast<std::size_t>(index(b))]);
  });
  if (const json* v = root.get("human")) parse_human(Obj(*v, "human"), s.human);
  if (const json* v = root.get("intent")) parse_intent(Obj(*v, "intent"), s.intent);
  if (const json* v = root.get("sweep")) out.sweep = parse_sweep(Obj(*v, "sweep"));
  root.finish();
  validated("", [&] { s.validate(); });
  if (out.sweep) validated("sweep", [&] { make_sweep(out).validate(); });
  return out;
}

ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

SweepConfig make_sweep(const ScenarioFile& file) {
  SweepConfig sc;
  sc.base = file.sim;
  sc.modes = file.modes;
  if (!file.sweep) return sc;
  const SweepSpec& s = *file.sweep;
  if (!s.movements.empty()) {
    const auto known = default_movements();
    sc.movements.clear();
    for (const auto& name : s.movements) {
      sc.movements.push_back(find_movement(known, name));
    }
  }
  sc.speeds = s.speeds;
  sc.amplitude = s.amplitude;
  sc.cycles = s.cycles;
  sc.start = s.start;
  sc.tail = s.tail;
  return sc;
}

}  // namespace flexarm
