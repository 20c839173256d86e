#include "mdvo/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace mdvo {

using nlohmann::json;

namespace {

const char* axis_key(int axis) { return axis == 0 ? "x" : axis == 1 ? "y" : "z"; }

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json trajectory_to_json(const TrajectorySpec& t) {
  json j;
  j["family"] = t.family;
  if (t.family == "polynomial") {
    json c = json::object();
    for (int a = 0; a < 3; ++a) c[axis_key(a)] = t.poly[a];
    j["coefficients"] = c;
    return j;
  }
  j["offset"] = vec_to_json(t.offset);
  if (t.family == "sinusoid") {
    json terms = json::object();
    for (int a = 0; a < 3; ++a) {
      json list = json::array();
      for (const auto& term : t.terms[a])
        list.push_back({{"amplitude", term.amplitude}, {"omega", term.omega}, {"phase", term.phase}});
      terms[axis_key(a)] = list;
    }
    j["terms"] = terms;
  }
  return j;
}

// Field-path aware accessors.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  void allow(std::initializer_list<const char*> keys) const {
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items())
      if (!ok.count(k)) throw ConfigError(child(k), "unknown key");
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!j_.contains(key)) throw ConfigError(child(key), "missing");
    return j_.at(key);
  }

  double number(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(child(key), "expected a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::uint64_t unsigned_int(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      throw ConfigError(child(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string string(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(child(key), "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(child(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const char* key) const {
    const auto& v = raw(key);
    if (!v.is_array()) throw ConfigError(child(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(child(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  Vec3 vec3(const char* key) const {
    const auto v = numbers(key);
    if (v.size() != 3) throw ConfigError(child(key), "expected 3 numbers");
    return Vec3(v[0], v[1], v[2]);
  }

  Reader object(const char* key) const { return Reader(raw(key), child(key)); }
  std::string child(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

TrajectorySpec trajectory_from_json(const Reader& r) {
  TrajectorySpec t;
  t.family = r.string("family");
  if (t.family == "constant") {
    r.allow({"family", "offset"});
    t.offset = r.vec3("offset");
  } else if (t.family == "sinusoid") {
    r.allow({"family", "offset", "terms"});
    t.offset = r.has("offset") ? r.vec3("offset") : Vec3::Zero();
    const Reader terms = r.object("terms");
    terms.allow({"x", "y", "z"});
    for (int a = 0; a < 3; ++a) {
      if (!terms.has(axis_key(a))) continue;
      const auto& list = terms.raw(axis_key(a));
      const std::string lpath = terms.child(axis_key(a));
      if (!list.is_array()) throw ConfigError(lpath, "expected an array of terms");
      for (std::size_t k = 0; k < list.size(); ++k) {
        const Reader term(list[k], lpath + "[" + std::to_string(k) + "]");
        term.allow({"amplitude", "omega", "phase"});
        t.terms[a].push_back({term.number("amplitude"), term.number("omega"), term.number("phase", 0.0)});
      }
    }
  } else if (t.family == "polynomial") {
    r.allow({"family", "coefficients"});
    const Reader c = r.object("coefficients");
    c.allow({"x", "y", "z"});
    for (int a = 0; a < 3; ++a)
      if (c.has(axis_key(a))) t.poly[a] = c.numbers(axis_key(a));
  } else {
    throw ConfigError(r.child("family"), "unknown trajectory family '" + t.family + "'");
  }
  return t;
}

}  // namespace

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  json agents = json::array();
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const auto& a = sc.agents[i];
    json ja;
    ja["id"] = i + 1;
    ja["role"] = to_string(a.role);
    if (a.role == Role::follower) {
      ja["initial_position"] = vec_to_json(a.initial_position);
      ja["offset"] = vec_to_json(a.offset);
    } else if (!sc.target) {
      ja["trajectory"] = trajectory_to_json(a.trajectory);
    }
    agents.push_back(ja);
  }
  j["agents"] = agents;
  json edges = json::array();
  for (const auto& [a, b] : sc.edges) edges.push_back({a, b});
  j["edges"] = edges;
  if (sc.target) j["target"] = trajectory_to_json(*sc.target);
  j["noise_stddev"] = sc.noise_stddev;
  j["seed"] = sc.seed;
  j["noise_hold_steps"] = sc.noise_hold_steps;

  json mdvo;
  mdvo["order"] = sc.mdvo.order;
  mdvo["t_c"] = sc.mdvo.t_c;
  mdvo["t_min"] = sc.mdvo.t_min;
  mdvo["n_max"] = sc.mdvo.n_max;
  mdvo["k"] = sc.mdvo.k;
  if (!sc.mdvo.bounds.empty()) mdvo["bounds"] = sc.mdvo.bounds;
  mdvo["mode"] = sc.mdvo.mode == ConsensusMode::modulated ? "modulated" : "edcho_raw";
  mdvo["direct_ratio_after_deadline"] = sc.mdvo.direct_ratio_after_deadline;
  j["mdvo"] = mdvo;

  json ctrl;
  if (!sc.rho.empty()) ctrl["rho"] = sc.rho;
  ctrl["pole"] = sc.pole;
  j["controller"] = ctrl;

  j["dt"] = sc.dt;
  j["t_max"] = sc.t_max;
  j["decimation"] = sc.decimation;
  return j;
}

Scenario scenario_from_json(const json& j) {
  const Reader r(j, "");
  r.allow({"name", "agents", "edges", "target", "noise_stddev", "seed", "noise_hold_steps", "mdvo", "controller", "dt", "t_max",
           "decimation"});
  Scenario sc;
  sc.name = r.has("name") ? r.string("name") : "custom";

  const auto& agents = r.raw("agents");
  if (!agents.is_array()) throw ConfigError("agents", "expected an array");
  const bool has_target = r.has("target");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const Reader a(agents[i], "agents[" + std::to_string(i) + "]");
    a.allow({"id", "role", "initial_position", "offset", "trajectory"});
    if (a.has("id") && a.unsigned_int("id") != i + 1)
      throw ConfigError(a.child("id"), "agents must be listed in order with id = position + 1");
    AgentSpec spec;
    try {
      spec.role = role_from_string(a.string("role"));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(a.child("role"), ex.what());
    }
    if (spec.role == Role::follower) {
      if (a.has("trajectory")) throw ConfigError(a.child("trajectory"), "followers have no trajectory");
      spec.initial_position = a.has("initial_position") ? a.vec3("initial_position") : Vec3::Zero();
      spec.offset = a.has("offset") ? a.vec3("offset") : Vec3::Zero();
    } else {
      if (a.has("offset")) throw ConfigError(a.child("offset"), "leaders have no formation offset");
      if (a.has("trajectory")) {
        spec.trajectory = trajectory_from_json(a.object("trajectory"));
      } else if (!has_target) {
        throw ConfigError(a.child("trajectory"), "missing (required for leaders without a shared target)");
      }
      if (a.has("initial_position")) spec.initial_position = a.vec3("initial_position");
    }
    sc.agents.push_back(spec);
  }

  const auto& edges = r.raw("edges");
  if (!edges.is_array()) throw ConfigError("edges", "expected an array of [i, j] pairs");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string path = "edges[" + std::to_string(e) + "]";
    const auto& pair = edges[e];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number_integer() ||
        pair[0].get<long long>() < 1 || pair[1].get<long long>() < 1)
      throw ConfigError(path, "expected a pair of 1-based agent ids");
    sc.edges.emplace_back(pair[0].get<std::size_t>(), pair[1].get<std::size_t>());
  }

  if (has_target) sc.target = trajectory_from_json(r.object("target"));
  sc.noise_stddev = r.number("noise_stddev", 0.0);
  if (r.has("seed")) sc.seed = r.unsigned_int("seed");
  if (r.has("noise_hold_steps")) sc.noise_hold_steps = r.unsigned_int("noise_hold_steps");

  const Reader m = r.object("mdvo");
  m.allow({"order", "t_c", "t_min", "n_max", "k", "bounds", "mode", "direct_ratio_after_deadline"});
  sc.mdvo.order = static_cast<int>(m.unsigned_int("order"));
  sc.mdvo.t_c = m.number("t_c");
  sc.mdvo.t_min = m.number("t_min", sc.mdvo.t_c);
  sc.mdvo.n_max = m.has("n_max") ? m.unsigned_int("n_max") : 1000;
  sc.mdvo.k = m.numbers("k");
  if (m.has("bounds")) sc.mdvo.bounds = m.numbers("bounds");
  if (m.has("mode")) {
    const auto mode = m.string("mode");
    if (mode == "modulated")
      sc.mdvo.mode = ConsensusMode::modulated;
    else if (mode == "edcho_raw")
      sc.mdvo.mode = ConsensusMode::edcho_raw;
    else
      throw ConfigError(m.child("mode"), "expected 'modulated' or 'edcho_raw'");
  }
  sc.mdvo.direct_ratio_after_deadline = m.boolean("direct_ratio_after_deadline", false);

  if (r.has("controller")) {
    const Reader c = r.object("controller");
    c.allow({"rho", "pole"});
    if (c.has("rho")) sc.rho = c.numbers("rho");
    sc.pole = c.number("pole", sc.pole);
  }

  sc.dt = r.number("dt", sc.dt);
  sc.t_max = r.number("t_max", sc.t_max);
  if (r.has("decimation")) sc.decimation = r.unsigned_int("decimation");
  validate(sc);
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& ex) {
    throw ConfigError("config", std::string("invalid JSON in '") + path.string() + "': " + ex.what());
  }
  if (j.is_object() && j.contains("resolved_scenario")) return scenario_from_json(j.at("resolved_scenario"));
  return scenario_from_json(j);
}

}  // namespace mdvo
