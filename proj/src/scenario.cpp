#include "mdvo/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mdvo/controller.hpp"

namespace mdvo {

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

bool finite(const Vec3& v) { return v.allFinite(); }

// Herding defaults shared with the target scenario.
constexpr double kFormationRadius = 1.5;

std::vector<AgentSpec> herding_followers() {
  const std::array<Vec3, 5> start = {Vec3(-2.0, 0.0, 0.0), Vec3(-1.0, -1.0, 0.0), Vec3(0.0, 0.5, 0.0),
                                     Vec3(1.0, -1.0, 0.0), Vec3(2.0, 0.0, 0.0)};
  std::vector<AgentSpec> out;
  for (std::size_t k = 0; k < start.size(); ++k) {
    AgentSpec a;
    a.role = Role::follower;
    a.initial_position = start[k];
    const double angle = 0.5 * std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / 5.0;
    a.offset = Vec3(kFormationRadius * std::cos(angle), kFormationRadius * std::sin(angle), 0.0);
    out.push_back(a);
  }
  return out;
}

// One interpretation of the pictured topology: leaders 1-3 in a chain, the
// followers in a ring 4-5-6-7-8-4, leaders 1..3 attached to followers 4..6.
std::vector<Graph::Edge> herding_edges() {
  return {{1, 2}, {2, 3}, {1, 4}, {2, 5}, {3, 6}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 4}};
}

MdvoConfig default_mdvo_config() {
  MdvoConfig cfg;
  cfg.order = 3;
  cfg.t_c = 0.5;
  cfg.t_min = 0.5;
  cfg.n_max = 1000;
  cfg.k = {7.5, 19.25, 17.75, 7.0};
  return cfg;
}

}  // namespace

std::shared_ptr<SignalSource> make_signal(const TrajectorySpec& spec, int max_order) {
  if (spec.family == "constant") return std::make_shared<ConstantSignal>(spec.offset, max_order);
  if (spec.family == "sinusoid") return std::make_shared<SinusoidSignal>(spec.offset, spec.terms, max_order);
  if (spec.family == "polynomial") return std::make_shared<PolynomialSignal>(spec.poly, max_order);
  throw std::invalid_argument("unknown trajectory family '" + spec.family + "'");
}

std::size_t Scenario::leader_count() const {
  return static_cast<std::size_t>(
      std::count_if(agents.begin(), agents.end(), [](const AgentSpec& a) { return a.role == Role::leader; }));
}

void validate(const Scenario& sc) {
  if (sc.agents.empty()) throw ConfigError("agents", "at least one agent required");
  if (sc.leader_count() == 0) throw ConfigError("agents", "at least one leader required");
  const std::size_t n = sc.agents.size();
  for (std::size_t e = 0; e < sc.edges.size(); ++e) {
    const auto [a, b] = sc.edges[e];
    if (a < 1 || b < 1 || a > n || b > n) throw ConfigError(at("edges", e), "endpoint outside 1.." + std::to_string(n));
    if (a == b) throw ConfigError(at("edges", e), "self-loop");
  }
  const Graph g = Graph::from_one_based_edges(n, sc.edges);
  if (!is_connected(g)) throw ConfigError("edges", "communication graph is not connected");

  const int m = sc.mdvo.order;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = sc.agents[i];
    if (!finite(a.initial_position)) throw ConfigError(at("agents", i) + ".initial_position", "not finite");
    if (!finite(a.offset)) throw ConfigError(at("agents", i) + ".offset", "not finite");
    if (a.role == Role::leader && !sc.target) {
      try {
        make_signal(a.trajectory, m + 1);
      } catch (const std::exception& ex) {
        throw ConfigError(at("agents", i) + ".trajectory", ex.what());
      }
    }
  }
  if (sc.target) {
    try {
      make_signal(*sc.target, m + 1);
    } catch (const std::exception& ex) {
      throw ConfigError("target", ex.what());
    }
  }
  if (!(sc.noise_stddev >= 0.0)) throw ConfigError("noise_stddev", "must be >= 0");
  if (sc.noise_hold_steps < 1) throw ConfigError("noise_hold_steps", "must be >= 1");
  if (sc.noise_stddev > 0.0 && !sc.target) throw ConfigError("noise_stddev", "noise requires a shared target");

  if (m < 1 || m > ModulatingFunction::kMaxOrder) throw ConfigError("mdvo.order", "outside [1, 10]");
  if (!(sc.mdvo.t_min > 0.0)) throw ConfigError("mdvo.t_min", "must be positive");
  if (!(sc.mdvo.t_c >= sc.mdvo.t_min)) throw ConfigError("mdvo.t_c", "must be >= t_min");
  if (sc.mdvo.n_max < n) throw ConfigError("mdvo.n_max", "below the agent count " + std::to_string(n));
  if (sc.mdvo.k.size() != static_cast<std::size_t>(m) + 1)
    throw ConfigError("mdvo.k", "expected " + std::to_string(m + 1) + " gains");
  for (std::size_t i = 0; i < sc.mdvo.k.size(); ++i)
    if (!(sc.mdvo.k[i] > 0.0)) throw ConfigError(at("mdvo.k", i), "must be positive");
  if (!sc.mdvo.bounds.empty()) {
    if (sc.mdvo.bounds.size() != static_cast<std::size_t>(m) + 2)
      throw ConfigError("mdvo.bounds", "expected " + std::to_string(m + 2) + " values");
    for (std::size_t i = 0; i < sc.mdvo.bounds.size(); ++i)
      if (!(sc.mdvo.bounds[i] >= 0.0)) throw ConfigError(at("mdvo.bounds", i), "must be >= 0");
    if (std::all_of(sc.mdvo.bounds.begin(), sc.mdvo.bounds.end(), [](double b) { return b == 0.0; }) &&
        sc.mdvo.mode == ConsensusMode::modulated)
      throw ConfigError("mdvo.bounds", "all zero gives theta = 0");
  }

  if (!sc.rho.empty()) {
    if (sc.rho.size() != static_cast<std::size_t>(m)) throw ConfigError("controller.rho", "expected " + std::to_string(m) + " gains");
    try {
      ControllerGains gains(sc.rho);
    } catch (const std::exception& ex) {
      throw ConfigError("controller.rho", ex.what());
    }
  } else if (!(sc.pole < 0.0)) {
    throw ConfigError("controller.pole", "must be negative");
  }

  if (!(sc.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(sc.t_max > sc.mdvo.t_c)) throw ConfigError("t_max", "must exceed mdvo.t_c");
  if (sc.decimation < 1) throw ConfigError("decimation", "must be >= 1");
}

Scenario resolve(const Scenario& sc) {
  validate(sc);
  Scenario out = sc;
  const int m = sc.mdvo.order;
  if (out.mdvo.bounds.empty()) {
    std::vector<double> bounds(m + 2, 0.0);
    for (const auto& ref : make_reference_signals(sc)) {
      if (!ref) continue;
      const auto b = ref->derivative_bounds(m, sc.t_max);
      for (int nu = 0; nu <= m + 1; ++nu) bounds[nu] = std::max(bounds[nu], b[nu]);
    }
    out.mdvo.bounds = bounds;
    if (out.mdvo.mode == ConsensusMode::modulated && std::all_of(bounds.begin(), bounds.end(), [](double b) { return b == 0.0; }))
      throw ConfigError("mdvo.bounds", "derived bounds are all zero (static leaders at the origin)");
  }
  if (out.rho.empty()) {
    const auto gains = pole_placement(m, sc.pole);
    out.rho.assign(gains.rho().begin(), gains.rho().end());
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t scenario_seed, std::size_t agent) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = scenario_seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(agent) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::shared_ptr<SignalSource>> make_agent_signals(const Scenario& sc) {
  const int max_order = sc.mdvo.order + 1;
  std::shared_ptr<const SignalSource> target;
  if (sc.target) target = make_signal(*sc.target, max_order);
  std::vector<std::shared_ptr<SignalSource>> out;
  for (std::size_t i = 0; i < sc.agents.size(); ++i) {
    const auto& a = sc.agents[i];
    if (a.role == Role::follower)
      out.push_back(std::make_shared<ZeroSignal>(max_order));
    else if (target)
      out.push_back(std::make_shared<NoisySignal>(target, sc.noise_stddev, derive_seed(sc.seed, i)));
    else
      out.push_back(make_signal(a.trajectory, max_order));
  }
  return out;
}

std::vector<std::shared_ptr<const SignalSource>> make_reference_signals(const Scenario& sc) {
  const int max_order = sc.mdvo.order + 1;
  std::shared_ptr<const SignalSource> target;
  if (sc.target) target = make_signal(*sc.target, max_order);
  std::vector<std::shared_ptr<const SignalSource>> out;
  for (const auto& a : sc.agents) {
    if (a.role == Role::follower)
      out.push_back(nullptr);
    else if (target)
      out.push_back(target);
    else
      out.push_back(make_signal(a.trajectory, max_order));
  }
  return out;
}

Scenario scenario_herding() {
  Scenario sc;
  sc.name = "herding";
  const std::array<Vec3, 3> leader_offsets = {Vec3(-1.0, 2.0, 0.0), Vec3(1.0, 2.0, 0.0), Vec3(0.0, 3.5, 0.0)};
  for (const auto& off : leader_offsets) {
    AgentSpec a;
    a.role = Role::leader;
    a.initial_position = off;
    a.trajectory.family = "sinusoid";
    a.trajectory.offset = off;
    a.trajectory.terms[0] = {{2.0, 0.5, 0.0}};
    a.trajectory.terms[1] = {{0.5, 0.5, 0.0}};
    sc.agents.push_back(a);
  }
  for (auto& f : herding_followers()) sc.agents.push_back(f);
  sc.edges = herding_edges();
  sc.mdvo = default_mdvo_config();
  sc.pole = -40.0;
  sc.dt = 1e-5;
  sc.t_max = 5.0;
  sc.decimation = 1000;
  sc.seed = 1;
  return sc;
}

Scenario scenario_target(double noise_stddev, std::uint64_t seed) {
  Scenario sc;
  sc.name = "target";
  for (int k = 0; k < 3; ++k) {
    AgentSpec a;
    a.role = Role::leader;
    sc.agents.push_back(a);
  }
  for (auto& f : herding_followers()) sc.agents.push_back(f);
  sc.edges = herding_edges();
  TrajectorySpec target;
  target.family = "sinusoid";
  target.offset = Vec3(0.0, 2.0, 0.0);
  target.terms[0] = {{3.0, 0.5, 0.0}};
  target.terms[1] = {{1.0, 0.3, 0.5}};
  sc.target = target;
  sc.noise_stddev = noise_stddev;
  sc.seed = seed;
  sc.mdvo = default_mdvo_config();
  sc.pole = -40.0;
  sc.dt = 1e-5;
  sc.t_max = 10.0;
  sc.decimation = 1000;
  return sc;
}

std::vector<std::string> builtin_scenario_names() { return {"herding", "target"}; }

Scenario builtin_scenario(const std::string& name) {
  if (name == "herding") return scenario_herding();
  if (name == "target") return scenario_target();
  throw ConfigError("scenario", "unknown built-in scenario '" + name + "'");
}

}  // namespace mdvo
