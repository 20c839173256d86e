#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdvo/graph.hpp"
#include "mdvo/observer.hpp"
#include "mdvo/signals.hpp"

namespace mdvo {

/// Raised for invalid scenario or run configuration; path names the field
/// (e.g. "agents[3].offset", "mdvo.t_c").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Declarative trajectory description, instantiated by make_signal().
struct TrajectorySpec {
  std::string family = "constant";  // constant | sinusoid | polynomial
  Vec3 offset = Vec3::Zero();       // position of constant, offset of sinusoid
  std::array<std::vector<SinusoidSignal::Term>, 3> terms;
  std::array<std::vector<double>, 3> poly;
};

std::shared_ptr<SignalSource> make_signal(const TrajectorySpec& spec, int max_order);

struct AgentSpec {
  Role role = Role::follower;
  Vec3 initial_position = Vec3::Zero();  // followers; derivatives start at 0
  Vec3 offset = Vec3::Zero();            // followers: formation displacement d_i
  TrajectorySpec trajectory;             // leaders without a shared target
};

/// Full experiment description. Agents are listed in index order; edges
/// use 1-based agent indices.
struct Scenario {
  std::string name = "custom";
  std::vector<AgentSpec> agents;
  std::vector<Graph::Edge> edges;

  // When set, every leader's signal is this target plus its own noise stream
  // instead of its own trajectory.
  std::optional<TrajectorySpec> target;
  double noise_stddev = 0.0;
  std::uint64_t seed = 1;
  // Each noise sample is held for this many integration steps.
  std::size_t noise_hold_steps = 1;

  MdvoConfig mdvo;          // empty bounds are derived from the leader motion
  std::vector<double> rho;  // empty: pole placement at `pole`
  double pole = -1.0;

  double dt = 1e-5;
  double t_max = 5.0;
  std::size_t decimation = 1000;

  std::size_t leader_count() const;
};

/// Throws ConfigError for any violated scenario invariant.
void validate(const Scenario& sc);

/// Copy with bounds and rho filled in; validates first.
Scenario resolve(const Scenario& sc);

/// Leader signals as used by the observer (noisy when a target is set).
/// Follower entries are ZeroSignal.
std::vector<std::shared_ptr<SignalSource>> make_agent_signals(const Scenario& sc);

/// Noise-free leader motion: the reference whose average is pbar.
std::vector<std::shared_ptr<const SignalSource>> make_reference_signals(const Scenario& sc);

/// 64-bit seed for leader `agent`'s noise stream.
std::uint64_t derive_seed(std::uint64_t scenario_seed, std::size_t agent);

/// Three shepherds sweeping a planar path, five sheep in a circular formation.
Scenario scenario_herding();
/// Three noisy detectors of a moving target, five followers in formation.
Scenario scenario_target(double noise_stddev = 1.0, std::uint64_t seed = 1);

std::vector<std::string> builtin_scenario_names();
/// Throws ConfigError("scenario", ...) for unknown names.
Scenario builtin_scenario(const std::string& name);

}  // namespace mdvo
