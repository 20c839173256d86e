#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "mdvo/consensus.hpp"
#include "mdvo/graph.hpp"
#include "mdvo/modfunc.hpp"
#include "mdvo/signals.hpp"

namespace mdvo {

struct MdvoConfig {
  int order = 3;
  double t_c = 0.5;
  double t_min = 0.5;
  std::size_t n_max = 1000;
  std::vector<double> bounds;  // L_0..L_{m+1} of the leader motion
  std::vector<double> k;       // k_0..k_m shared by all four blocks
  ConsensusMode mode = ConsensusMode::modulated;
  // Divide by l_{i,0} directly once t >= T_c, for deployments without N_max.
  bool direct_ratio_after_deadline = false;
  KernelKind kernel = KernelKind::parallel;

  /// Throws std::invalid_argument naming the offending field.
  void validate(std::size_t n_agents) const;
};

/// Per-robot observer output at one instant.
struct MdvoEstimate {
  std::vector<Vec3> p_hat;  // estimates of pbar^(0..m)
  double l_hat = 0.0;       // l_{i,0}
  std::vector<Vec3> raw_y;  // y_{i,0..m} of the position blocks

  int order() const { return static_cast<int>(p_hat.size()) - 1; }
};

enum class Channel : std::size_t { x = 0, y = 1, z = 2, label = 3 };

/// Four consensus blocks (X, Y, Z positions and leader label) configured
/// from one MdvoConfig. Position blocks get theta from the bounds; the label
/// block gets the static-label theta. In edcho_raw mode every theta is 1.
std::vector<ConsensusBlock> configure_blocks(const MdvoConfig& cfg, std::shared_ptr<const Graph> graph,
                                             const ModulatingFunction& kappa);

/// Signal derivatives s_i^(0..m)(t) per agent; follower rows are ignored.
using SignalTable = std::vector<std::vector<Vec3>>;

/// Distributed observer of the leaders' geometric center.
class Observer {
 public:
  Observer(std::shared_ptr<const Graph> graph, std::vector<Role> roles, MdvoConfig cfg);

  /// Sets every block's outputs for time t from the agents' signals.
  void observe(double t, const SignalTable& signals);
  /// Euler-advances all four blocks by dt from the last observed outputs.
  void advance(double dt);

  /// [y^X_{i,0}, y^Y_{i,0}, y^Z_{i,0}, l_{i,0}]: everything robot i sends its
  /// neighbors per step.
  std::array<double, 4> broadcast_payload(std::size_t robot) const;
  MdvoEstimate estimate(std::size_t robot) const;
  /// Same as estimate() but reuses the vectors in `out`.
  void estimate_into(std::size_t robot, MdvoEstimate& out) const;

  /// edcho_raw only: seed one block's internal state (column sums zero).
  void set_initial_state(Channel c, std::span<const double> x0);

  const MdvoConfig& config() const { return cfg_; }
  const ModulatingFunction& kappa() const { return kappa_; }
  const ConsensusBlock& block(Channel c) const { return blocks_[static_cast<std::size_t>(c)]; }
  std::span<const ConsensusBlock> blocks() const { return blocks_; }
  std::span<const Role> roles() const { return roles_; }
  std::size_t size() const { return roles_.size(); }
  double time() const { return t_; }

 private:
  std::shared_ptr<const Graph> graph_;
  std::vector<Role> roles_;
  MdvoConfig cfg_;
  ModulatingFunction kappa_;
  std::vector<ConsensusBlock> blocks_;
  std::array<std::vector<double>, 4> sigma_;
  double t_ = 0.0;
};

}  // namespace mdvo
