#include "mdvo/observer.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mdvo {

void MdvoConfig::validate(std::size_t n_agents) const {
  if (order < 0 || order > ModulatingFunction::kMaxOrder) throw std::invalid_argument("mdvo.order: outside [0, 10]");
  if (!(t_min > 0.0)) throw std::invalid_argument("mdvo.t_min: must be positive");
  if (!(t_c >= t_min)) throw std::invalid_argument("mdvo.t_c: must be >= t_min");
  if (n_max < n_agents)
    throw std::invalid_argument("mdvo.n_max: " + std::to_string(n_max) + " is below the agent count " +
                                std::to_string(n_agents));
  if (k.size() != static_cast<std::size_t>(order) + 1)
    throw std::invalid_argument("mdvo.k: expected " + std::to_string(order + 1) + " gains");
  for (std::size_t i = 0; i < k.size(); ++i)
    if (!(k[i] > 0.0)) throw std::invalid_argument("mdvo.k[" + std::to_string(i) + "]: must be positive");
  if (bounds.size() != static_cast<std::size_t>(order) + 2)
    throw std::invalid_argument("mdvo.bounds: expected " + std::to_string(order + 2) + " values L_0..L_{m+1}");
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (!(bounds[i] >= 0.0)) throw std::invalid_argument("mdvo.bounds[" + std::to_string(i) + "]: must be >= 0");
}

std::vector<ConsensusBlock> configure_blocks(const MdvoConfig& cfg, std::shared_ptr<const Graph> graph,
                                             const ModulatingFunction& kappa) {
  cfg.validate(graph->size());
  double theta_pos = 1.0;
  double theta_label = 1.0;
  if (cfg.mode == ConsensusMode::modulated) {
    theta_pos = compute_theta(kappa, cfg.bounds, cfg.t_min);
    theta_label = label_theta(kappa, cfg.t_min);
    if (!(theta_pos > 0.0)) throw std::invalid_argument("mdvo.bounds: all zero, position theta would be 0");
  }
  std::vector<ConsensusBlock> blocks;
  blocks.reserve(4);
  for (int c = 0; c < 3; ++c) blocks.emplace_back(graph, ConsensusGains{cfg.k, theta_pos}, cfg.mode, cfg.kernel);
  blocks.emplace_back(graph, ConsensusGains{cfg.k, theta_label}, cfg.mode, cfg.kernel);
  return blocks;
}

Observer::Observer(std::shared_ptr<const Graph> graph, std::vector<Role> roles, MdvoConfig cfg)
    : graph_(std::move(graph)),
      roles_(std::move(roles)),
      cfg_(std::move(cfg)),
      kappa_(ModulatingFunction::build(cfg_.order)),
      blocks_(configure_blocks(cfg_, graph_, kappa_)) {
  if (roles_.size() != graph_->size()) throw std::invalid_argument("mdvo: roles/graph size mismatch");
  const std::size_t cells = graph_->size() * (static_cast<std::size_t>(cfg_.order) + 1);
  for (auto& s : sigma_) s.assign(cells, 0.0);
}

void Observer::observe(double t, const SignalTable& signals) {
  const int m = cfg_.order;
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  const bool modulated = cfg_.mode == ConsensusMode::modulated;
  if (signals.size() != roles_.size()) throw std::invalid_argument("mdvo: signal table size mismatch");

  std::array<double, ModulatingFunction::kMaxOrder + 2> s{};
  std::array<double, ModulatingFunction::kMaxOrder + 2> out{};
  // Label channel: s = 1 constant, so sigma^(mu) = kappa^(mu)(t/T_c) / T_c^mu.
  std::array<double, ModulatingFunction::kMaxOrder + 2> label_sigma{};
  if (modulated) {
    s.fill(0.0);
    s[0] = 1.0;
    sigma_derivatives(kappa_, std::span(s).first(cols), cfg_.t_c, t, std::span(label_sigma).first(cols));
  } else {
    label_sigma[0] = 1.0;
  }

  for (std::size_t i = 0; i < roles_.size(); ++i) {
    double* rows[4];
    for (std::size_t c = 0; c < 4; ++c) rows[c] = sigma_[c].data() + i * cols;
    if (roles_[i] == Role::follower) {
      for (std::size_t c = 0; c < 4; ++c) std::fill(rows[c], rows[c] + cols, 0.0);
      continue;
    }
    const auto& si = signals[i];
    if (si.size() < cols) throw std::invalid_argument("mdvo: leader signal needs derivatives up to m");
    for (std::size_t axis = 0; axis < 3; ++axis) {
      for (std::size_t nu = 0; nu < cols; ++nu) s[nu] = si[nu][axis];
      if (modulated) {
        sigma_derivatives(kappa_, std::span(s).first(cols), cfg_.t_c, t, std::span(out).first(cols));
        std::copy_n(out.begin(), cols, rows[axis]);
      } else {
        std::copy_n(s.begin(), cols, rows[axis]);
      }
    }
    std::copy_n(label_sigma.begin(), cols, rows[3]);
  }
  for (std::size_t c = 0; c < 4; ++c) blocks_[c].observe(sigma_[c]);
  t_ = t;
}

void Observer::advance(double dt) {
  for (auto& b : blocks_) b.advance(dt);
}

std::array<double, 4> Observer::broadcast_payload(std::size_t robot) const {
  if (robot >= size()) throw std::out_of_range("mdvo: robot index out of range");
  return {blocks_[0].output(robot, 0), blocks_[1].output(robot, 0), blocks_[2].output(robot, 0),
          blocks_[3].output(robot, 0)};
}

MdvoEstimate Observer::estimate(std::size_t robot) const {
  MdvoEstimate est;
  estimate_into(robot, est);
  return est;
}

void Observer::estimate_into(std::size_t robot, MdvoEstimate& est) const {
  if (robot >= size()) throw std::out_of_range("mdvo: robot index out of range");
  const int m = cfg_.order;
  est.l_hat = blocks_[3].output(robot, 0);
  double divisor = std::max(est.l_hat, 1.0 / static_cast<double>(cfg_.n_max));
  if (cfg_.direct_ratio_after_deadline && t_ >= cfg_.t_c) divisor = est.l_hat;
  est.p_hat.resize(m + 1);
  est.raw_y.resize(m + 1);
  for (int mu = 0; mu <= m; ++mu) {
    const Vec3 y(blocks_[0].output(robot, mu), blocks_[1].output(robot, mu), blocks_[2].output(robot, mu));
    est.raw_y[mu] = y;
    est.p_hat[mu] = y / divisor;
  }
}

void Observer::set_initial_state(Channel c, std::span<const double> x0) {
  blocks_[static_cast<std::size_t>(c)].set_initial_state(x0);
}

}  // namespace mdvo
