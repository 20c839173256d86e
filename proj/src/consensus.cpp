#include "mdvo/consensus.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>

namespace mdvo {

double sigma_derivative(const ModulatingFunction& kappa, std::span<const double> s_derivs, double t_c, double t,
                        int mu) {
  if (mu < 0 || mu > kappa.order()) throw std::out_of_range("sigma: derivative order outside [0, m]");
  if (!(t_c > 0.0)) throw std::invalid_argument("sigma: T_c must be positive");
  if (s_derivs.size() < static_cast<std::size_t>(mu) + 1) throw std::invalid_argument("sigma: too few signal derivatives");
  const double tau = t / t_c;
  double acc = 0.0;
  for (int nu = 0; nu <= mu; ++nu) {
    const int k = mu - nu;
    acc += binomial(mu, nu) * std::pow(t_c, -k) * kappa.eval_derivative(k, tau) * s_derivs[nu];
  }
  return acc;
}

void sigma_derivatives(const ModulatingFunction& kappa, std::span<const double> s_derivs, double t_c, double t,
                       std::span<double> out) {
  const int m = kappa.order();
  if (out.size() != static_cast<std::size_t>(m) + 1 || s_derivs.size() < out.size())
    throw std::invalid_argument("sigma: dimension mismatch");
  const double tau = t / t_c;
  std::array<double, ModulatingFunction::kMaxOrder + 2> scaled{};
  double inv_tc = 1.0;
  for (int k = 0; k <= m; ++k) {
    scaled[k] = kappa.eval_derivative(k, tau) * inv_tc;
    inv_tc /= t_c;
  }
  for (int mu = 0; mu <= m; ++mu) {
    double acc = 0.0;
    for (int nu = 0; nu <= mu; ++nu) acc += binomial(mu, nu) * scaled[mu - nu] * s_derivs[nu];
    out[mu] = acc;
  }
}

double compute_theta(const ModulatingFunction& kappa, std::span<const double> bounds, double t_min) {
  const int m = kappa.order();
  if (!(t_min > 0.0)) throw std::invalid_argument("theta: T_min must be positive");
  if (bounds.size() != static_cast<std::size_t>(m) + 2)
    throw std::invalid_argument("theta: expected " + std::to_string(m + 2) + " bounds L_0..L_{m+1}");
  double theta = 0.0;
  for (int nu = 0; nu <= m + 1; ++nu) {
    if (!(bounds[nu] >= 0.0)) throw std::invalid_argument("theta: bound L_" + std::to_string(nu) + " is negative");
    const int k = m - nu + 1;
    theta += binomial(m + 1, nu) * kappa.sup_derivative(k) * bounds[nu] / std::pow(t_min, k);
  }
  return theta;
}

double label_theta(const ModulatingFunction& kappa, double t_min) {
  std::vector<double> bounds(kappa.order() + 2, 0.0);
  bounds[0] = 1.0;
  return compute_theta(kappa, bounds, t_min);
}

void ConsensusGains::validate() const {
  if (k.empty()) throw std::invalid_argument("gains: need k_0..k_m");
  for (std::size_t mu = 0; mu < k.size(); ++mu)
    if (!(k[mu] > 0.0)) throw std::invalid_argument("gains: k_" + std::to_string(mu) + " must be positive");
  if (!(theta > 0.0)) throw std::invalid_argument("gains: theta must be positive");
}

ConsensusBlock::ConsensusBlock(std::shared_ptr<const Graph> graph, ConsensusGains gains, ConsensusMode mode,
                               KernelKind kernel)
    : graph_(std::move(graph)), gains_(std::move(gains)), mode_(mode), kernel_(kernel), order_(gains_.order()) {
  if (!graph_) throw std::invalid_argument("consensus: null graph");
  gains_.validate();
  if (order_ > ModulatingFunction::kMaxOrder) throw std::invalid_argument("consensus: order too large");
  const double m1 = static_cast<double>(order_ + 1);
  for (int mu = 0; mu <= order_; ++mu) {
    gain_.push_back(std::pow(gains_.theta, (mu + 1) / m1) * gains_.k[mu]);
    exponent_.push_back(static_cast<double>(order_ - mu) / m1);
  }
  const std::size_t n = graph_->size() * cols();
  x_.assign(n, 0.0);
  y_.assign(n, 0.0);
  y0_.assign(graph_->size(), 0.0);
  xdot_.assign(n, 0.0);
}

void ConsensusBlock::set_initial_state(std::span<const double> x0) {
  if (mode_ == ConsensusMode::modulated) throw std::logic_error("consensus: modulated mode starts from zero state");
  if (x0.size() != x_.size()) throw std::invalid_argument("consensus: initial state dimension mismatch");
  double scale = 0.0;
  for (double v : x0) scale = std::max(scale, std::abs(v));
  for (int mu = 0; mu <= order_; ++mu) {
    double sum = 0.0;
    for (std::size_t i = 0; i < size(); ++i) sum += x0[i * cols() + mu];
    if (std::abs(sum) > 1e-12 * std::max(1.0, scale))
      throw std::invalid_argument("consensus: initial states must sum to zero over agents (mu=" + std::to_string(mu) + ")");
  }
  std::copy(x0.begin(), x0.end(), x_.begin());
}

void ConsensusBlock::observe(std::span<const double> sigma) {
  if (sigma.size() != y_.size()) throw std::invalid_argument("consensus: sigma dimension mismatch");
  for (std::size_t k = 0; k < y_.size(); ++k) y_[k] = sigma[k] - x_[k];
  for (std::size_t i = 0; i < size(); ++i) y0_[i] = y_[i * cols()];
}

void ConsensusBlock::rates(std::span<double> xdot) const {
  consensus_rates(kernel_, *graph_, x_, y0_, coefficients(), xdot);
}

void ConsensusBlock::advance(double dt) {
  rates(xdot_);
  for (std::size_t k = 0; k < x_.size(); ++k) x_[k] += dt * xdot_[k];
  t_ += dt;
}

std::vector<double> ConsensusBlock::column_sums() const {
  std::vector<double> sums(cols(), 0.0);
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t mu = 0; mu < cols(); ++mu) sums[mu] += x_[i * cols() + mu];
  return sums;
}

double ConsensusBlock::output_spread() const {
  const auto [lo, hi] = std::minmax_element(y0_.begin(), y0_.end());
  return *hi - *lo;
}

}  // namespace mdvo
