#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "mdvo/graph.hpp"
#include "mdvo/kernels.hpp"
#include "mdvo/modfunc.hpp"

namespace mdvo {

/// |x|^alpha sign(x), with sign(0) = 0 and alpha = 0 meaning plain sign.
inline double sign_power(double x, double alpha) {
  if (x == 0.0) return 0.0;
  const double s = x > 0.0 ? 1.0 : -1.0;
  if (alpha == 0.0) return s;
  return s * std::pow(std::abs(x), alpha);
}

/// mu-th derivative of kappa(t/T_c) s(t) by the Leibniz rule.
/// s_derivs holds s, s', ..., s^(mu) at t (at least mu+1 entries).
double sigma_derivative(const ModulatingFunction& kappa, std::span<const double> s_derivs, double t_c, double t,
                        int mu);

/// All sigma^(0..m) at once; out has m+1 entries, s_derivs at least m+1.
void sigma_derivatives(const ModulatingFunction& kappa, std::span<const double> s_derivs, double t_c, double t,
                       std::span<double> out);

/// Gain making the modulated block meet deadlines T_c >= t_min:
///   theta = sum_nu C(m+1, nu) K_{m-nu+1} L_nu / t_min^(m-nu+1).
/// bounds holds L_0..L_{m+1}. Throws std::invalid_argument for t_min <= 0,
/// a wrong bounds length or a negative bound. All-zero bounds give 0, which
/// ConsensusGains rejects.
double compute_theta(const ModulatingFunction& kappa, std::span<const double> bounds, double t_min);

/// theta for a static {0,1} label channel: L_0 = 1, higher bounds 0.
double label_theta(const ModulatingFunction& kappa, double t_min);

struct ConsensusGains {
  std::vector<double> k;  // k_0..k_m
  double theta = 1.0;

  int order() const { return static_cast<int>(k.size()) - 1; }
  /// Throws std::invalid_argument unless every k_mu > 0 and theta > 0.
  void validate() const;
};

enum class ConsensusMode { modulated, edcho_raw };

/// One scalar exact dynamic consensus block over all N agents.
///
/// Usage per step: observe(sigma) with the agents' current sigma^(0..m),
/// read outputs, then advance(dt). In modulated mode the state starts at
/// zero and sigma must be the kappa-modulated signal; in edcho_raw mode
/// theta should be 1 and sigma the raw signal, and any initial state with
/// zero column sums is accepted.
class ConsensusBlock {
 public:
  ConsensusBlock(std::shared_ptr<const Graph> graph, ConsensusGains gains, ConsensusMode mode,
                 KernelKind kernel = KernelKind::parallel);

  int order() const { return order_; }
  std::size_t size() const { return graph_->size(); }
  ConsensusMode mode() const { return mode_; }
  const ConsensusGains& gains() const { return gains_; }
  double time() const { return t_; }

  /// edcho_raw only. Throws std::logic_error in modulated mode and
  /// std::invalid_argument if a column sum exceeds 1e-12 * max |x|.
  void set_initial_state(std::span<const double> x0);

  /// Sets y = sigma - x; sigma is N x (m+1) row-major.
  void observe(std::span<const double> sigma);

  /// xdot from the current outputs; xdot is N x (m+1) row-major.
  void rates(std::span<double> xdot) const;

  /// Explicit Euler step using rates() of the last observed outputs.
  void advance(double dt);

  double output(std::size_t agent, int mu) const { return y_[agent * cols() + mu]; }
  double state(std::size_t agent, int mu) const { return x_[agent * cols() + mu]; }
  std::span<const double> outputs() const { return y_; }
  std::span<const double> states() const { return x_; }

  /// sum_i x_{i,mu} for mu = 0..m.
  std::vector<double> column_sums() const;
  /// max_{i,j} |y_{i,0} - y_{j,0}|.
  double output_spread() const;

  CouplingCoefficients coefficients() const { return {order_, gain_, exponent_}; }

 private:
  std::size_t cols() const { return static_cast<std::size_t>(order_) + 1; }

  std::shared_ptr<const Graph> graph_;
  ConsensusGains gains_;
  ConsensusMode mode_;
  KernelKind kernel_;
  int order_;
  std::vector<double> gain_;
  std::vector<double> exponent_;
  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> y0_;
  mutable std::vector<double> xdot_;
  double t_ = 0.0;
};

}  // namespace mdvo
