#pragma once

#include <span>
#include <vector>

#include "mdvo/polynomial.hpp"

namespace mdvo {

/// m-th order modulating function kappa: a C^m time warp from kappa(0) = 0 to
/// kappa(t) = 1 for t >= 1, with derivatives of orders 1..m vanishing at both
/// ends of [0, 1].
///
/// On [0, 1] kappa is the unique degree-(2m+1) polynomial meeting the 2m+2
/// boundary conditions, which is also the minimum-energy interpolant of the
/// (m+1)-fold integrator chain. Past t = 1 evaluation is clamped: kappa = 1
/// and every derivative is 0.
class ModulatingFunction {
 public:
  static constexpr int kMaxOrder = 10;

  /// Throws std::invalid_argument for order < 0 or order > kMaxOrder, and
  /// std::logic_error if the numerically certified sup |kappa| differs from 1.
  static ModulatingFunction build(int order);

  int order() const { return order_; }

  /// Ascending coefficients of kappa on [0, 1] (length 2m+2).
  std::span<const double> coefficients() const { return derivs_.front().coefficients(); }

  /// mu-th derivative at dimensionless time t >= 0, 0 <= mu <= m+1.
  double eval_derivative(int mu, double t) const;

  /// K_mu = sup_{[0,1]} |kappa^(mu)|, 0 <= mu <= m+1.
  double sup_derivative(int mu) const;
  std::span<const double> k_sup() const { return k_sup_; }

  /// Residuals of the 2m+2 boundary conditions in the order
  /// kappa(0), kappa'(0)..kappa^(m)(0), kappa(1) - 1, kappa'(1)..kappa^(m)(1).
  std::vector<double> boundary_residuals() const;

  /// kappa^(m+1)(1^-). Nonzero values mean the (m+1)-th derivative jumps
  /// at the clamp point.
  double top_derivative_at_one() const { return derivs_[order_ + 1](1.0); }

  const Polynomial& derivative_polynomial(int mu) const;

 private:
  ModulatingFunction(int order, std::vector<Polynomial> derivs, std::vector<double> k_sup);

  int order_;
  std::vector<Polynomial> derivs_;  // kappa^(0..m+1) on [0, 1]
  std::vector<double> k_sup_;
};

}  // namespace mdvo
