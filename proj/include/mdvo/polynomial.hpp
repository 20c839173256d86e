#pragma once

#include <span>
#include <vector>

namespace mdvo {

/// Dense real polynomial, coefficients in ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coefficients);

  double operator()(double t) const;
  Polynomial derivative() const;

  /// Degree after trimming trailing exact zeros; -1 for the zero polynomial.
  int degree() const;
  std::span<const double> coefficients() const { return coeffs_; }

  /// Real roots in [lo, hi], ascending, duplicates within 1e-12 merged.
  /// Candidates come from companion-matrix eigenvalues and are Newton
  /// polished; sign changes over a uniform partition are bisected as well so
  /// that no simple root is lost to eigenvalue inaccuracy.
  std::vector<double> real_roots(double lo, double hi) const;

 private:
  std::vector<double> coeffs_;
};

/// Binomial coefficient C(n, k) as a double; 0 outside 0 <= k <= n.
double binomial(int n, int k);

/// max |p(t)| over [lo, hi] from endpoints plus the real roots of p'.
double sup_abs(const Polynomial& p, double lo, double hi);

}  // namespace mdvo
