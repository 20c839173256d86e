#include "mdvo/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace mdvo {

namespace {

constexpr int kPartition = 4096;

double bisect(const Polynomial& p, double a, double b) {
  double fa = p(a);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = p(mid);
    if (fm == 0.0) return mid;
    if ((fa < 0) == (fm < 0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

double newton_polish(const Polynomial& p, const Polynomial& dp, double t, double lo, double hi) {
  for (int it = 0; it < 50; ++it) {
    const double d = dp(t);
    if (d == 0.0) break;
    const double next = std::clamp(t - p(t) / d, lo, hi);
    if (std::abs(next - t) <= 1e-16 * std::max(1.0, std::abs(t))) return next;
    t = next;
  }
  return t;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {}

double Polynomial::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

int Polynomial::degree() const {
  for (int k = static_cast<int>(coeffs_.size()) - 1; k >= 0; --k)
    if (coeffs_[k] != 0.0) return k;
  return -1;
}

std::vector<double> Polynomial::real_roots(double lo, double hi) const {
  const int deg = degree();
  std::vector<double> roots;
  if (deg <= 0) return roots;

  const Polynomial dp = derivative();

  // Companion matrix of the monic polynomial.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  const double lead = coeffs_[deg];
  for (int r = 1; r < deg; ++r) companion(r, r - 1) = 1.0;
  for (int r = 0; r < deg; ++r) companion(r, deg - 1) = -coeffs_[r] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  const auto& ev = solver.eigenvalues();
  const double span = hi - lo;
  for (int k = 0; k < deg; ++k) {
    const double re = ev[k].real();
    const double im = ev[k].imag();
    if (std::abs(im) > 1e-6 * std::max(1.0, std::abs(re))) continue;
    if (re < lo - 1e-9 * span || re > hi + 1e-9 * span) continue;
    roots.push_back(newton_polish(*this, dp, std::clamp(re, lo, hi), lo, hi));
  }

  double prev_t = lo;
  double prev_f = (*this)(lo);
  for (int k = 1; k <= kPartition; ++k) {
    const double t = lo + span * static_cast<double>(k) / kPartition;
    const double f = (*this)(t);
    if (prev_f != 0.0 && f != 0.0 && (prev_f < 0) != (f < 0)) roots.push_back(bisect(*this, prev_t, t));
    if (f == 0.0) roots.push_back(t);
    prev_t = t;
    prev_f = f;
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots)
    if (merged.empty() || r - merged.back() > 1e-12) merged.push_back(r);
  return merged;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double acc = 1.0;
  for (int j = 1; j <= k; ++j) acc = acc * static_cast<double>(n - k + j) / static_cast<double>(j);
  return std::round(acc);
}

double sup_abs(const Polynomial& p, double lo, double hi) {
  double best = std::max(std::abs(p(lo)), std::abs(p(hi)));
  for (double r : p.derivative().real_roots(lo, hi)) best = std::max(best, std::abs(p(r)));
  return best;
}

}  // namespace mdvo
