#include "mdvo/modfunc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mdvo {

namespace {

// kappa(t) = (2m+1)!/(m!)^2 int_0^t s^m (1-s)^m ds, whose coefficients are
// integers: c_{m+1+j} = (2m+1) C(2m, m) C(m, j) (-1)^j / (m+1+j).
std::vector<double> exact_coefficients(int m) {
  const int n = 2 * m + 2;
  std::vector<double> out(n, 0.0);
  const long double lead = (2 * m + 1) * binomial(2 * m, m);
  for (int j = 0; j <= m; ++j) {
    const long double c = lead * binomial(m, j) / static_cast<long double>(m + 1 + j);
    out[m + 1 + j] = static_cast<double>((j % 2 ? -1 : 1) * std::llround(c));
  }
  return out;
}

}  // namespace

ModulatingFunction::ModulatingFunction(int order, std::vector<Polynomial> derivs, std::vector<double> k_sup)
    : order_(order), derivs_(std::move(derivs)), k_sup_(std::move(k_sup)) {}

ModulatingFunction ModulatingFunction::build(int order) {
  if (order < 0 || order > kMaxOrder)
    throw std::invalid_argument("modfunc: order " + std::to_string(order) + " outside [0, " +
                                std::to_string(kMaxOrder) + "]");
  std::vector<Polynomial> derivs;
  derivs.reserve(order + 2);
  derivs.emplace_back(exact_coefficients(order));
  for (int mu = 1; mu <= order + 1; ++mu) derivs.push_back(derivs.back().derivative());

  std::vector<double> k_sup;
  k_sup.reserve(order + 2);
  for (const auto& p : derivs) k_sup.push_back(sup_abs(p, 0.0, 1.0));

  double scale = 0.0;
  for (double c : derivs.front().coefficients()) scale += std::abs(c);
  if (std::abs(k_sup.front() - 1.0) > 64.0 * std::numeric_limits<double>::epsilon() * scale)
    throw std::logic_error("modfunc: kappa is not monotone on [0,1] (K_0 = " + std::to_string(k_sup.front()) + ")");
  k_sup.front() = 1.0;

  return ModulatingFunction(order, std::move(derivs), std::move(k_sup));
}

double ModulatingFunction::eval_derivative(int mu, double t) const {
  if (mu < 0 || mu > order_ + 1)
    throw std::out_of_range("modfunc: derivative order " + std::to_string(mu) + " outside [0, m+1]");
  if (t >= 1.0) return mu == 0 ? 1.0 : 0.0;
  return derivs_[mu](t);
}

double ModulatingFunction::sup_derivative(int mu) const {
  if (mu < 0 || mu > order_ + 1)
    throw std::out_of_range("modfunc: derivative order " + std::to_string(mu) + " outside [0, m+1]");
  return k_sup_[mu];
}

const Polynomial& ModulatingFunction::derivative_polynomial(int mu) const {
  if (mu < 0 || mu > order_ + 1) throw std::out_of_range("modfunc: derivative order out of range");
  return derivs_[mu];
}

std::vector<double> ModulatingFunction::boundary_residuals() const {
  std::vector<double> r;
  r.reserve(2 * order_ + 2);
  for (int mu = 0; mu <= order_; ++mu) r.push_back(derivs_[mu](0.0));
  for (int mu = 0; mu <= order_; ++mu) r.push_back(derivs_[mu](1.0) - (mu == 0 ? 1.0 : 0.0));
  return r;
}

}  // namespace mdvo
