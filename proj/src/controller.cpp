#include "mdvo/controller.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "mdvo/polynomial.hpp"

namespace mdvo {

bool is_hurwitz(std::span<const double> rho) {
  const int m = static_cast<int>(rho.size());
  if (m == 0) return false;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int r = 1; r < m; ++r) companion(r, r - 1) = 1.0;
  for (int r = 0; r < m; ++r) companion(r, m - 1) = -rho[r];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  for (int k = 0; k < m; ++k)
    if (!(solver.eigenvalues()[k].real() < 0.0)) return false;
  return true;
}

ControllerGains::ControllerGains(std::vector<double> rho) : rho_(std::move(rho)) {
  if (rho_.empty()) throw std::invalid_argument("controller: need rho_0..rho_{m-1}");
  for (double r : rho_)
    if (!(r > 0.0)) throw std::invalid_argument("controller: rho entries must be positive");
  if (!is_hurwitz(rho_)) throw std::invalid_argument("controller: characteristic polynomial is not Hurwitz");
}

ControllerGains pole_placement(int m, double pole) {
  if (m < 1) throw std::invalid_argument("controller: order must be >= 1");
  if (!(pole < 0.0)) throw std::invalid_argument("controller: pole must be negative");
  std::vector<double> rho(m);
  for (int mu = 0; mu < m; ++mu) rho[mu] = binomial(m, mu) * std::pow(-pole, m - mu);
  return ControllerGains(std::move(rho));
}

Vec3 control(const FollowerState& state, const MdvoEstimate& est, const ControllerGains& gains) {
  const int m = gains.order();
  if (state.order() != m || est.order() != m) throw std::invalid_argument("controller: order mismatch");
  const auto rho = gains.rho();
  Vec3 u = est.p_hat[m] - rho[0] * (state.derivs[0] - est.p_hat[0] - state.offset);
  for (int mu = 1; mu < m; ++mu) u -= rho[mu] * (state.derivs[mu] - est.p_hat[mu]);
  return u;
}

void integrate(FollowerState& state, const Vec3& u, double dt) {
  const int m = state.order();
  for (int mu = 0; mu + 1 < m; ++mu) state.derivs[mu] += dt * state.derivs[mu + 1];
  state.derivs[m - 1] += dt * u;
}

}  // namespace mdvo
