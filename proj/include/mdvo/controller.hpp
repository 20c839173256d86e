#pragma once

#include <span>
#include <vector>

#include "mdvo/observer.hpp"
#include "mdvo/signals.hpp"

namespace mdvo {

/// True iff lambda^m + rho_{m-1} lambda^{m-1} + ... + rho_0 has every root
/// strictly in the open left half plane.
bool is_hurwitz(std::span<const double> rho);

/// Feedback gains rho_0..rho_{m-1} of the formation-tracking law.
class ControllerGains {
 public:
  /// Throws std::invalid_argument if rho is empty, has a non-positive entry,
  /// or the characteristic polynomial is not Hurwitz.
  explicit ControllerGains(std::vector<double> rho);

  int order() const { return static_cast<int>(rho_.size()); }
  std::span<const double> rho() const { return rho_; }

 private:
  std::vector<double> rho_;
};

/// Gains placing all m closed-loop poles at `pole`:
/// rho_mu = C(m, mu) (-pole)^(m-mu). Throws for pole >= 0 or m < 1.
ControllerGains pole_placement(int m, double pole);

/// Follower with m-th order integrator dynamics.
struct FollowerState {
  std::vector<Vec3> derivs;  // p, p', ..., p^(m-1)
  Vec3 offset = Vec3::Zero();

  int order() const { return static_cast<int>(derivs.size()); }
};

/// u = p_hat_m - rho_0 (p - p_hat_0 - d) - sum_{mu=1}^{m-1} rho_mu (p^(mu) - p_hat_mu).
/// Throws std::invalid_argument unless the state, estimate and gains share m.
Vec3 control(const FollowerState& state, const MdvoEstimate& est, const ControllerGains& gains);

/// Explicit Euler step of p^(m) = u.
void integrate(FollowerState& state, const Vec3& u, double dt);

}  // namespace mdvo
