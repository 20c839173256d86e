#include "mdvo/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mdvo {

std::string to_string(Role r) { return r == Role::leader ? "leader" : "follower"; }

Role role_from_string(const std::string& s) {
  if (s == "leader") return Role::leader;
  if (s == "follower") return Role::follower;
  throw std::invalid_argument("unknown role '" + s + "'");
}

Vec3 SignalSource::eval(double t, int nu) const {
  if (nu < 0 || nu > max_order_)
    throw std::out_of_range("signal: derivative order " + std::to_string(nu) + " outside [0, " +
                            std::to_string(max_order_) + "]");
  return eval_unchecked(t, nu);
}

std::vector<double> SignalSource::derivative_bounds(int m, std::optional<double> horizon) const {
  if (!horizon) throw std::invalid_argument("signal: family '" + family() + "' needs a horizon for bounds");
  return grid_bounds(m, *horizon);
}

std::vector<double> SignalSource::grid_bounds(int m, double horizon) const {
  constexpr int kSamples = 20000;
  std::vector<double> bounds(m + 2, 0.0);
  for (int nu = 0; nu <= m + 1; ++nu) {
    double best = 0.0;
    for (int k = 0; k <= kSamples; ++k) {
      const double t = horizon * static_cast<double>(k) / kSamples;
      best = std::max(best, eval(t, nu).lpNorm<Eigen::Infinity>());
    }
    bounds[nu] = 1.1 * best;
  }
  return bounds;
}

std::vector<double> ZeroSignal::derivative_bounds(int m, std::optional<double>) const {
  return std::vector<double>(m + 2, 0.0);
}

std::vector<double> ConstantSignal::derivative_bounds(int m, std::optional<double>) const {
  std::vector<double> b(m + 2, 0.0);
  b[0] = position_.lpNorm<Eigen::Infinity>();
  return b;
}

Vec3 ConstantSignal::eval_unchecked(double, int nu) const { return nu == 0 ? position_ : Vec3::Zero(); }

SinusoidSignal::SinusoidSignal(Vec3 offset, std::array<std::vector<Term>, 3> terms, int max_order)
    : SignalSource(max_order), offset_(offset), terms_(std::move(terms)) {}

Vec3 SinusoidSignal::eval_unchecked(double t, int nu) const {
  Vec3 out = nu == 0 ? offset_ : Vec3::Zero();
  const double shift = 0.5 * std::numbers::pi * nu;
  for (int axis = 0; axis < 3; ++axis) {
    for (const auto& term : terms_[axis]) {
      out[axis] += term.amplitude * std::pow(term.omega, nu) * std::sin(term.omega * t + term.phase + shift);
    }
  }
  return out;
}

std::vector<double> SinusoidSignal::derivative_bounds(int m, std::optional<double>) const {
  std::vector<double> b(m + 2, 0.0);
  for (int nu = 0; nu <= m + 1; ++nu) {
    for (int axis = 0; axis < 3; ++axis) {
      double sum = nu == 0 ? std::abs(offset_[axis]) : 0.0;
      for (const auto& term : terms_[axis]) sum += std::abs(term.amplitude) * std::pow(std::abs(term.omega), nu);
      b[nu] = std::max(b[nu], sum);
    }
  }
  return b;
}

PolynomialSignal::PolynomialSignal(std::array<std::vector<double>, 3> coefficients, int max_order)
    : SignalSource(max_order), coeffs_(std::move(coefficients)) {}

Vec3 PolynomialSignal::eval_unchecked(double t, int nu) const {
  Vec3 out = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    const auto& c = coeffs_[axis];
    double acc = 0.0;
    for (int k = static_cast<int>(c.size()) - 1; k >= nu; --k) {
      double falling = 1.0;
      for (int j = 0; j < nu; ++j) falling *= static_cast<double>(k - j);
      acc = acc * t + falling * c[k];
    }
    out[axis] = acc;
  }
  return out;
}

NoisySignal::NoisySignal(std::shared_ptr<const SignalSource> truth, double stddev, std::uint64_t seed)
    : SignalSource(truth ? truth->max_order() : 0),
      truth_(std::move(truth)),
      stddev_(stddev),
      seed_(seed),
      rng_(seed) {
  if (!truth_) throw std::invalid_argument("noisy signal: null truth");
  if (!(stddev >= 0.0)) throw std::invalid_argument("noisy signal: stddev must be non-negative");
}

void NoisySignal::resample() {
  for (int axis = 0; axis < 3; ++axis) noise_[axis] = stddev_ * normal_(rng_);
}

Vec3 NoisySignal::eval_unchecked(double t, int nu) const {
  Vec3 v = truth_->eval(t, nu);
  if (nu == 0 && stddev_ > 0.0) v += noise_;
  return v;
}

std::vector<double> NoisySignal::derivative_bounds(int m, std::optional<double> horizon) const {
  return truth_->derivative_bounds(m, horizon);
}

}  // namespace mdvo
