#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace mdvo {

using Vec3 = Eigen::Vector3d;

enum class Role { leader, follower };

/// Scalar label fed to the label consensus block: 1 for leaders, 0 otherwise.
constexpr double label_of(Role r) { return r == Role::leader ? 1.0 : 0.0; }

std::string to_string(Role r);
Role role_from_string(const std::string& s);

/// A 3-vector signal with analytic derivatives up to max_order().
class SignalSource {
 public:
  explicit SignalSource(int max_order) : max_order_(max_order) {}
  virtual ~SignalSource() = default;

  /// nu-th time derivative at t; throws std::out_of_range for nu outside
  /// [0, max_order()].
  Vec3 eval(double t, int nu) const;

  int max_order() const { return max_order_; }

  /// Uniform bounds L_0..L_{m+1} on ||s^(nu)(t)||_inf. Families without a
  /// closed form are maximized on a dense grid over [0, horizon] and padded
  /// by 10%; those throw std::invalid_argument when no horizon is given.
  virtual std::vector<double> derivative_bounds(int m, std::optional<double> horizon) const;

  virtual std::string family() const = 0;

 protected:
  virtual Vec3 eval_unchecked(double t, int nu) const = 0;

  std::vector<double> grid_bounds(int m, double horizon) const;

 private:
  int max_order_;
};

/// Follower signal, identically zero.
class ZeroSignal final : public SignalSource {
 public:
  explicit ZeroSignal(int max_order) : SignalSource(max_order) {}
  std::vector<double> derivative_bounds(int m, std::optional<double> horizon) const override;
  std::string family() const override { return "zero"; }

 protected:
  Vec3 eval_unchecked(double, int) const override { return Vec3::Zero(); }
};

class ConstantSignal final : public SignalSource {
 public:
  ConstantSignal(Vec3 position, int max_order) : SignalSource(max_order), position_(position) {}
  std::vector<double> derivative_bounds(int m, std::optional<double> horizon) const override;
  std::string family() const override { return "constant"; }
  const Vec3& position() const { return position_; }

 protected:
  Vec3 eval_unchecked(double t, int nu) const override;

 private:
  Vec3 position_;
};

/// Per axis: offset + sum_k amplitude_k * sin(omega_k * t + phase_k).
class SinusoidSignal final : public SignalSource {
 public:
  struct Term {
    double amplitude = 0.0;
    double omega = 0.0;
    double phase = 0.0;
  };

  SinusoidSignal(Vec3 offset, std::array<std::vector<Term>, 3> terms, int max_order);

  /// L_0 = |offset| + sum |a|, L_mu = sum |a| omega^mu, max over axes.
  std::vector<double> derivative_bounds(int m, std::optional<double> horizon) const override;
  std::string family() const override { return "sinusoid"; }

  const Vec3& offset() const { return offset_; }
  const std::array<std::vector<Term>, 3>& terms() const { return terms_; }

 protected:
  Vec3 eval_unchecked(double t, int nu) const override;

 private:
  Vec3 offset_;
  std::array<std::vector<Term>, 3> terms_;
};

/// Per-axis polynomial in t (ascending coefficients). No closed-form bound.
class PolynomialSignal final : public SignalSource {
 public:
  PolynomialSignal(std::array<std::vector<double>, 3> coefficients, int max_order);
  std::string family() const override { return "polynomial"; }
  const std::array<std::vector<double>, 3>& coefficients() const { return coeffs_; }

 protected:
  Vec3 eval_unchecked(double t, int nu) const override;

 private:
  std::array<std::vector<double>, 3> coeffs_;
};

/// Truth plus i.i.d. Gaussian noise on the position channel only.
///
/// The noise sample is held until resample() is called, which the simulator
/// does once every Scenario::noise_hold_steps steps. Higher derivatives pass the truth through
/// unchanged. Not shareable: each agent owns its instance.
class NoisySignal final : public SignalSource {
 public:
  /// Throws std::invalid_argument for negative stddev.
  NoisySignal(std::shared_ptr<const SignalSource> truth, double stddev, std::uint64_t seed);

  void resample();
  const Vec3& current_noise() const { return noise_; }

  /// Bounds of the noise-free truth.
  std::vector<double> derivative_bounds(int m, std::optional<double> horizon) const override;
  std::string family() const override { return "noisy"; }

  const SignalSource& truth() const { return *truth_; }
  double stddev() const { return stddev_; }
  std::uint64_t seed() const { return seed_; }

 protected:
  Vec3 eval_unchecked(double t, int nu) const override;

 private:
  std::shared_ptr<const SignalSource> truth_;
  double stddev_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  Vec3 noise_ = Vec3::Zero();
};

}  // namespace mdvo
