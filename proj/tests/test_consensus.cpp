#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "mdvo/consensus.hpp"
#include "mdvo/kernels.hpp"
#include "oracles/oracles.hpp"

using namespace mdvo;

namespace {

Graph random_connected(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(p);
  std::vector<Graph::Edge> edges;
  for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i - 1, i);  // spanning path
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j)
      if (coin(rng)) edges.emplace_back(i, j);
  return Graph::from_edges(n, edges);
}

std::vector<std::vector<int>> dense(const Graph& g) {
  std::vector<std::vector<int>> a(g.size(), std::vector<int>(g.size(), 0));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) a[i][j] = g.adjacent(i, j);
  return a;
}

struct Coeffs {
  std::vector<double> gain, exponent;
  CouplingCoefficients view(int m) const { return {m, gain, exponent}; }
};

Coeffs modulated(const std::vector<double>& k, double theta) {
  const int m = static_cast<int>(k.size()) - 1;
  Coeffs c;
  for (int mu = 0; mu <= m; ++mu) {
    c.gain.push_back(std::pow(theta, static_cast<double>(mu + 1) / (m + 1)) * k[mu]);
    c.exponent.push_back(static_cast<double>(m - mu) / (m + 1));
  }
  return c;
}

}  // namespace

TEST_CASE("sign_power examples") {
  CHECK(sign_power(-4.0, 0.5) == doctest::Approx(-2.0));
  CHECK(sign_power(0.0, 0.0) == 0.0);
  CHECK(sign_power(2.0, 0.0) == 1.0);
  CHECK(sign_power(0.0, 0.75) == 0.0);
}

TEST_CASE("sign_power is odd and monotone") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::uniform_real_distribution<double> a(0.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = u(rng), y = u(rng), alpha = k % 5 == 0 ? 0.0 : a(rng);
    CHECK(sign_power(-x, alpha) == -sign_power(x, alpha));
    if (x <= y) CHECK(sign_power(x, alpha) <= sign_power(y, alpha));
  }
}

TEST_CASE("sigma derivatives by the Leibniz rule") {
  const auto k1 = ModulatingFunction::build(1);
  const std::vector<double> s = {0.5, 1.0};  // s(t) = t at t = 0.5
  CHECK(sigma_derivative(k1, s, 1.0, 0.5, 1) == doctest::Approx(1.25));

  // Central difference of kappa(t) t.
  const double h = 1e-5;
  auto sig = [&](double t) { return k1.eval_derivative(0, t) * t; };
  CHECK((sig(0.5 + h) - sig(0.5 - h)) / (2 * h) == doctest::Approx(1.25).epsilon(1e-8));

  const auto k3 = ModulatingFunction::build(3);
  const std::vector<double> s3 = {2.0, -1.0, 0.5, 3.0};
  for (int mu = 0; mu <= 3; ++mu) CHECK(sigma_derivative(k3, s3, 0.5, 0.0, mu) == 0.0);
  CHECK(sigma_derivative(k3, s3, 0.5, 0.5, 0) == doctest::Approx(2.0));
  CHECK(sigma_derivative(k3, s3, 0.5, 0.7, 2) == doctest::Approx(0.5));

  std::vector<double> all(4);
  sigma_derivatives(k3, s3, 0.5, 0.21, all);
  for (int mu = 0; mu <= 3; ++mu) CHECK(all[mu] == doctest::Approx(sigma_derivative(k3, s3, 0.5, 0.21, mu)));
  CHECK_THROWS_AS(sigma_derivative(k3, s3, 0.5, 0.2, 4), std::out_of_range);
}

TEST_CASE("theta for m = 1 and the label block") {
  const auto k1 = ModulatingFunction::build(1);
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK(compute_theta(k1, ones, 1.0) == doctest::Approx(10.0));
  CHECK(label_theta(k1, 1.0) == doctest::Approx(6.0));

  const auto k3 = ModulatingFunction::build(3);
  CHECK(label_theta(k3, 0.5) == doctest::Approx(840.0 * 16.0));
  const std::vector<double> herd = {4.0, 1.0, 0.5, 0.25, 0.125};
  const std::vector<double> ks(k3.k_sup().begin(), k3.k_sup().end());
  CHECK(compute_theta(k3, herd, 0.5) == doctest::Approx(oracle::theta(ks, herd, 0.5)).epsilon(1e-12));
}

TEST_CASE("theta edge cases") {
  const auto k1 = ModulatingFunction::build(1);
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK(compute_theta(k1, zero, 1.0) == 0.0);
  CHECK_THROWS_AS((ConsensusGains{{1.0, 1.0}, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ConsensusGains{{1.0, -1.0}, 1.0}.validate()), std::invalid_argument);
  const std::vector<double> ones = {1.0, 1.0, 1.0};
  CHECK_THROWS_AS(compute_theta(k1, ones, 0.0), std::invalid_argument);
  const std::vector<double> short_bounds = {1.0, 1.0};
  CHECK_THROWS_AS(compute_theta(k1, short_bounds, 1.0), std::invalid_argument);
  const std::vector<double> negative = {1.0, -1.0, 1.0};
  CHECK_THROWS_AS(compute_theta(k1, negative, 1.0), std::invalid_argument);
}

TEST_CASE("serial kernel matches the protocol definition on random graphs") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 2.0);
  const std::vector<double> k = {7.5, 19.25, 17.75, 7.0};
  const double theta = 123.4;
  const auto c = modulated(k, theta);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_connected(6, 0.4, rng);
    std::vector<double> x(6 * 4), y0(6), xdot(6 * 4);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y0) v = nd(rng);
    if (trial % 4 == 0) y0[2] = y0[3];  // exercise sign(0)
    consensus_rates_serial(g, x, y0, c.view(3), xdot);
    const auto expect = oracle::consensus_rates(dense(g), x, y0, k, theta);
    for (std::size_t j = 0; j < xdot.size(); ++j) CHECK(xdot[j] == doctest::Approx(expect[j]).epsilon(1e-12));
  }
}

TEST_CASE("column sums of the rates cancel pairwise") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  const std::vector<double> k = {7.5, 19.25, 17.75, 7.0};
  const auto c = modulated(k, 50.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = random_connected(6, 0.5, rng);
    std::vector<double> x(24), y0(6), xdot(24);
    for (auto& v : x) v = nd(rng);
    for (auto& v : y0) v = nd(rng);
    for (auto kind : {KernelKind::serial, KernelKind::parallel}) {
      consensus_rates(kind, g, x, y0, c.view(3), xdot);
      for (int mu = 0; mu <= 3; ++mu) {
        double lhs = 0.0, rhs = 0.0;
        for (std::size_t i = 0; i < 6; ++i) {
          lhs += xdot[i * 4 + mu];
          if (mu < 3) rhs += x[i * 4 + mu + 1];
        }
        CHECK(std::abs(lhs - rhs) <= 1e-11);
      }
    }
  }
}

TEST_CASE("parallel kernel agrees with serial on a large graph") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int m : {1, 2, 3, 4}) {
    CAPTURE(m);
    std::vector<double> k(m + 1, 2.0);
    const auto c = modulated(k, 37.0);
    const auto g = random_connected(400, 0.02, rng);
    const std::size_t cols = m + 1;
    std::vector<double> x(400 * cols), y0(400), a(x.size()), b(x.size());
    for (auto& v : x) v = nd(rng);
    for (auto& v : y0) v = nd(rng);
    y0[10] = y0[11];
    consensus_rates_serial(g, x, y0, c.view(m), a);
    consensus_rates_parallel(g, x, y0, c.view(m), b);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(b[j] == doctest::Approx(a[j]).epsilon(1e-12));
  }
}

TEST_CASE("kernel edge cases") {
  const auto c = modulated({1.0, 1.0}, 1.0);
  Graph single(1);
  std::vector<double> x = {0.3, 0.7}, y0 = {5.0}, xdot(2);
  consensus_rates_serial(single, x, y0, c.view(1), xdot);
  CHECK(xdot[0] == 0.7);
  CHECK(xdot[1] == 0.0);

  const auto g = Graph::path(3);
  std::vector<double> x3 = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, same = {1.0, 1.0, 1.0}, out(6);
  consensus_rates_parallel(g, x3, same, c.view(1), out);
  CHECK(out == std::vector<double>{0.2, 0.0, 0.4, 0.0, 0.6, 0.0});

  std::vector<double> wrong(5);
  CHECK_THROWS_AS(consensus_rates_serial(g, x3, same, c.view(1), wrong), std::invalid_argument);
  CHECK_THROWS_AS(consensus_rates_parallel(g, x3, same, c.view(1), wrong), std::invalid_argument);
}

TEST_CASE("consensus block modes") {
  auto g = std::make_shared<const Graph>(Graph::path(3));
  ConsensusBlock mod(g, {{1.0, 1.0}, 10.0}, ConsensusMode::modulated);
  const std::vector<double> zero(6, 0.0);
  mod.observe(zero);
  for (double y : mod.outputs()) CHECK(y == 0.0);
  CHECK_THROWS_AS(mod.set_initial_state(zero), std::logic_error);

  ConsensusBlock raw(g, {{1.0, 1.0}, 1.0}, ConsensusMode::edcho_raw, KernelKind::serial);
  CHECK_THROWS_AS(raw.set_initial_state(std::vector<double>{1, 0, 1, 0, 1, 0}), std::invalid_argument);
  raw.set_initial_state(std::vector<double>{1, 0, -2, 0, 1, 0});
  CHECK(raw.column_sums()[0] == 0.0);

  // Equal constant signals and zero state stay at consensus.
  ConsensusBlock calm(g, {{1.0, 1.0}, 1.0}, ConsensusMode::edcho_raw);
  const std::vector<double> sigma = {2.0, 0.0, 2.0, 0.0, 2.0, 0.0};
  for (int k = 0; k < 100; ++k) {
    calm.observe(sigma);
    calm.advance(1e-3);
  }
  calm.observe(sigma);
  for (std::size_t i = 0; i < 3; ++i) CHECK(calm.output(i, 0) == 2.0);
  CHECK(calm.time() == doctest::Approx(0.1));
  CHECK(calm.output_spread() == 0.0);
}

TEST_CASE("raw block converges to the average of constant signals") {
  auto g = std::make_shared<const Graph>(Graph::path(4));
  ConsensusBlock b(g, {{3.0, 4.0}, 1.0}, ConsensusMode::edcho_raw, KernelKind::serial);
  const std::vector<double> sigma = {1.0, 0.0, -2.0, 0.0, 4.0, 0.0, 5.0, 0.0};
  for (int k = 0; k < 200000; ++k) {
    b.observe(sigma);
    b.advance(1e-4);
  }
  b.observe(sigma);
  for (std::size_t i = 0; i < 4; ++i) CHECK(b.output(i, 0) == doctest::Approx(2.0).epsilon(1e-3));
}
