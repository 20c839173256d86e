#include "mdvo/kernels.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "mdvo/consensus.hpp"

namespace mdvo {

namespace {

constexpr std::ptrdiff_t kParallelThreshold = 256;
constexpr int kMaxRow = 16;

void check_dims(const Graph& g, std::span<const double> x, std::span<const double> y0, const CouplingCoefficients& c,
                std::span<double> xdot) {
  const std::size_t n = g.size();
  const std::size_t cols = static_cast<std::size_t>(c.order) + 1;
  if (c.order < 0 || cols > kMaxRow) throw std::invalid_argument("kernel: unsupported order");
  if (c.gain.size() != cols || c.exponent.size() != cols) throw std::invalid_argument("kernel: coefficient length");
  if (x.size() != n * cols || xdot.size() != n * cols || y0.size() != n)
    throw std::invalid_argument("kernel: state dimension mismatch");
}

// |d|^(1/(m+1)) with the common orders special-cased.
inline double unit_root(double a, int order) {
  switch (order) {
    case 0:
      return a;
    case 1:
      return std::sqrt(a);
    case 3:
      return std::sqrt(std::sqrt(a));
    default:
      return std::pow(a, 1.0 / static_cast<double>(order + 1));
  }
}

}  // namespace

void consensus_rates_serial(const Graph& g, std::span<const double> x, std::span<const double> y0,
                            const CouplingCoefficients& c, std::span<double> xdot) {
  check_dims(g, x, y0, c, xdot);
  const std::size_t n = g.size();
  const int m = c.order;
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (int mu = 0; mu <= m; ++mu) {
      double sum = 0.0;
      for (auto j : g.neighbors(i)) sum += sign_power(y0[i] - y0[j], c.exponent[mu]);
      const double chain = mu < m ? x[i * cols + mu + 1] : 0.0;
      xdot[i * cols + mu] = c.gain[mu] * sum + chain;
    }
  }
}

void consensus_rates_parallel(const Graph& g, std::span<const double> x, std::span<const double> y0,
                              const CouplingCoefficients& c, std::span<double> xdot) {
  check_dims(g, x, y0, c, xdot);
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  const int m = c.order;
  for (int mu = 0; mu <= m; ++mu)
    if (std::abs(c.exponent[mu] - static_cast<double>(m - mu) / (m + 1)) > 1e-15)
      throw std::invalid_argument("kernel: exponent pattern must be (m-mu)/(m+1)");
  const std::size_t cols = static_cast<std::size_t>(m) + 1;
  const auto offsets = g.row_offsets();
  const auto cols_idx = g.column_indices();

#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
  for (std::ptrdiff_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    std::array<double, kMaxRow> acc{};
    std::array<double, kMaxRow> powers{};
    for (std::size_t e = offsets[i]; e < offsets[i + 1]; ++e) {
      const double d = y0[i] - y0[cols_idx[e]];
      if (d == 0.0) continue;
      const double s = d > 0.0 ? 1.0 : -1.0;
      const double r = unit_root(std::abs(d), m);
      powers[0] = s;
      for (int k = 1; k <= m; ++k) powers[k] = powers[k - 1] * r;
      for (int mu = 0; mu <= m; ++mu) acc[mu] += powers[m - mu];
    }
    for (int mu = 0; mu <= m; ++mu) {
      const double chain = mu < m ? x[i * cols + mu + 1] : 0.0;
      xdot[i * cols + mu] = c.gain[mu] * acc[mu] + chain;
    }
  }
}

}  // namespace mdvo
