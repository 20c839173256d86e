#pragma once

#include <span>

#include "mdvo/graph.hpp"

namespace mdvo {

/// Per-order coupling coefficients of one consensus block.
///
/// gain[mu] multiplies the neighbor sum of sign_power(y_i0 - y_j0,
/// exponent[mu]) in the rate of x_{i,mu}. For the modulated protocol
/// gain[mu] = theta^((mu+1)/(m+1)) k_mu and exponent[mu] = (m-mu)/(m+1).
struct CouplingCoefficients {
  int order = 0;
  std::span<const double> gain;
  std::span<const double> exponent;
};

enum class KernelKind { serial, parallel };

/// Reference kernel: straightforward per-edge sign_power evaluation.
///
/// x and xdot are N x (m+1) row-major, y0 has length N. Throws
/// std::invalid_argument on dimension mismatch.
void consensus_rates_serial(const Graph& g, std::span<const double> x, std::span<const double> y0,
                            const CouplingCoefficients& c, std::span<double> xdot);

/// OpenMP kernel, parallel over agent rows. Computes |d|^(1/(m+1)) once per
/// edge and forms the remaining powers by multiplication, so results agree
/// with the serial reference to rounding, not bit-for-bit. Rows are
/// independent, so output does not depend on the thread count.
///
/// Only valid for the modulated/EDCHO exponent pattern (m-mu)/(m+1).
void consensus_rates_parallel(const Graph& g, std::span<const double> x, std::span<const double> y0,
                              const CouplingCoefficients& c, std::span<double> xdot);

inline void consensus_rates(KernelKind kind, const Graph& g, std::span<const double> x, std::span<const double> y0,
                            const CouplingCoefficients& c, std::span<double> xdot) {
  if (kind == KernelKind::serial)
    consensus_rates_serial(g, x, y0, c, xdot);
  else
    consensus_rates_parallel(g, x, y0, c, xdot);
}

}  // namespace mdvo
