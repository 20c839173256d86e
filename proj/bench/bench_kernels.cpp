// Serial reference vs OpenMP consensus-rate kernels on random graphs.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "mdvo/kernels.hpp"

namespace {

constexpr int kOrder = 3;

struct Fixture {
  mdvo::Graph graph;
  std::vector<double> x, y0, xdot, gain, exponent;

  Fixture(std::size_t n, double degree)
      : graph(random_graph(n, degree)),
        x(n * (kOrder + 1)),
        y0(n),
        xdot(n * (kOrder + 1)) {
    std::mt19937_64 rng(42);
    std::normal_distribution<double> normal;
    for (auto& v : x) v = normal(rng);
    for (auto& v : y0) v = normal(rng);
    for (int mu = 0; mu <= kOrder; ++mu) {
      gain.push_back(1.0 + mu);
      exponent.push_back(static_cast<double>(kOrder - mu) / (kOrder + 1));
    }
  }

  mdvo::CouplingCoefficients coefficients() const { return {kOrder, gain, exponent}; }

  static mdvo::Graph random_graph(std::size_t n, double degree) {
    std::mt19937_64 rng(7);
    std::bernoulli_distribution edge(degree / static_cast<double>(n - 1));
    std::vector<mdvo::Graph::Edge> edges;
    for (std::size_t i = 1; i < n; ++i) edges.emplace_back(i - 1, i);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 2; j < n; ++j)
        if (edge(rng)) edges.emplace_back(i, j);
    return mdvo::Graph::from_edges(n, edges);
  }
};

void run(benchmark::State& state, mdvo::KernelKind kind) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Fixture f(n, 16.0);
  const auto c = f.coefficients();
  for (auto _ : state) {
    mdvo::consensus_rates(kind, f.graph, f.x, f.y0, c, f.xdot);
    benchmark::DoNotOptimize(f.xdot.data());
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

void BM_RatesSerial(benchmark::State& state) { run(state, mdvo::KernelKind::serial); }
void BM_RatesParallel(benchmark::State& state) { run(state, mdvo::KernelKind::parallel); }

BENCHMARK(BM_RatesSerial)->RangeMultiplier(4)->Range(64, 16384)->UseRealTime();
BENCHMARK(BM_RatesParallel)->RangeMultiplier(4)->Range(64, 16384)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
