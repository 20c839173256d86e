// Acceptance suite: one PASS/FAIL line per primary criterion.
//
// Criteria listed in kKnownRed are reported as FAIL with a "known" marker
// and do not fail the process; any other FAIL, or a known-red criterion
// that starts passing, gives a nonzero exit so the list stays honest.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mdvo/io.hpp"
#include "mdvo/modfunc.hpp"
#include "mdvo/sim.hpp"
#include "oracles/oracles.hpp"

using namespace mdvo;

namespace {

// Pinned tolerances (dt = 1e-5 unless noted).
constexpr double kCoeffTol = 1e-12;
constexpr double kBoundaryTol = 1e-12;
constexpr double kGramianTol = 1e-8;
constexpr double kLabelTol = 1e-3;
constexpr double kConsensusTol = 5e-3;
constexpr double kFormationTol = 1e-2;
constexpr double kEnvelopeSlack = 1e-3;
constexpr double kDerivativeTol[4] = {5e-3, 5e-5, 0.3, 1.1e3};
constexpr double kRatioLo = 0.48, kRatioHi = 0.68;
constexpr double kConservationTol = 1e-8;
constexpr double kStartSpreadPerDt = 5.0;
constexpr double kRefineLo = 0.3, kRefineHi = 0.7;
constexpr double kSettleTol = 1e-3;

const std::set<std::string> kKnownRed = {"target-attenuation", "step-refinement"};

struct Outcome {
  bool pass;
  std::string detail;
};

int unexpected = 0;

void report(const std::string& id, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool known = kKnownRed.count(id) > 0;
  const char* status = o.pass ? (known ? "PASS (listed as known red; update the list)" : "PASS")
                              : (known ? "FAIL (known, documented)" : "FAIL");
  if (o.pass == known) ++unexpected;
  std::printf("%-22s %s  [%.2fs] %s\n", id.c_str(), status, secs, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string all_csv(const SimTrace& tr) {
  return estimates_csv(tr) + positions_csv(tr) + center_csv(tr) + errors_csv(tr);
}

}  // namespace

int main() {
  report("modfunc-closed-form", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto k1 = ModulatingFunction::build(1);
    const double expect[4] = {0, 0, 3, -2};
    double coeff = 0.0;
    for (int j = 0; j < 4; ++j) coeff = std::max(coeff, std::abs(k1.coefficients()[j] - expect[j]));
    for (double t = 0.0; t <= 1.0; t += 0.01) {
      coeff = std::max(coeff, std::abs(k1.eval_derivative(1, t) - (6 * t - 6 * t * t)));
      coeff = std::max(coeff, std::abs(k1.eval_derivative(2, t) - (6 - 12 * t)));
    }
    double bc = 0.0;
    for (int m = 0; m <= 3; ++m)
      for (double r : ModulatingFunction::build(m).boundary_residuals()) bc = std::max(bc, std::abs(r));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Outcome{coeff <= kCoeffTol && bc <= kBoundaryTol && secs < 1.0,
                   fmt("coefficient err %.2e, boundary residual %.2e, %.3fs", coeff, bc, secs)};
  });

  report("gramian-oracle", [] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const auto expect = oracle::gramian_kappa(m);
      const auto kappa = ModulatingFunction::build(m);
      const auto c = kappa.coefficients();
      for (std::size_t j = 0; j < c.size(); ++j) worst = std::max(worst, std::abs(c[j] - expect[j]));
      worst = std::max(worst, (oracle::gramian_closed_form(m) - oracle::gramian_quadrature(m)).cwiseAbs().maxCoeff());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Outcome{worst <= kGramianTol && secs < 5.0, fmt("max disagreement %.2e, %.3fs", worst, secs)};
  });

  const Scenario herding = scenario_herding();
  RunOptions opts;
  opts.settle_tolerance = kSettleTol;
  const SimTrace herd = run(herding, opts);
  const auto series = error_series(herd);

  report("herding", [&] {
    const auto& st = herd.stats;
    const double final_formation = series.back().formation;
    // Envelope: the sup over successive 0.5 s windows after t = 1 never grows.
    std::vector<double> window_sup;
    for (const auto& s : series) {
      if (s.t < 1.0) continue;
      const auto w = static_cast<std::size_t>((s.t - 1.0) / 0.5 + 1e-9);
      if (window_sup.size() <= w) window_sup.resize(w + 1, 0.0);
      window_sup[w] = std::max(window_sup[w], s.formation);
    }
    bool monotone = true;
    for (std::size_t w = 1; w < window_sup.size(); ++w)
      monotone = monotone && window_sup[w] <= window_sup[w - 1] + kEnvelopeSlack;
    const bool ok = st.label_error_sup <= kLabelTol && st.consensus_error_sup <= kConsensusTol &&
                    final_formation <= kFormationTol && monotone;
    return Outcome{ok, fmt("label err %.2e, consensus err %.2e, formation(t_max) %.2e", st.label_error_sup,
                           st.consensus_error_sup, final_formation) +
                           (monotone ? ", envelope decays" : ", envelope grows")};
  });

  report("derivative-tracking", [&] {
    const auto& d = herd.stats.derivative_error_sup;
    bool ok = d.size() == 4;
    std::string detail;
    for (std::size_t mu = 1; mu < d.size(); ++mu) {
      ok = ok && d[mu] <= kDerivativeTol[mu];
      detail += fmt("mu=%.0f: %.3g <= %.3g; ", static_cast<double>(mu), d[mu], kDerivativeTol[mu]);
    }
    return Outcome{ok, detail};
  });

  report("target-attenuation", [] {
    std::vector<Scenario> runs;
    for (std::uint64_t seed : {1, 2, 3}) runs.push_back(scenario_target(1.0, seed));
    const auto traces = run_batch(runs);
    double leader = 0.0, follower = 0.0;
    for (const auto& tr : traces) {
      for (double v : tr.stats.leader_x_error_mean) leader += v / tr.stats.leader_x_error_mean.size();
      for (double v : tr.stats.follower_x_error_mean) follower += v / tr.stats.follower_x_error_mean.size();
    }
    const double ratio = follower / leader;
    return Outcome{ratio >= kRatioLo && ratio <= kRatioHi,
                   fmt("leader mean |err| %.4f, follower %.4f, ratio %.4f", leader / 3, follower / 3, ratio)};
  });

  report("conservation", [&] {
    double worst = 0.0;
    for (const auto& block : herd.stats.conservation_sup)
      for (double v : block) worst = std::max(worst, v);
    return Outcome{worst <= kConservationTol, fmt("max |sum_i x_{i,mu}| = %.2e", worst)};
  });

  report("consensus-from-start", [&] {
    const double tol = kStartSpreadPerDt * herding.dt;
    double worst = 0.0;
    for (double v : herd.stats.pre_deadline_spread) worst = std::max(worst, v);
    return Outcome{worst <= tol, fmt("max spread on [0, T_c] %.2e (tol %.1e)", worst, tol)};
  });

  report("edcho-raw", [] {
    auto sc = scenario_herding();
    sc.name = "edcho_raw";
    const Vec3 spots[3] = {Vec3(-2.0, 1.0, 0.0), Vec3(3.0, 0.5, 0.0), Vec3(0.5, 4.0, 1.0)};
    int k = 0;
    for (auto& a : sc.agents)
      if (a.role == Role::leader) {
        a.trajectory = TrajectorySpec{};
        a.trajectory.offset = spots[k++];
      }
    sc.mdvo.mode = ConsensusMode::edcho_raw;
    sc.t_max = 20.0;
    RunOptions o;
    o.settle_tolerance = kSettleTol;
    const auto tr = run(sc, o);
    const double final_err = error_series(tr).back().consensus;
    const bool converged = final_err <= kSettleTol && tr.stats.last_unsettled_time < sc.t_max - 1.0;
    return Outcome{converged, fmt("settled (err <= %.0e) after t = %.3f s; final err %.2e", kSettleTol,
                                  tr.stats.last_unsettled_time, final_err)};
  });

  report("determinism", [&] {
    const auto again = run(herding, opts);
    const bool same = all_csv(again) == all_csv(herd);
    return Outcome{same, same ? "two runs byte-identical" : "CSV differs between runs"};
  });

  report("step-refinement", [&] {
    auto half = herding;
    half.dt = herding.dt / 2;
    const auto fine = run(half, opts);
    const double ratio = fine.stats.consensus_error_sup / herd.stats.consensus_error_sup;
    return Outcome{ratio >= kRefineLo && ratio <= kRefineHi,
                   fmt("sup err dt=1e-5: %.3e, dt=5e-6: %.3e, ratio %.3f", herd.stats.consensus_error_sup,
                       fine.stats.consensus_error_sup, ratio)};
  });

  std::printf("%s\n", unexpected == 0 ? "acceptance: all criteria as expected" : "acceptance: unexpected result");
  return unexpected == 0 ? 0 : 1;
}
