// mdvo: run the simulator, inspect modulating functions and gains.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdvo/config.hpp"
#include "mdvo/consensus.hpp"
#include "mdvo/controller.hpp"
#include "mdvo/io.hpp"
#include "mdvo/modfunc.hpp"
#include "mdvo/scenario.hpp"
#include "mdvo/sim.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct RunArgs {
  std::string scenario;
  std::string config;
  std::optional<double> dt, t_max, t_c, t_min, noise, pole;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> decimation, noise_hold;
  std::string out_dir = ".";
  bool edcho_raw = false;
  bool blocks = false;
  std::string kernel = "parallel";
};

struct CheckArgs {
  int order = 1;
  std::vector<double> gains;
  std::vector<double> bounds;
  double t_min = 0.5;
  std::vector<double> rho;
  double pole = -1.0;
};

std::string join(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += mdvo::format_double(v[i]);
  }
  return s;
}

void print_kappa(const mdvo::ModulatingFunction& kappa) {
  const int m = kappa.order();
  std::cout << "order m = " << m << "\n";
  std::cout << "kappa(t) on [0,1] =";
  const auto c = kappa.coefficients();
  bool first = true;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0.0) continue;
    std::cout << (first ? " " : (c[j] < 0 ? " - " : " + "));
    std::cout << mdvo::format_double(first ? c[j] : std::abs(c[j]));
    if (j > 0) std::cout << " t^" << j;
    first = false;
  }
  std::cout << "\ncoefficients (ascending) = [" << join(c) << "]\n";
  for (int mu = 0; mu <= m + 1; ++mu) std::cout << "K_" << mu << " = " << mdvo::format_double(kappa.sup_derivative(mu)) << "\n";
  const auto res = kappa.boundary_residuals();
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  std::cout << "boundary residuals = [" << join(res) << "]\n";
  std::cout << "max |residual| = " << mdvo::format_double(worst) << "\n";
  std::cout << "kappa^(" << m + 1 << ")(1-) = " << mdvo::format_double(kappa.top_derivative_at_one())
            << (kappa.top_derivative_at_one() != 0.0 ? "  (jumps to 0 past t = 1)" : "") << "\n";
}

int cmd_check_kappa(int order) {
  print_kappa(mdvo::ModulatingFunction::build(order));
  return 0;
}

int cmd_check(const CheckArgs& a) {
  const auto kappa = mdvo::ModulatingFunction::build(a.order);
  print_kappa(kappa);
  bool ok = true;

  std::vector<double> bounds = a.bounds;
  std::string source = "--bounds";
  if (bounds.empty()) {
    auto sc = mdvo::scenario_herding();
    sc.mdvo.order = a.order;
    sc.mdvo.k.assign(a.order + 1, 1.0);
    sc.rho.clear();
    bounds = mdvo::resolve(sc).mdvo.bounds;
    source = "herding leader motion";
  }
  std::cout << "bounds L_0..L_" << a.order + 1 << " (" << source << ") = [" << join(bounds) << "]\n";
  std::cout << "T_min = " << mdvo::format_double(a.t_min) << "\n";
  const double theta = mdvo::compute_theta(kappa, bounds, a.t_min);
  std::cout << "theta (position blocks) = " << mdvo::format_double(theta) << "\n";
  std::cout << "theta (label block) = " << mdvo::format_double(mdvo::label_theta(kappa, a.t_min)) << "\n";
  if (!(theta > 0.0)) {
    std::cout << "theta positivity: FAIL\n";
    ok = false;
  }

  if (!a.gains.empty()) {
    mdvo::ConsensusGains g{a.gains, theta > 0.0 ? theta : 1.0};
    bool gains_ok = static_cast<int>(a.gains.size()) == a.order + 1;
    for (double k : a.gains) gains_ok = gains_ok && k > 0.0;
    std::cout << "consensus gains k = [" << join(a.gains) << "]: "
              << (gains_ok ? "PASS (m+1 positive gains)" : "FAIL (need m+1 positive gains)") << "\n";
    ok = ok && gains_ok;
  }

  if (a.order >= 1) {
    std::vector<double> rho = a.rho;
    if (rho.empty()) {
      const auto g = mdvo::pole_placement(a.order, a.pole);
      rho.assign(g.rho().begin(), g.rho().end());
    }
    const bool positive = std::all_of(rho.begin(), rho.end(), [](double r) { return r > 0.0; });
    const bool hurwitz = static_cast<int>(rho.size()) == a.order && mdvo::is_hurwitz(rho);
    std::cout << "controller rho = [" << join(rho) << "]: Hurwitz " << (hurwitz && positive ? "PASS" : "FAIL") << "\n";
    ok = ok && hurwitz && positive;
  }
  return ok ? 0 : kExitConfig;
}

int cmd_run(const RunArgs& a) {
  mdvo::Scenario sc;
  if (!a.config.empty())
    sc = mdvo::load_scenario_file(a.config);
  else
    sc = mdvo::builtin_scenario(a.scenario.empty() ? "herding" : a.scenario);

  if (a.dt) sc.dt = *a.dt;
  if (a.t_max) sc.t_max = *a.t_max;
  if (a.t_c) sc.mdvo.t_c = *a.t_c;
  if (a.t_min) sc.mdvo.t_min = *a.t_min;
  if (a.seed) sc.seed = *a.seed;
  if (a.noise) sc.noise_stddev = *a.noise;
  if (a.noise_hold) sc.noise_hold_steps = *a.noise_hold;
  if (a.decimation) sc.decimation = *a.decimation;
  if (a.pole) {
    sc.pole = *a.pole;
    sc.rho.clear();
  }
  if (a.edcho_raw) sc.mdvo.mode = mdvo::ConsensusMode::edcho_raw;

  mdvo::RunOptions opts;
  opts.record_blocks = a.blocks;
  opts.kernel = a.kernel == "serial" ? mdvo::KernelKind::serial : mdvo::KernelKind::parallel;
  const auto trace = mdvo::run(sc, opts);
  const std::string base = trace.scenario.name + (a.edcho_raw ? "_edcho_raw" : "");
  const auto files = mdvo::write_outputs(trace, a.out_dir, base, a.blocks);

  const auto& st = trace.stats;
  std::cout << "scenario " << trace.scenario.name << ": " << st.steps << " steps of dt = "
            << mdvo::format_double(trace.scenario.dt) << " s\n";
  std::cout << "theta position = " << mdvo::format_double(trace.theta_position)
            << ", label = " << mdvo::format_double(trace.theta_label) << "\n";
  std::cout << "after T_c: consensus error sup = " << mdvo::format_double(st.consensus_error_sup)
            << ", label error sup = " << mdvo::format_double(st.label_error_sup) << "\n";
  for (const auto& f : files) std::cout << "wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prescribed-time distributed observer and formation tracking simulator"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate a scenario and write CSV traces plus a metadata sidecar");
  auto* scen_opt = run->add_option("--scenario", run_args.scenario, "Built-in scenario (herding, target)");
  run->add_option("--config", run_args.config, "Scenario JSON file or a previous run's _meta.txt")
      ->excludes(scen_opt);
  run->add_option("--dt", run_args.dt, "Integration step in seconds (default 1e-5)");
  run->add_option("--t-max", run_args.t_max, "Horizon in seconds");
  run->add_option("--tc", run_args.t_c, "Deadline T_c in seconds");
  run->add_option("--tmin", run_args.t_min, "Minimum deadline T_min in seconds");
  run->add_option("--seed", run_args.seed, "Noise seed");
  run->add_option("--noise", run_args.noise, "Leader measurement noise stddev (target scenarios)");
  run->add_option("--pole", run_args.pole, "Controller pole; replaces the scenario's rho with (s - pole)^m gains");
  run->add_option("--noise-hold", run_args.noise_hold, "Hold each noise sample for N steps (default 1)");
  run->add_option("--decimation", run_args.decimation, "Write one row every N steps");
  run->add_option("--out", run_args.out_dir, "Output directory");
  run->add_flag("--edcho-raw", run_args.edcho_raw, "Unmodulated comparison run (theta = 1, no kappa)");
  run->add_flag("--blocks", run_args.blocks, "Also write raw block outputs y_{i,mu}");
  run->add_option("--kernel", run_args.kernel, "Consensus kernel")->check(CLI::IsMember({"serial", "parallel"}));

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "Report kappa, K table, theta and gain validations");
  check->add_option("--order", check_args.order, "Protocol order m")->required();
  check->add_option("--gains", check_args.gains, "Consensus gains k_0..k_m")->delimiter(',');
  check->add_option("--bounds", check_args.bounds, "Leader bounds L_0..L_{m+1}")->delimiter(',');
  check->add_option("--tmin", check_args.t_min, "Minimum deadline T_min");
  check->add_option("--rho", check_args.rho, "Controller gains rho_0..rho_{m-1}")->delimiter(',');
  check->add_option("--pole", check_args.pole, "Controller pole for the default rho");

  int kappa_order = 1;
  auto* check_kappa = app.add_subcommand("check-kappa", "Print kappa coefficients, K table and residuals");
  check_kappa->add_option("--order", kappa_order, "Order m")->required();

  std::string show;
  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");
  list->add_option("--show", show, "Print one built-in scenario as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args);
    if (*check) return cmd_check(check_args);
    if (*check_kappa) return cmd_check_kappa(kappa_order);
    if (*list) {
      if (!show.empty()) {
        std::cout << mdvo::scenario_to_json(mdvo::builtin_scenario(show)).dump(2) << "\n";
        return 0;
      }
      std::cout << "herding  3 shepherds, 5 sheep in a circular formation, m = 3, T_c = 0.5\n";
      std::cout << "target   3 noisy target detectors, 5 followers, m = 3, T_c = 0.5\n";
      return 0;
    }
  } catch (const mdvo::ConfigError& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mdvo::NumericalError& e) {
    std::cerr << "error: numerical: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
