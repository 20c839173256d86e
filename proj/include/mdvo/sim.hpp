#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdvo/controller.hpp"
#include "mdvo/observer.hpp"
#include "mdvo/scenario.hpp"

namespace mdvo {

/// Non-finite state during integration.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::size_t step, std::size_t agent, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ", agent " + std::to_string(agent + 1) + ": " + what),
        step_(step),
        agent_(agent) {}
  std::size_t step() const { return step_; }
  std::size_t agent() const { return agent_; }

 private:
  std::size_t step_;
  std::size_t agent_;
};

/// One decimated sample.
struct TraceRow {
  double t = 0.0;
  std::vector<MdvoEstimate> estimates;  // per robot
  std::vector<Vec3> positions;          // leaders: shared signal s_i; followers: p_i
  std::vector<Vec3> center;             // analytic pbar^(0..m)
  std::vector<std::vector<double>> block_outputs;  // [block][i*(m+1)+mu], only when recorded
};

/// Statistics gathered at every integration step, not just decimated rows.
struct RunStats {
  std::size_t steps = 0;
  double t_end = 0.0;

  // t >= T_c
  double consensus_error_sup = 0.0;               // max_i ||p_hat_{i,0} - pbar||
  std::vector<double> derivative_error_sup;       // per mu, max_i ||p_hat_{i,mu} - pbar^(mu)||
  double label_error_sup = 0.0;                   // max_i |l_{i,0} - N_L/N|

  // t <= T_c
  std::array<double, 4> pre_deadline_spread{};    // max_{i,j} |y_{i,0} - y_{j,0}| per block

  // whole run
  std::array<std::vector<double>, 4> conservation_sup;  // max |sum_i x_{i,mu}| per block, mu
  double label_spread_sup = 0.0;                  // max_{i,j} |l_{i,0} - l_{j,0}|
  double state_magnitude_sup = 0.0;               // max |x| over all blocks

  // Time averages over t >= T_c of |X error| against the noise-free reference.
  std::vector<double> leader_x_error_mean;        // |s^X_i - xbar| per leader
  std::vector<double> follower_x_error_mean;      // |p_hat^X_{i,0} - xbar| per follower

  // Last time the consensus error exceeded settle_tolerance (0 if never).
  double settle_tolerance = 1e-3;
  double last_unsettled_time = 0.0;
};

struct SimTrace {
  Scenario scenario;  // resolved
  double theta_position = 0.0;
  double theta_label = 0.0;
  std::vector<TraceRow> rows;
  RunStats stats;
};

/// Read-only view handed to the step callback after outputs are observed
/// and before the state advances.
struct StepView {
  std::size_t step;
  double t;
  const Observer& observer;
  std::span<const MdvoEstimate> estimates;
  std::span<const FollowerState> followers;  // indexed by agent; leaders empty
  std::span<const Vec3> center;
};

struct RunOptions {
  bool record_blocks = false;
  double settle_tolerance = 1e-3;
  KernelKind kernel = KernelKind::parallel;
  std::function<void(const StepView&)> on_step;
};

/// Fixed-step explicit Euler run of the closed loop. Throws ConfigError for
/// invalid scenarios and NumericalError on a non-finite state.
SimTrace run(const Scenario& sc, const RunOptions& opts = {});

/// Independent runs, executed concurrently when OpenMP is available.
std::vector<SimTrace> run_batch(std::span<const Scenario> scenarios, const RunOptions& opts = {});

struct ErrorSample {
  double t = 0.0;
  double consensus = 0.0;  // max_i ||p_hat_{i,0} - pbar||
  double label = 0.0;      // max_i |l_{i,0} - N_L/N|
  double formation = 0.0;  // max over followers ||p_i - pbar - d_i||
  std::vector<double> follower_formation;  // per follower, agent order
};

std::vector<ErrorSample> error_series(const SimTrace& trace);

}  // namespace mdvo
