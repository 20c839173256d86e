#include "mdvo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace mdvo {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_finite(const Observer& obs, std::span<const FollowerState> followers, std::size_t step) {
  const std::size_t n = obs.size();
  for (const auto& block : obs.blocks()) {
    const auto x = block.states();
    const std::size_t cols = x.size() / n;
    for (std::size_t i = 0; i < n; ++i)
      if (!all_finite(x.subspan(i * cols, cols))) throw NumericalError(step, i, "non-finite consensus state");
  }
  for (std::size_t i = 0; i < followers.size(); ++i)
    for (const auto& v : followers[i].derivs)
      if (!v.allFinite()) throw NumericalError(step, i, "non-finite follower state");
}

}  // namespace

SimTrace run(const Scenario& input, const RunOptions& opts) {
  SimTrace trace;
  trace.scenario = resolve(input);
  const Scenario& sc = trace.scenario;
  const int m = sc.mdvo.order;
  const std::size_t n = sc.agents.size();
  const std::size_t cols = static_cast<std::size_t>(m) + 1;

  auto graph = std::make_shared<const Graph>(Graph::from_one_based_edges(n, sc.edges));
  std::vector<Role> roles;
  for (const auto& a : sc.agents) roles.push_back(a.role);

  MdvoConfig cfg = sc.mdvo;
  cfg.kernel = opts.kernel;
  Observer obs(graph, roles, cfg);
  trace.theta_position = obs.block(Channel::x).gains().theta;
  trace.theta_label = obs.block(Channel::label).gains().theta;

  const ControllerGains gains(sc.rho);
  const auto signals = make_agent_signals(sc);
  const auto references = make_reference_signals(sc);
  std::vector<NoisySignal*> noisy;
  for (const auto& s : signals)
    if (auto* p = dynamic_cast<NoisySignal*>(s.get())) noisy.push_back(p);

  std::vector<FollowerState> followers(n);
  std::vector<std::size_t> leader_ids;
  std::vector<std::size_t> follower_ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (roles[i] == Role::leader) {
      leader_ids.push_back(i);
      continue;
    }
    follower_ids.push_back(i);
    followers[i].derivs.assign(m, Vec3::Zero());
    followers[i].derivs[0] = sc.agents[i].initial_position;
    followers[i].offset = sc.agents[i].offset;
  }
  const double n_leaders = static_cast<double>(leader_ids.size());
  const double label_target = n_leaders / static_cast<double>(n);

  const auto steps = static_cast<std::size_t>(std::llround(sc.t_max / sc.dt));
  const auto deadline_step = static_cast<std::size_t>(std::ceil(sc.mdvo.t_c / sc.dt - 1e-9));

  RunStats& st = trace.stats;
  st.settle_tolerance = opts.settle_tolerance;
  st.derivative_error_sup.assign(cols, 0.0);
  for (auto& c : st.conservation_sup) c.assign(cols, 0.0);
  std::vector<double> leader_x_sum(leader_ids.size(), 0.0);
  std::vector<double> follower_x_sum(follower_ids.size(), 0.0);
  std::size_t averaged_steps = 0;

  SignalTable table(n, std::vector<Vec3>(cols, Vec3::Zero()));
  std::vector<Vec3> center(cols, Vec3::Zero());
  std::vector<MdvoEstimate> estimates(n);
  std::vector<Vec3> controls(n, Vec3::Zero());

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    if (k % sc.noise_hold_steps == 0)
      for (auto* p : noisy) p->resample();
    for (auto i : leader_ids)
      for (int nu = 0; nu <= m; ++nu) table[i][nu] = signals[i]->eval(t, nu);
    for (int nu = 0; nu <= m; ++nu) {
      Vec3 acc = Vec3::Zero();
      for (auto i : leader_ids) acc += references[i]->eval(t, nu);
      center[nu] = acc / n_leaders;
    }

    obs.observe(t, table);
    for (std::size_t i = 0; i < n; ++i) obs.estimate_into(i, estimates[i]);

    // Statistics.
    const bool after_deadline = k >= deadline_step;
    double l_lo = estimates[0].l_hat;
    double l_hi = l_lo;
    double consensus_err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& e = estimates[i];
      l_lo = std::min(l_lo, e.l_hat);
      l_hi = std::max(l_hi, e.l_hat);
      consensus_err = std::max(consensus_err, (e.p_hat[0] - center[0]).norm());
      if (after_deadline) {
        for (std::size_t mu = 0; mu < cols; ++mu)
          st.derivative_error_sup[mu] = std::max(st.derivative_error_sup[mu], (e.p_hat[mu] - center[mu]).norm());
        st.label_error_sup = std::max(st.label_error_sup, std::abs(e.l_hat - label_target));
      }
    }
    st.label_spread_sup = std::max(st.label_spread_sup, l_hi - l_lo);
    if (after_deadline) st.consensus_error_sup = std::max(st.consensus_error_sup, consensus_err);
    if (consensus_err > st.settle_tolerance) st.last_unsettled_time = t;
    for (std::size_t b = 0; b < 4; ++b) {
      const auto& block = obs.blocks()[b];
      if (k <= deadline_step) st.pre_deadline_spread[b] = std::max(st.pre_deadline_spread[b], block.output_spread());
      const auto x = block.states();
      for (std::size_t mu = 0; mu < cols; ++mu) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          sum += x[i * cols + mu];
          st.state_magnitude_sup = std::max(st.state_magnitude_sup, std::abs(x[i * cols + mu]));
        }
        st.conservation_sup[b][mu] = std::max(st.conservation_sup[b][mu], std::abs(sum));
      }
    }
    if (after_deadline) {
      for (std::size_t j = 0; j < leader_ids.size(); ++j)
        leader_x_sum[j] += std::abs(table[leader_ids[j]][0].x() - center[0].x());
      for (std::size_t j = 0; j < follower_ids.size(); ++j)
        follower_x_sum[j] += std::abs(estimates[follower_ids[j]].p_hat[0].x() - center[0].x());
      ++averaged_steps;
    }

    if (opts.on_step) opts.on_step(StepView{k, t, obs, estimates, followers, center});

    if (k % sc.decimation == 0 || k == steps) {
      TraceRow row;
      row.t = t;
      row.estimates = estimates;
      row.positions.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        row.positions[i] = roles[i] == Role::leader ? table[i][0] : followers[i].derivs[0];
      row.center = center;
      if (opts.record_blocks)
        for (const auto& block : obs.blocks()) row.block_outputs.emplace_back(block.outputs().begin(), block.outputs().end());
      trace.rows.push_back(std::move(row));
    }

    if (k == steps) {
      st.steps = k;
      st.t_end = t;
      break;
    }

    for (auto i : follower_ids) controls[i] = control(followers[i], estimates[i], gains);
    obs.advance(sc.dt);
    for (auto i : follower_ids) integrate(followers[i], controls[i], sc.dt);
    check_finite(obs, followers, k + 1);
  }

  if (averaged_steps > 0) {
    for (double v : leader_x_sum) st.leader_x_error_mean.push_back(v / static_cast<double>(averaged_steps));
    for (double v : follower_x_sum) st.follower_x_error_mean.push_back(v / static_cast<double>(averaged_steps));
  }
  return trace;
}

std::vector<SimTrace> run_batch(std::span<const Scenario> scenarios, const RunOptions& opts) {
  std::vector<SimTrace> out(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  const auto count = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i] = run(scenarios[i], opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

std::vector<ErrorSample> error_series(const SimTrace& trace) {
  const auto& sc = trace.scenario;
  const double label_target = static_cast<double>(sc.leader_count()) / static_cast<double>(sc.agents.size());
  std::vector<ErrorSample> out;
  out.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    ErrorSample s;
    s.t = row.t;
    for (std::size_t i = 0; i < sc.agents.size(); ++i) {
      const auto& e = row.estimates[i];
      s.consensus = std::max(s.consensus, (e.p_hat[0] - row.center[0]).norm());
      s.label = std::max(s.label, std::abs(e.l_hat - label_target));
      if (sc.agents[i].role == Role::follower) {
        const double f = (row.positions[i] - row.center[0] - sc.agents[i].offset).norm();
        s.follower_formation.push_back(f);
        s.formation = std::max(s.formation, f);
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mdvo
