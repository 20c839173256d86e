#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "mdvo/observer.hpp"
#include "mdvo/scenario.hpp"

using namespace mdvo;

namespace {

MdvoConfig config(int m, std::vector<double> bounds) {
  MdvoConfig cfg;
  cfg.order = m;
  cfg.k.assign(m + 1, 2.0);
  if (m == 3) cfg.k = {7.5, 19.25, 17.75, 7.0};
  cfg.bounds = std::move(bounds);
  cfg.t_c = cfg.t_min = 1.0;
  return cfg;
}

SignalTable constant_table(std::size_t n, int m, const std::vector<Vec3>& p) {
  SignalTable t(n, std::vector<Vec3>(m + 1, Vec3::Zero()));
  for (std::size_t i = 0; i < p.size(); ++i) t[i][0] = p[i];
  return t;
}

}  // namespace

TEST_CASE("payload starts at zero and has four entries for any order") {
  for (int m : {1, 3}) {
    auto g = std::make_shared<const Graph>(Graph::path(3));
    Observer obs(g, {Role::leader, Role::follower, Role::follower}, config(m, std::vector<double>(m + 2, 1.0)));
    obs.observe(0.0, constant_table(3, m, {Vec3(1, 2, 3)}));
    const auto payload = obs.broadcast_payload(1);
    CHECK(payload.size() == 4);
    for (double v : payload) CHECK(v == 0.0);
  }
}

TEST_CASE("single leader observes itself after the deadline") {
  auto g = std::make_shared<const Graph>(Graph(1));
  const Vec3 p(1.5, -2.0, 0.25);
  Observer obs(g, {Role::leader}, config(3, {2.0, 0, 0, 0, 0}));
  const auto table = constant_table(1, 3, {p});
  const double dt = 1e-4;
  for (int k = 0; k <= 12000; ++k) {
    obs.observe(k * dt, table);
    if (k * dt >= 1.0) {
      const auto payload = obs.broadcast_payload(0);
      CHECK(payload[0] == doctest::Approx(p.x()).epsilon(1e-12));
      CHECK(payload[1] == doctest::Approx(p.y()).epsilon(1e-12));
      CHECK(payload[3] == doctest::Approx(1.0).epsilon(1e-12));
      break;
    }
    obs.advance(dt);
  }
}

TEST_CASE("ratio rule and the N_max clamp") {
  // Raw mode seeded on the consensus manifold: every y equals the average.
  auto g = std::make_shared<const Graph>(Graph::complete(8));
  std::vector<Role> roles(8, Role::follower);
  std::fill_n(roles.begin(), 3, Role::leader);
  auto cfg = config(1, {1, 1, 1});
  cfg.mode = ConsensusMode::edcho_raw;
  Observer obs(g, roles, cfg);
  std::vector<Vec3> p(3, Vec3(4.0, 2.0, 0.0));
  std::array<std::vector<double>, 4> x;
  for (auto& v : x) v.assign(16, 0.0);
  const double avg[4] = {1.5, 0.75, 0.0, 0.375};
  for (std::size_t i = 0; i < 8; ++i) {
    const bool leader = i < 3;
    const double s[4] = {leader ? 4.0 : 0.0, leader ? 2.0 : 0.0, 0.0, leader ? 1.0 : 0.0};
    for (int c = 0; c < 4; ++c) x[c][i * 2] = s[c] - avg[c];
  }
  for (int c = 0; c < 4; ++c) obs.set_initial_state(static_cast<Channel>(c), x[c]);
  obs.observe(0.0, constant_table(8, 1, p));
  for (std::size_t i = 0; i < 8; ++i) {
    const auto e = obs.estimate(i);
    CHECK(e.l_hat == doctest::Approx(0.375));
    CHECK(e.raw_y[0].x() == doctest::Approx(1.5));
    CHECK(e.p_hat[0].x() == doctest::Approx(4.0));
    CHECK(e.p_hat[0].y() == doctest::Approx(2.0));
    CHECK(e.p_hat[0].z() == doctest::Approx(0.0));
  }

  // l = 0 at the leader: divisor is 1/N_max.
  auto g2 = std::make_shared<const Graph>(Graph::path(2));
  auto cfg2 = config(1, {1, 1, 1});
  cfg2.mode = ConsensusMode::edcho_raw;
  Observer two(g2, {Role::leader, Role::follower}, cfg2);
  two.set_initial_state(Channel::label, std::vector<double>{1.0, 0.0, -1.0, 0.0});
  two.observe(0.0, constant_table(2, 1, {Vec3(1.0, 0.0, 0.0)}));
  const auto e = two.estimate(0);
  CHECK(e.l_hat == 0.0);
  CHECK(e.p_hat[0].x() == doctest::Approx(1000.0));
}

TEST_CASE("block configuration") {
  auto g = std::make_shared<const Graph>(Graph::path(2));
  const auto kappa = ModulatingFunction::build(1);
  auto blocks = configure_blocks(config(1, {1, 1, 1}), g, kappa);
  REQUIRE(blocks.size() == 4);
  for (int c = 0; c < 3; ++c) CHECK(blocks[c].gains().theta == doctest::Approx(10.0));
  CHECK(blocks[3].gains().theta == doctest::Approx(6.0));

  auto raw = config(1, {1, 1, 1});
  raw.mode = ConsensusMode::edcho_raw;
  for (const auto& b : configure_blocks(raw, g, kappa)) CHECK(b.gains().theta == 1.0);

  CHECK_THROWS_AS(configure_blocks(config(1, {0, 0, 0}), g, kappa), std::invalid_argument);
  CHECK_THROWS_AS(configure_blocks(config(1, {1, -1, 1}), g, kappa), std::invalid_argument);
  auto small = config(1, {1, 1, 1});
  small.n_max = 1;
  CHECK_THROWS_AS(configure_blocks(small, g, kappa), std::invalid_argument);
  auto early = config(1, {1, 1, 1});
  early.t_c = 0.5;
  CHECK_THROWS_AS(configure_blocks(early, g, kappa), std::invalid_argument);

  const auto a = configure_blocks(config(1, {1, 2, 3}), g, kappa);
  const auto b = configure_blocks(config(1, {1, 2, 3}), g, kappa);
  for (int c = 0; c < 4; ++c) {
    CHECK(a[c].gains().theta == b[c].gains().theta);
    const auto ca = a[c].coefficients(), cb = b[c].coefficients();
    CHECK(std::equal(ca.gain.begin(), ca.gain.end(), cb.gain.begin()));
  }
}

TEST_CASE("estimates are invariant under follower relabeling") {
  const auto sc = resolve(scenario_herding());
  const std::size_t n = sc.agents.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::swap(perm[3], perm[7]);
  std::swap(perm[4], perm[5]);

  std::vector<Graph::Edge> permuted;
  for (auto [a, b] : sc.edges) permuted.emplace_back(perm[a - 1] + 1, perm[b - 1] + 1);
  auto g1 = std::make_shared<const Graph>(Graph::from_one_based_edges(n, sc.edges));
  auto g2 = std::make_shared<const Graph>(Graph::from_one_based_edges(n, permuted));
  std::vector<Role> roles;
  for (const auto& a : sc.agents) roles.push_back(a.role);
  auto cfg = sc.mdvo;
  cfg.kernel = KernelKind::serial;
  Observer o1(g1, roles, cfg), o2(g2, roles, cfg);

  const auto refs = make_reference_signals(sc);
  SignalTable t1(n, std::vector<Vec3>(4, Vec3::Zero())), t2 = t1;
  const double dt = 1e-5;
  for (int k = 0; k <= 60000; ++k) {
    const double t = k * dt;
    for (std::size_t i = 0; i < n; ++i)
      if (refs[i])
        for (int nu = 0; nu <= 3; ++nu) t1[i][nu] = t2[perm[i]][nu] = refs[i]->eval(t, nu);
    o1.observe(t, t1);
    o2.observe(t, t2);
    if (k % 10000 == 0)
      for (std::size_t i = 0; i < n; ++i) {
        const auto e1 = o1.estimate(i), e2 = o2.estimate(perm[i]);
        CHECK((e1.p_hat[0] - e2.p_hat[0]).norm() <= 1e-9);
        CHECK(e1.l_hat == doctest::Approx(e2.l_hat).epsilon(1e-9));
      }
    o1.advance(dt);
    o2.advance(dt);
  }
}
