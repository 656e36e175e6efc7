#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "contilab/core/rng.hpp"
#include "contilab/envs/goal_mdp.hpp"
#include "contilab/mdp/belief.hpp"
#include "contilab/mdp/tabular.hpp"

using namespace contilab;

namespace {

TabularMdp random_mdp(std::uint64_t seed, std::size_t s, std::size_t a, double concentration_states) {
  TabularMdp m(s, a, 0.9);
  Rng rng(RngStream{seed, 0});
  for (std::size_t r = 0; r < s * a; ++r) {
    double sum = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      m.p[r * s + k] = rng.gamma(concentration_states);
      sum += m.p[r * s + k];
    }
    for (std::size_t k = 0; k < s; ++k) m.p[r * s + k] /= sum;
  }
  set_goal_reward(m, 0);
  return m;
}

}  // namespace

TEST_CASE("value iteration examples") {
  SUBCASE("single state") {
    TabularMdp m(1, 1, 0.9);
    m.prob(0, 0, 0) = 1.0;
    m.reward(0, 0, 0) = 1.0;
    const auto vi = value_iteration(m, 1e-10);
    CHECK(vi.q[0] == doctest::Approx(10.0).epsilon(1e-9));
  }
  SUBCASE("two-state chain") {
    TabularMdp m(2, 2, 0.9);
    m.prob(0, 0, 0) = 1.0;
    m.prob(0, 1, 1) = 1.0;
    m.prob(1, 0, 1) = 1.0;
    m.prob(1, 1, 0) = 1.0;
    set_goal_reward(m, 1);
    const auto q = value_iteration(m, 1e-10).q;
    // V1 = 1 / (1 - g) = 10, V0 = 1 + g V1 = 10.
    CHECK(q[0] == doctest::Approx(9.0).epsilon(1e-9));
    CHECK(q[1] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(q[2] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(q[3] == doctest::Approx(9.0).epsilon(1e-9));
  }
  SUBCASE("random MDPs: residual and contraction") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto m = random_mdp(seed, 10, 3, 0.1);
      const auto vi = value_iteration(m, 1e-8);
      CHECK(bellman_residual(m, vi.q) < 1e-8);
      for (std::size_t i = 1; i < vi.gaps.size(); ++i) CHECK(vi.gaps[i] <= 0.9 * vi.gaps[i - 1] + 1e-12);
    }
  }
  SUBCASE("non-stochastic rows are rejected") {
    TabularMdp m(2, 1, 0.9);
    m.prob(0, 0, 0) = 0.7;
    m.prob(1, 0, 1) = 1.0;
    CHECK_THROWS_AS(value_iteration(m), std::invalid_argument);
  }
}

TEST_CASE("greedy stationary distribution") {
  SUBCASE("deterministic two-cycle") {
    TabularMdp m(2, 1, 0.9);
    m.prob(0, 0, 1) = 1.0;
    m.prob(1, 0, 0) = 1.0;
    const auto d = greedy_stationary_distribution(m, QTable(2, 0.0));
    CHECK(d[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("self loops keep the uniform start") {
    TabularMdp m(4, 1, 0.9);
    for (std::size_t s = 0; s < 4; ++s) m.prob(s, 0, s) = 1.0;
    for (double x : greedy_stationary_distribution(m, QTable(4, 0.0))) CHECK(x == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("irreducible chain matches the left eigenvector") {
    for (std::uint64_t seed = 10; seed < 15; ++seed) {
      const auto m = random_mdp(seed, 10, 3, 1.0);
      const auto q = value_iteration(m).q;
      const auto pi = greedy_policy(m, q);
      Eigen::MatrixXd p(10, 10);
      for (std::size_t s = 0; s < 10; ++s) {
        for (std::size_t k = 0; k < 10; ++k) p(s, k) = m.prob(s, pi[s], k);
      }
      Eigen::EigenSolver<Eigen::MatrixXd> es(p.transpose());
      Eigen::Index best = 0;
      for (Eigen::Index i = 0; i < 10; ++i) {
        if (std::abs(es.eigenvalues()(i) - 1.0) < std::abs(es.eigenvalues()(best) - 1.0)) best = i;
      }
      Eigen::VectorXd v = es.eigenvectors().col(best).real();
      v /= v.sum();
      const auto d = greedy_stationary_distribution(m, q);
      CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
      for (std::size_t s = 0; s < 10; ++s) CHECK(std::abs(d[s] - v(s)) < 1e-8);
    }
  }
}

TEST_CASE("goal reward scaling") {
  SUBCASE("uniform chain has goal mass one tenth") {
    TabularMdp m(10, 1, 0.9);
    std::fill(m.p.begin(), m.p.end(), 0.1);
    set_goal_reward(m, 0);
    CHECK(scale_goal_reward(m, 0) == doctest::Approx(5.0).epsilon(1e-10));
  }
  SUBCASE("scaled greedy policy earns one half") {
    auto m = random_mdp(21, 10, 3, 0.1);
    double r = 0.0;
    REQUIRE_NOTHROW(r = scale_goal_reward(m, 0));
    const auto pi = greedy_policy(m, value_iteration(m).q);
    Rng rng(RngStream{21, 1});
    std::size_t s = rng.uniform_index(10);
    double total = 0.0;
    const int steps = 1000000;
    for (int i = 0; i < steps; ++i) {
      const double u = rng.uniform();
      const double* row = m.row(s, pi[s]);
      std::size_t next = 0;
      double acc = row[0];
      while (u >= acc && next + 1 < 10) acc += row[++next];
      if (next == 0) total += r;
      s = next;
    }
    CHECK(std::abs(total / steps - 0.5) < 0.02);
  }
  SUBCASE("reward scale cancels") {
    auto m = random_mdp(22, 10, 3, 0.3);
    const double r1 = scale_goal_reward(m, 0);
    set_goal_reward(m, 0, 2.0);
    const double r2 = scale_goal_reward(m, 0);
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-9));
    CHECK(r2 * goal_stationary_mass(m, 0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("permuting non-goal states changes nothing") {
    const auto m = random_mdp(23, 6, 2, 0.5);
    std::vector<std::size_t> perm{0, 3, 5, 1, 4, 2};
    TabularMdp p(6, 2, 0.9);
    for (std::size_t s = 0; s < 6; ++s) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t k = 0; k < 6; ++k) p.prob(perm[s], a, perm[k]) = m.prob(s, a, k);
      }
    }
    set_goal_reward(p, 0);
    CHECK(scale_goal_reward(p, 0) == doctest::Approx(scale_goal_reward(m, 0)).epsilon(1e-9));
  }
  SUBCASE("unreachable goal is degenerate") {
    TabularMdp m(3, 1, 0.9);
    m.prob(0, 0, 1) = 1.0;
    m.prob(1, 0, 1) = 1.0;
    m.prob(2, 0, 2) = 1.0;
    set_goal_reward(m, 0);
    CHECK_THROWS_AS(scale_goal_reward(m, 0), DegenerateMdpError);
  }
}

TEST_CASE("belief planner") {
  CHECK(belief_replacement(1.0, 0.001) == doctest::Approx(0.9995));
  CHECK(belief_replacement(0.2, 1.0) == 0.5);

  SUBCASE("fast replacement: never toss coin 2") {
    const auto pol = belief_value_iteration(0.8, 0.999, 0.999, 2001);
    const auto reach = reachable_beliefs(0.999);
    CHECK(!reach.empty());
    for (double b : reach) CHECK(pol.action(b) == 0);
    // Only beliefs the game can never produce favour coin 2.
    CHECK(pol.action(1.0) == 1);
  }
  SUBCASE("slow replacement: coin 2 is worth tossing somewhere") {
    const auto pol = belief_value_iteration(0.8, 0.001, 0.999, 2001);
    const auto acts = pol.grid_actions();
    CHECK(std::count(acts.begin(), acts.end(), std::size_t{1}) > 0);
    CHECK(pol.action(1.0) == 1);
    CHECK(pol.action(0.0) == 0);
  }
  SUBCASE("a sure coin is always best") {
    for (double q2 : {0.001, 0.1, 0.5}) {
      const auto pol = belief_value_iteration(1.0, q2, 0.99, 501);
      for (auto a : pol.grid_actions()) CHECK(a == 0);
    }
  }
  SUBCASE("grid must have two points") {
    CHECK_THROWS_AS(belief_value_iteration(0.8, 0.1, 0.9, 1), std::invalid_argument);
  }
  SUBCASE("reachable beliefs") {
    const auto r = reachable_beliefs(1.0);
    CHECK(std::find(r.begin(), r.end(), 0.5) != r.end());
    for (double b : r) CHECK(b == doctest::Approx(0.5));
  }
}
