#include <doctest.h>

#include <cmath>
#include <set>

#include "contilab/agents/bandit.hpp"
#include "contilab/agents/lms.hpp"
#include "contilab/agents/predictors.hpp"
#include "contilab/agents/qlearning.hpp"
#include "contilab/core/simulation.hpp"
#include "contilab/envs/ar1.hpp"
#include "contilab/envs/binary.hpp"
#include "contilab/envs/goal_mdp.hpp"
#include "contilab/infotheory/lms_analysis.hpp"
#include "support.hpp"

using namespace contilab;

TEST_CASE("lms update examples") {
  LmsAgent still(0.0, 0.9, ShrinkageMode::AppendixB, 0.4);
  CHECK(still.lms_update(3.0) == 0.4);

  LmsAgent full(1.0, 0.9, ShrinkageMode::Example3);
  full.lms_update(2.5);
  CHECK(full.mu() == 2.5);
  CHECK(full.prediction() == doctest::Approx(2.25));

  LmsAgent hand(0.35, 0.9, ShrinkageMode::Example3);
  const double next = hand.lms_update(1.0);
  CHECK(hand.mu() == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(next == doctest::Approx(0.9 * 0.35).epsilon(1e-15));
}

TEST_CASE("capacity lms without noise is plain lms") {
  CapacityLmsAgent cap(0.3, 0.0);
  LmsAgent plain(0.3, 0.9, ShrinkageMode::AppendixB);
  Rng rng(RngStream{1, 1}), data(RngStream{1, 2});
  for (int i = 0; i < 200; ++i) {
    const double y = data.normal();
    CHECK(cap.capacity_lms_update(y, rng) == plain.lms_update(y));
  }
}

TEST_CASE("huge capacity gives the noiseless trajectory") {
  auto cap = CapacityLmsAgent::with_capacity(0.3, 0.9, 0.5, 400.0);
  CapacityLmsAgent exact(0.3, 0.0);
  Rng r1(RngStream{2, 1}), r2(RngStream{2, 1}), data(RngStream{2, 2});
  for (int i = 0; i < 100; ++i) {
    const double y = data.normal();
    CHECK(cap.capacity_lms_update(y, r1) == exact.capacity_lms_update(y, r2));
  }
}

TEST_CASE("quantization noise has variance delta^2") {
  CapacityLmsAgent cap(0.2, 0.3);
  Rng rng(RngStream{3, 1});
  std::vector<double> sq;
  for (int i = 0; i < 100000; ++i) {
    cap.capacity_lms_update(0.0, rng);
    sq.push_back(cap.last_noise() * cap.last_noise());
  }
  const auto m = testing::mean_se(sq);
  CHECK(std::abs(m.mean - 0.09) < 3 * m.se);
}

TEST_CASE("idbd with zero meta stepsize is capacity lms") {
  IdbdParams p;
  p.zeta_meta = 0.0;
  p.alpha0 = 0.3;
  IdbdAgent idbd(p);
  auto cap = CapacityLmsAgent::with_capacity(0.3, p.eta, p.sigma, p.capacity);
  Rng r1(RngStream{4, 1}), r2(RngStream{4, 1}), data(RngStream{4, 2});
  for (int i = 0; i < 1000; ++i) {
    const double y = data.normal();
    const auto [u, a] = idbd.idbd_update(y, r1);
    CHECK(a == 0.3);
    CHECK(u == doctest::Approx(cap.capacity_lms_update(y, r2)).epsilon(1e-14));
  }
}

TEST_CASE("idbd keeps the stepsize in (0, 1]") {
  IdbdParams p;
  p.zeta_meta = 0.5;
  p.mode = IdbdMode::Standard;
  p.delta = 0.0;
  IdbdAgent idbd(p);
  Rng rng(RngStream{5, 1}), data(RngStream{5, 2});
  for (int i = 0; i < 10000; ++i) {
    const auto [u, a] = idbd.idbd_update(5.0 * data.normal(), rng);
    REQUIRE(a > 0.0);
    REQUIRE(a <= 1.0);
    REQUIRE(std::isfinite(u));
  }
}

TEST_CASE("ts update examples") {
  SUBCASE("conjugate averaging") {
    TsAgent ts({{1.0, 0.0, 0.2, 1.0}, {1.0, 0.0, -0.3, 0.7}}, 1.0);
    ts.ts_update(0, 1.4);
    CHECK(ts.sigma2()[0] == doctest::Approx(0.5));
    CHECK(ts.mu()[0] == doctest::Approx((0.2 + 1.4) / 2));
    CHECK(ts.mu()[1] == -0.3);
    CHECK(ts.sigma2()[1] == 0.7);
  }
  SUBCASE("hand evaluation") {
    TsAgent ts({{0.9, std::sqrt(0.19), 0.0, 1.0}}, 1.0);
    ts.ts_update(0, 1.0);
    CHECK(ts.sigma2()[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ts.mu()[0] == doctest::Approx(0.5).epsilon(1e-14));
  }
}

TEST_CASE("posterior variances follow the deterministic recursion") {
  const double eta = 0.8, zeta = 0.6, sigma = 1.3;
  TsAgent ts({{eta, zeta, 0.0, 1.0}, {eta, zeta, 0.0, 1.0}}, sigma);
  Rng rng(RngStream{6, 1});
  std::vector<double> s{1.0, 1.0};
  for (int t = 0; t < 300; ++t) {
    const std::size_t arm = as_index(ts.act(rng));
    ts.ts_update(arm, 10.0 * rng.normal());
    for (std::size_t i = 0; i < 2; ++i) {
      const double pred = eta * eta * s[i] + zeta * zeta;
      s[i] = i == arm ? 1.0 / (1.0 / pred + 1.0 / (sigma * sigma)) : pred;
      CHECK(ts.sigma2()[i] == doctest::Approx(s[i]).epsilon(1e-14));
      CHECK(ts.sigma2()[i] > 0.0);
    }
  }
}

TEST_CASE("ts_act") {
  Rng rng(RngStream{7, 1});
  SUBCASE("zero variance is argmax") {
    TsAgent ts({{1, 0, 0, 0}, {1, 0, 0, 0}, {1, 0, 0, 0}}, 1.0);
    ts.set_posterior({0.1, 0.5, -1.0}, {0.0, 0.0, 0.0});
    for (int i = 0; i < 100; ++i) CHECK(as_index(ts.act(rng)) == 1);
  }
  SUBCASE("symmetric arms are pulled equally") {
    TsAgent ts({{1, 0, 0, 1}, {1, 0, 0, 1}}, 1.0);
    std::vector<double> pulls;
    for (int i = 0; i < 100000; ++i) pulls.push_back(static_cast<double>(as_index(ts.act(rng))));
    const auto m = testing::mean_se(pulls);
    CHECK(std::abs(m.mean - 0.5) < 3 * m.se);
  }
  SUBCASE("gaussian difference probability") {
    TsAgent ts({{1, 0, 0, 1}, {1, 0, 0, 1}}, 1.0);
    ts.set_posterior({0.0, 1.0}, {0.01, 0.01});
    std::vector<double> pulls;
    for (int i = 0; i < 100000; ++i) pulls.push_back(static_cast<double>(as_index(ts.act(rng))));
    const auto m = testing::mean_se(pulls);
    const double p = testing::phi(1.0 / std::sqrt(0.02));
    CHECK(std::abs(m.mean - p) < 3 * std::sqrt(p * (1 - p) / 100000.0) + 1e-12);
  }
}

TEST_CASE("predictive sampling variance") {
  SUBCASE("stationary arm matches thompson sampling") {
    PsAgent ps({{1.0, 0.0, 0.0, 0.8}}, 1.0);
    CHECK(ps.x_star(0) == 0.0);
    CHECK(ps.sampling_variance(0) == doctest::Approx(0.8).epsilon(1e-15));
  }
  SUBCASE("memoryless arm is greedy") {
    PsAgent ps({{0.0, 1.0, 0.0, 1.0}, {0.0, 1.0, 0.3, 1.0}}, 1.0);
    CHECK(ps.sampling_variance(0) == 0.0);
    Rng rng(RngStream{8, 1});
    for (int i = 0; i < 50; ++i) CHECK(as_index(ps.act(rng)) == 1);
  }
  SUBCASE("hand evaluation") {
    const double x = PsAgent::compute_x_star(0.9, std::sqrt(0.19), 1.0);
    const double b = 0.19 + 1.0 - 0.81;
    CHECK(x == doctest::Approx(0.5 * (b + std::sqrt(b * b + 4 * 0.81 * 0.19))).epsilon(1e-14));
    CHECK(x == doctest::Approx(0.62588).epsilon(1e-5));
    PsAgent ps({{0.9, std::sqrt(0.19), 0.0, 1.0}}, 1.0);
    CHECK(ps.sampling_variance(0) == doctest::Approx(0.81 / (0.81 + x)).epsilon(1e-14));
    CHECK(ps.sampling_variance(0) == doctest::Approx(0.5641).epsilon(1e-4));
  }
  SUBCASE("variance ratio is nondecreasing in eta and bounded by one") {
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
      const double eta = i / 100.0;
      PsAgent ps({{eta, std::sqrt(1 - eta * eta), 0.0, 1.0}}, 1.0);
      const double ratio = ps.sampling_variance(0) / ps.sigma2()[0];
      CHECK(ratio >= prev - 1e-15);
      CHECK(ratio <= 1.0 + 1e-15);
      CHECK(ratio >= 0.0);
      prev = ratio;
    }
  }
}

TEST_CASE("optimistic Q-learning updates") {
  SUBCASE("one full-step update") {
    OptimisticQAgent q(2, 2, 1.0, 0.0, 0.0);
    q.optq_update(0, 1, 1.0, 1);
    CHECK(q.q(0, 1) == 1.0);
  }
  SUBCASE("pure boost") {
    OptimisticQAgent q(3, 2, 0.0, 0.9, 0.01);
    for (int k = 1; k <= 50; ++k) {
      q.optq_update(k % 3, k % 2, 7.0, (k + 1) % 3);
      for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t a = 0; a < 2; ++a) CHECK(q.q(s, a) == doctest::Approx(0.01 * k).epsilon(1e-12));
      }
    }
  }
  SUBCASE("hand evaluation") {
    OptimisticQAgent q(3, 3, 0.2, 0.9, 0.0001);
    q.optq_update(1, 2, 5.0, 0);
    CHECK(q.q(1, 2) == doctest::Approx(1.0001).epsilon(1e-14));
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t a = 0; a < 3; ++a) {
        if (s != 1 || a != 2) CHECK(q.q(s, a) == doctest::Approx(0.0001).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("optimistic Q-learning action selection") {
  Rng rng(RngStream{9, 1});
  OptimisticQAgent q(2, 3, 0.1, 0.9, 0.0);
  std::vector<double> counts(3, 0.0);
  const int n = 90000;
  for (int i = 0; i < n; ++i) counts[q.optq_act(0, rng)] += 1.0;
  for (double c : counts) {
    const double p = c / n;
    CHECK(std::abs(p - 1.0 / 3) < 3 * std::sqrt((1.0 / 3) * (2.0 / 3) / n));
  }
  q.set_q(1, 2, 0.5);
  for (int i = 0; i < 100; ++i) CHECK(q.optq_act(1, rng) == 2);
  for (std::size_t a = 0; a < 3; ++a) q.set_q(1, a, q.q(1, a) + 3.0);
  for (int i = 0; i < 100; ++i) CHECK(q.optq_act(1, rng) == 2);
}

TEST_CASE("optimistic boost visits every state-action pair") {
  GoalMdpParams params;
  params.eta = 1e-3;
  GoalMdpEnv env(params);
  OptimisticQAgent agent(10, 3, 0.2, 0.9, 1e-3);
  Rng env_rng(RngStream{10, 1}), agent_rng(RngStream{10, 2});
  const auto first = env.reset(env_rng);
  agent.reset(first, agent_rng);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (int i = 0; i < 1000000; ++i) {
    const std::size_t s = agent.state();
    const Signal a = agent.act(agent_rng);
    const Transition tr = env.step(a, env_rng);
    agent.update(a, tr.observation, tr.reward, agent_rng);
    seen.insert({s, as_index(a)});
  }
  CHECK(seen.size() == 30);
}

TEST_CASE("coin belief filter") {
  SUBCASE("no replacement keeps a revealed bias") {
    DyadicCoinBeliefAgent a(0.8, 0.0);
    a.coin_belief_update(true, 1);
    for (int i = 0; i < 100; ++i) CHECK(a.coin_belief_update(false, std::nullopt) == 1.0);
  }
  SUBCASE("full replacement resets to one half") {
    DyadicCoinBeliefAgent a(0.8, 1.0);
    CHECK(a.coin_belief_update(true, 1) == 0.5);
    CHECK(a.coin_belief_update(true, 0) == 0.5);
    CHECK(a.coin_belief_update(false, std::nullopt) == 0.5);
  }
  SUBCASE("geometric decay") {
    DyadicCoinBeliefAgent a(0.8, 0.001);
    a.observe(1);
    for (int i = 0; i < 100; ++i) a.advance();
    CHECK(a.belief() == doctest::Approx(0.5 + 0.5 * std::pow(0.999, 100)).epsilon(1e-13));
    CHECK(a.belief() == doctest::Approx(0.95239).epsilon(1e-5));
  }
  SUBCASE("belief stays in [0, 1]") {
    DyadicCoinBeliefAgent a(0.8, 0.3);
    Rng rng(RngStream{11, 1});
    for (int i = 0; i < 1000; ++i) {
      const bool pull = rng.bernoulli(0.5);
      const double b = pull ? a.coin_belief_update(true, rng.uniform_index(2)) : a.coin_belief_update(false, std::nullopt);
      REQUIRE(b >= 0.0);
      REQUIRE(b <= 1.0);
    }
  }
}

TEST_CASE("logit predictor") {
  LogitPredictorAgent agent;
  CHECK(agent.logit_predict() == doctest::Approx(0.5).epsilon(1e-15));
  double total = 0.0;
  for (double w : agent.posterior_weights()) total += w;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  LogitEnv env;
  Rng rng(RngStream{12, 1});
  env.reset(rng);
  env.set_theta(2.0);
  for (int i = 0; i < 10000; ++i) agent.observe(as_index(env.step(0.5, rng).observation));
  CHECK(std::abs(agent.logit_predict() - std::exp(2.0) / (1 + std::exp(2.0))) < 0.01);
}

TEST_CASE("logit predictor is converged in the grid size") {
  Rng rng(RngStream{13, 1});
  for (int h = 0; h < 10; ++h) {
    LogitPredictorAgent coarse(513), fine(1025);
    const double p = 1.0 / (1.0 + std::exp(-rng.normal()));
    for (int i = 0; i < 100; ++i) {
      const std::size_t o = rng.uniform() < p ? 1 : 0;
      coarse.observe(o);
      fine.observe(o);
    }
    CHECK(std::abs(coarse.logit_predict() - fine.logit_predict()) < 1e-8);
  }
}

TEST_CASE("bit flip agent") {
  Rng rng(RngStream{14, 1});
  BitFlipAgent flip(0.7);
  flip.set_last_bit(1);
  CHECK(flip.bitflip_act(rng) == 0);
  BitFlipAgent stay(0.2);
  stay.set_last_bit(1);
  CHECK(stay.bitflip_act(rng) == 1);
  BitFlipAgent fresh(0.2);
  CHECK(fresh.bitflip_act(rng) == 1);

  std::vector<double> avgs;
  for (std::uint64_t e = 0; e < 1000; ++e) {
    BitFlipEnv env(CoinPrior::beta(2.0, 1.0));
    BitFlipAgent agent(2.0 / 3.0);
    avgs.push_back(run_trajectory(env, agent, 1000, RngStream{15, e}).average_reward);
  }
  const auto m = testing::mean_se(avgs);
  CHECK(std::abs(m.mean - 2.0 / 3.0) < 3 * m.se);
}
