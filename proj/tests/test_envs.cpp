#include <doctest.h>

#include <cmath>
#include <numeric>

#include "contilab/envs/ar1.hpp"
#include "contilab/envs/bandit.hpp"
#include "contilab/envs/binary.hpp"
#include "contilab/envs/coin.hpp"
#include "contilab/envs/goal_mdp.hpp"
#include "contilab/mdp/tabular.hpp"
#include "support.hpp"

using namespace contilab;

TEST_CASE("noiseless AR(1) decays geometrically") {
  Ar1ScalarEnv env({0.9, 0.0, 0.0, 1.0, 0.0});
  Rng rng(RngStream{1, 1});
  env.reset(rng);
  CHECK(env.theta() == 1.0);
  CHECK(env.ar1_step(rng) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(env.ar1_step(rng) == doctest::Approx(0.81).epsilon(1e-15));
  CHECK(env.ar1_step(rng) == doctest::Approx(0.729).epsilon(1e-15));
}

TEST_CASE("frozen latent: observation variance is sigma squared") {
  const double sigma = 0.7;
  Ar1ScalarEnv env({1.0, 0.0, sigma, 0.0, 1.0});
  Rng rng(RngStream{2, 1});
  env.reset(rng);
  const double theta = env.theta();
  std::vector<double> sq;
  for (int i = 0; i < 100000; ++i) {
    const double y = env.ar1_step(rng) - theta;
    sq.push_back(y * y);
  }
  CHECK(env.theta() == theta);
  const auto m = testing::mean_se(sq);
  CHECK(std::abs(m.mean - sigma * sigma) < 3 * m.se);
}

TEST_CASE("stationary AR(1) latent has unit variance") {
  Ar1ScalarEnv env(Ar1Params::stationary(0.5, 1.0));
  Rng rng(RngStream{3, 1});
  env.reset(rng);
  std::vector<double> sq;
  for (int i = 0; i < 100000; ++i) {
    env.ar1_step(rng);
    sq.push_back(env.theta() * env.theta());
  }
  const auto m = testing::batch_mean_se(sq);
  CHECK(std::abs(m.mean - 1.0) < 3 * m.se);
}

TEST_CASE("fixed coins keep their bias") {
  CoinSwapEnv env({{CoinPrior::fixed(0.3), 0.0}, {CoinPrior::fixed(0.8), 0.0}});
  Rng rng(RngStream{4, 1});
  env.reset(rng);
  for (std::size_t arm : {0u, 1u}) {
    std::vector<double> heads;
    for (int i = 0; i < 100000; ++i) heads.push_back(static_cast<double>(env.coin_step(arm, rng)));
    const auto m = testing::mean_se(heads);
    CHECK(std::abs(m.mean - env.bias(arm)) < 3 * m.se);
  }
  CHECK(env.replacements() == 0);
  CHECK_THROWS_AS(env.coin_step(2, rng), std::invalid_argument);
}

TEST_CASE("nearly always replaced dyadic coin is fair") {
  CoinSwapEnv env({{CoinPrior::fixed(0.8), 0.0}, {CoinPrior::dyadic(1.0), 0.999}});
  Rng rng(RngStream{5, 1});
  env.reset(rng);
  std::vector<double> heads;
  for (int i = 0; i < 100000; ++i) heads.push_back(static_cast<double>(env.coin_step(1, rng)));
  const auto m = testing::mean_se(heads);
  CHECK(std::abs(m.mean - 0.5) < 3 * m.se);
}

TEST_CASE("fully replaced coin has no lag-one autocorrelation") {
  CoinSwapEnv env({{CoinPrior::beta(1.0, 1.0), 1.0}});
  Rng rng(RngStream{6, 1});
  env.reset(rng);
  std::vector<double> x;
  for (int i = 0; i < 100001; ++i) x.push_back(static_cast<double>(env.coin_step(0, rng)));
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> prod;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) prod.push_back((x[i] - mean) * (x[i + 1] - mean));
  const auto m = testing::mean_se(prod);
  CHECK(std::abs(m.mean) < 3 * m.se);
}

TEST_CASE("coin biases evolve the same whichever coin is tossed") {
  std::vector<CoinArm> arms{{CoinPrior::beta(2, 2), 0.1}, {CoinPrior::dyadic(1.0), 0.05}};
  CoinSwapEnv a(arms), b(arms);
  Rng ra(RngStream{7, 1}), rb(RngStream{7, 1});
  a.reset(ra);
  b.reset(rb);
  for (int i = 0; i < 1000; ++i) {
    a.coin_step(0, ra);
    b.coin_step(1, rb);
    CHECK(a.bias(0) == b.bias(0));
    CHECK(a.bias(1) == b.bias(1));
  }
}

TEST_CASE("stationary bandit arm mean is the initial latent") {
  GaussianAr1BanditEnv env({{1.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}}, 1.0);
  Rng rng(RngStream{8, 1});
  env.reset(rng);
  const double theta0 = env.theta(1);
  std::vector<double> r;
  for (int i = 0; i < 100000; ++i) r.push_back(env.bandit_step(1, rng));
  const auto m = testing::mean_se(r);
  CHECK(std::abs(m.mean - theta0) < 3 * m.se);
  CHECK_THROWS_AS(env.bandit_step(2, rng), std::invalid_argument);
}

TEST_CASE("memoryless bandit rewards have variance 1 + sigma^2") {
  const double sigma = 0.5;
  GaussianAr1BanditEnv env({{0.0, 1.0, 0.0, 1.0}}, sigma);
  Rng rng(RngStream{9, 1});
  env.reset(rng);
  std::vector<double> sq;
  for (int i = 0; i < 100000; ++i) {
    const double r = env.bandit_step(0, rng);
    sq.push_back(r * r);
  }
  const auto m = testing::mean_se(sq);
  CHECK(std::abs(m.mean - (1.0 + sigma * sigma)) < 3 * m.se);
}

TEST_CASE("bandit latent autocovariance is eta^k") {
  const double eta = 0.8;
  auto env = GaussianAr1BanditEnv::stationary(2, eta, 1.0);
  Rng rng(RngStream{10, 1});
  env.reset(rng);
  std::vector<double> th;
  for (int i = 0; i < 200000; ++i) {
    th.push_back(env.theta(0));
    env.bandit_step(1, rng);
  }
  for (std::size_t k : {1u, 3u}) {
    std::vector<double> prod;
    for (std::size_t i = 0; i + k < th.size(); ++i) prod.push_back(th[i] * th[i + k]);
    const auto m = testing::batch_mean_se(prod);
    CHECK(std::abs(m.mean - std::pow(eta, static_cast<double>(k))) < 3 * m.se);
  }
}

TEST_CASE("bandit latents evolve the same whichever arm is pulled") {
  auto a = GaussianAr1BanditEnv::stationary(3, 0.9, 1.0);
  auto b = GaussianAr1BanditEnv::stationary(3, 0.9, 1.0);
  Rng ra(RngStream{11, 1}), rb(RngStream{11, 1});
  a.reset(ra);
  b.reset(rb);
  for (int i = 0; i < 500; ++i) {
    a.bandit_step(0, ra);
    b.bandit_step(2, rb);
    CHECK(a.thetas() == b.thetas());
  }
}

TEST_CASE("logit environment emits ones at the logistic rate") {
  LogitEnv env;
  Rng rng(RngStream{12, 1});
  env.reset(rng);
  env.set_theta(1.0);
  std::vector<double> ones;
  for (int i = 0; i < 100000; ++i) ones.push_back(static_cast<double>(as_index(env.step(0.5, rng).observation)));
  const auto m = testing::mean_se(ones);
  CHECK(std::abs(m.mean - 1.0 / (1.0 + std::exp(-1.0))) < 3 * m.se);
}

TEST_CASE("bit flip rate equals p") {
  BitFlipEnv env(CoinPrior::fixed(0.3));
  Rng rng(RngStream{13, 1});
  env.reset(rng);
  std::size_t last = as_index(env.step(std::size_t{0}, rng).observation);
  std::vector<double> flips;
  for (int i = 0; i < 100000; ++i) {
    const std::size_t o = as_index(env.step(std::size_t{0}, rng).observation);
    flips.push_back(o != last ? 1.0 : 0.0);
    last = o;
  }
  const auto m = testing::mean_se(flips);
  CHECK(std::abs(m.mean - 0.3) < 3 * m.se);
}

TEST_CASE("dirichlet rows are distributions") {
  Rng rng(RngStream{14, 1});
  std::vector<double> row(10);
  for (int i = 0; i < 1000; ++i) {
    sample_dirichlet_row(rng, 10, row.data());
    double s = 0.0;
    for (double x : row) {
      CHECK(x >= 0.0);
      s += x;
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("static goal MDP: optimal greedy policy earns about one half") {
  GoalMdpParams params;
  params.eta = 0.0;
  std::vector<double> avgs;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    GoalMdpEnv env(params);
    Rng rng(RngStream{seed, 15});
    auto s = as_index(*env.reset(rng));
    TabularMdp unit = env.mdp();
    set_goal_reward(unit, params.goal);
    const auto policy = greedy_policy(unit, value_iteration(unit).q);
    double total = 0.0;
    const int steps = 1000000;
    for (int i = 0; i < steps; ++i) {
      const auto [next, r] = env.mdp_step(policy[s], rng);
      total += r;
      s = next;
    }
    CHECK(env.rows_resampled() == 0);
    avgs.push_back(total / steps);
  }
  for (double a : avgs) CHECK(std::abs(a - 0.5) < 0.02);
}

TEST_CASE("drifting goal MDP resamples about S*A*eta rows per step") {
  GoalMdpParams params;
  params.eta = 1e-3;
  GoalMdpEnv env(params);
  Rng rng(RngStream{16, 1});
  env.reset(rng);
  const int steps = 100000;
  std::size_t before = 0;
  std::vector<double> per_step;
  for (int i = 0; i < steps; ++i) {
    env.mdp_step(static_cast<std::size_t>(i % 3), rng);
    per_step.push_back(static_cast<double>(env.rows_resampled() - before));
    before = env.rows_resampled();
  }
  const auto m = testing::mean_se(per_step);
  CHECK(std::abs(m.mean - 0.03) < 3 * m.se);
  env.mdp().validate();
  CHECK(env.reward_updates() > 0);
  CHECK(env.goal_reward() > 0.0);
}

TEST_CASE("replaying a drift schedule matches live generation") {
  GoalMdpParams params;
  params.eta = 2e-3;
  const RngStream stream{17, 3};
  auto schedule = std::make_shared<const MdpDriftSchedule>(MdpDriftSchedule::generate(params, stream, 20000));
  GoalMdpEnv live(params), replay{schedule};
  Rng a(stream), b(stream);
  live.reset(a);
  replay.reset(b);
  for (int i = 0; i < 20000; ++i) {
    const auto x = live.mdp_step(static_cast<std::size_t>(i % 3), a);
    const auto y = replay.mdp_step(static_cast<std::size_t>(i % 3), b);
    REQUIRE(x == y);
  }
  CHECK(live.mdp().p == replay.mdp().p);
  CHECK(live.goal_reward() == replay.goal_reward());
}
