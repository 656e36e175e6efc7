#pragma once

#include "contilab/core/simulation.hpp"
#include "contilab/envs/coin.hpp"

namespace contilab {

/// Binary observations with P(O = 1) = logistic(theta), theta ~ N(0, 1) drawn
/// once. The action is a predictive probability of 1 and the reward is
/// ln P(O).
class LogitEnv : public Environment {
 public:
  Space action_space() const override { return Space::probability(); }
  Space observation_space() const override { return Space::discrete(2); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  double theta() const { return theta_; }
  void set_theta(double theta) { theta_ = theta; }
  double prob_one() const;

 private:
  double theta_ = 0.0;
};

/// A bit that flips with probability p at each step, p drawn once from a prior.
/// O_1 is a fair coin. The action is a predicted bit and the reward is 1 when
/// the prediction is right.
class BitFlipEnv : public Environment {
 public:
  explicit BitFlipEnv(CoinPrior flip_prior);

  Space action_space() const override { return Space::discrete(2); }
  Space observation_space() const override { return Space::discrete(2); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  double flip_prob() const { return p_; }

 private:
  CoinPrior prior_;
  double p_ = 0.5;
  std::size_t last_bit_ = 0;
  bool started_ = false;
};

}  // namespace contilab
