#pragma once

#include <memory>
#include <vector>

#include "contilab/core/simulation.hpp"
#include "contilab/mdp/belief.hpp"

namespace contilab {

/// Exact filter for the two-coin game: coin 1 (arm 0) has known bias p1, coin 2
/// (arm 1) has bias 0 or 1 and is replaced with probability q2 before each toss.
/// Acts with a belief-grid policy if one is given, else greedily.
class DyadicCoinBeliefAgent : public Agent {
 public:
  DyadicCoinBeliefAgent(double p1, double q2, std::shared_ptr<const BeliefPolicy> policy = nullptr);

  Space action_space() const override { return Space::discrete(2); }
  Space observation_space() const override { return Space::discrete(2); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;
  void diagnostics(Diagnostics& out) const override;

  /// A toss of coin 2 reveals its bias.
  void observe(std::size_t outcome);
  /// One replacement opportunity.
  void advance();
  /// observe (if coin 2 was tossed), then advance.
  double coin_belief_update(bool pulled_coin2, std::optional<std::size_t> outcome);

  double belief() const { return b_; }

 private:
  double p1_, q2_;
  std::shared_ptr<const BeliefPolicy> policy_;
  double b_ = 0.5;
};

/// Bayesian predictor for LogitEnv: posterior over theta on a trapezoid grid
/// with a N(0, 1) prior.
class LogitPredictorAgent : public Agent {
 public:
  explicit LogitPredictorAgent(std::size_t grid_points = 513, double half_width = 6.0);

  Space action_space() const override { return Space::probability(); }
  Space observation_space() const override { return Space::discrete(2); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;

  void observe(std::size_t outcome);
  /// Posterior predictive P(next = 1).
  double logit_predict() const { return p_one_; }
  std::vector<double> posterior_weights() const;

 private:
  void refresh();

  std::vector<double> theta_, log_prior_, log_lik_, log_sig_, log_sig_neg_;
  double p_one_ = 0.5;
};

/// One-bit agent for BitFlipEnv: remembers the last bit and predicts a flip
/// when the prior mean flip probability exceeds 1/2.
class BitFlipAgent : public Agent {
 public:
  explicit BitFlipAgent(double mean_p);

  Space action_space() const override { return Space::discrete(2); }
  Space observation_space() const override { return Space::discrete(2); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;

  std::size_t bitflip_act(Rng& rng) const;
  void set_last_bit(std::size_t bit) {
    last_bit_ = bit;
    started_ = true;
  }

 private:
  double mean_p_;
  std::size_t last_bit_ = 0;
  bool started_ = false;
};

}  // namespace contilab
