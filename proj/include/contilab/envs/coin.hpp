#pragma once

#include <vector>

#include "contilab/core/simulation.hpp"

namespace contilab {

/// Prior over a coin's bias.
struct CoinPrior {
  enum Kind { Beta, TwoPoint, Fixed } kind = Fixed;
  double a = 1.0;  // Beta: a. TwoPoint: low bias. Fixed: the bias.
  double b = 1.0;  // Beta: b. TwoPoint: high bias.

  static CoinPrior beta(double a, double b) { return {Beta, a, b}; }
  /// Uniform over {1 - p_hi, p_hi}; dyadic(1) gives biases {0, 1}.
  static CoinPrior dyadic(double p_hi) { return {TwoPoint, 1.0 - p_hi, p_hi}; }
  static CoinPrior fixed(double p) { return {Fixed, p, p}; }

  double sample(Rng& rng) const;
  double mean() const;
};

struct CoinArm {
  CoinPrior prior;
  /// Probability of replacement before each toss.
  double swap_prob = 0.0;
};

/// Coins whose biases are redrawn from their priors at random times. Action is
/// the coin index; the observation and reward are the toss outcome (1 = heads).
class CoinSwapEnv : public Environment {
 public:
  explicit CoinSwapEnv(std::vector<CoinArm> arms);

  Space action_space() const override { return Space::discrete(arms_.size()); }
  Space observation_space() const override { return Space::discrete(2); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  /// Replacement for every arm, then a toss of `arm`.
  std::size_t coin_step(std::size_t arm, Rng& rng);

  std::size_t num_arms() const { return arms_.size(); }
  double bias(std::size_t arm) const { return bias_.at(arm); }
  std::size_t replacements() const { return replacements_; }

 private:
  std::vector<CoinArm> arms_;
  std::vector<double> bias_;
  std::size_t replacements_ = 0;
};

}  // namespace contilab
