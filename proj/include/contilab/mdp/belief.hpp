#pragma once

#include <cstddef>
#include <vector>

namespace contilab {

/// Belief dynamics of the two-coin game: coin 1 has known bias p1, coin 2 has
/// bias 0 or 1 and is replaced with probability q2 before each toss. b is the
/// probability that coin 2 currently has bias 1.
double belief_replacement(double b, double q2);

/// Discounted planner on a uniform belief grid. Action 0 tosses coin 1,
/// action 1 tosses coin 2.
class BeliefPolicy {
 public:
  BeliefPolicy(double p1, double q2, double gamma, std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  std::size_t grid_size() const { return values_.size(); }
  double grid_point(std::size_t i) const;

  /// Value at any belief, linearly interpolated.
  double value(double b) const;
  double q_coin1(double b) const;
  double q_coin2(double b) const;
  /// Coin 2 only when it is better by more than a relative 1e-9.
  std::size_t action(double b) const;
  std::vector<std::size_t> grid_actions() const;

 private:
  double p1_, q2_, gamma_;
  std::vector<double> values_;
};

BeliefPolicy belief_value_iteration(double p1, double q2, double gamma, std::size_t grid_size = 2001,
                                    double tol = 1e-9);

/// Beliefs at decision times reachable from b0 under any action sequence:
/// b0's orbit and the orbits of the post-observation beliefs 0 and 1.
std::vector<double> reachable_beliefs(double q2, double b0 = 0.5, std::size_t max_per_orbit = 100000);

}  // namespace contilab
