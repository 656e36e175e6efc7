#pragma once

#include <cstddef>
#include <vector>

#include "contilab/core/errors.hpp"

namespace contilab {

/// Finite MDP with transition tensor P[s][a][s'] and rewards r(s, a, s').
struct TabularMdp {
  std::size_t num_states = 0;
  std::size_t num_actions = 0;
  std::vector<double> p;  // (s * A + a) * S + s'
  std::vector<double> r;  // same layout
  double gamma = 0.9;

  TabularMdp() = default;
  TabularMdp(std::size_t s, std::size_t a, double discount = 0.9);

  double& prob(std::size_t s, std::size_t a, std::size_t next) { return p[(s * num_actions + a) * num_states + next]; }
  double prob(std::size_t s, std::size_t a, std::size_t next) const {
    return p[(s * num_actions + a) * num_states + next];
  }
  double& reward(std::size_t s, std::size_t a, std::size_t next) { return r[(s * num_actions + a) * num_states + next]; }
  double reward(std::size_t s, std::size_t a, std::size_t next) const {
    return r[(s * num_actions + a) * num_states + next];
  }
  const double* row(std::size_t s, std::size_t a) const { return p.data() + (s * num_actions + a) * num_states; }

  /// Throws std::invalid_argument unless every row is a distribution (sum within 1e-12).
  void validate() const;
};

/// Reward 1 on entering `goal`, 0 otherwise.
void set_goal_reward(TabularMdp& mdp, std::size_t goal, double value = 1.0);

/// Q[s * A + a].
using QTable = std::vector<double>;

struct ValueIterationResult {
  QTable q;
  /// Sup-norm distance between successive iterates.
  std::vector<double> gaps;
};

ValueIterationResult value_iteration(const TabularMdp& mdp, double tol = 1e-8, std::size_t max_iter = 1000000);

double bellman_residual(const TabularMdp& mdp, const QTable& q);

/// Greedy action per state; ties go to the lowest action index.
std::vector<std::size_t> greedy_policy(const TabularMdp& mdp, const QTable& q);

/// Long-run state occupancy of the greedy chain started from the uniform distribution.
std::vector<double> greedy_stationary_distribution(const TabularMdp& mdp, const QTable& q);

class DegenerateMdpError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Goal reward 0.5 / d_g, where d_g is the greedy stationary mass of `goal`
/// under the optimal policy for the rewards in `mdp`.
double scale_goal_reward(const TabularMdp& mdp, std::size_t goal);
double goal_stationary_mass(const TabularMdp& mdp, std::size_t goal);

}  // namespace contilab
