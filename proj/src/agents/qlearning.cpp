#include "contilab/agents/qlearning.hpp"

#include <algorithm>
#include <stdexcept>

namespace contilab {

OptimisticQAgent::OptimisticQAgent(std::size_t states, std::size_t actions, double alpha, double gamma, double zeta)
    : states_(states), actions_(actions), alpha_(alpha), gamma_(gamma), zeta_(zeta), q_(states * actions, 0.0) {
  if (states == 0 || actions == 0) throw std::invalid_argument("Q table needs states and actions");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in [0, 1)");
  if (!(zeta >= 0.0)) throw std::invalid_argument("boost must be nonnegative");
}

void OptimisticQAgent::reset(const std::optional<Signal>& first, Rng&) {
  std::fill(q_.begin(), q_.end(), 0.0);
  offset_ = 0.0;
  state_ = first ? as_index(*first) : 0;
  if (state_ >= states_) throw std::invalid_argument("initial state out of range");
}

std::size_t OptimisticQAgent::optq_act(std::size_t s, Rng& rng) {
  if (s >= states_) throw std::invalid_argument("state out of range");
  const double* row = q_.data() + s * actions_;
  double best = row[0];
  ties_.assign(1, 0);
  for (std::size_t a = 1; a < actions_; ++a) {
    if (row[a] > best) {
      best = row[a];
      ties_.assign(1, a);
    } else if (row[a] == best) {
      ties_.push_back(a);
    }
  }
  return ties_.size() == 1 ? ties_[0] : ties_[rng.uniform_index(ties_.size())];
}

void OptimisticQAgent::optq_update(std::size_t s, std::size_t a, double r, std::size_t next) {
  if (s >= states_ || next >= states_ || a >= actions_) throw std::invalid_argument("index out of range");
  const double* row = q_.data() + next * actions_;
  const double next_max = *std::max_element(row, row + actions_) + offset_;
  double& entry = q_[s * actions_ + a];
  entry += alpha_ * (r + gamma_ * next_max - (entry + offset_));
  offset_ += zeta_;
}

Signal OptimisticQAgent::act(Rng& rng) { return optq_act(state_, rng); }

void OptimisticQAgent::update(const Signal& action, const Signal& observation, double reward, Rng&) {
  const std::size_t next = as_index(observation);
  optq_update(state_, as_index(action), reward, next);
  state_ = next;
}

}  // namespace contilab
