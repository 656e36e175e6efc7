#pragma once

#include <vector>

#include "contilab/core/simulation.hpp"

namespace contilab {

/// Tabular Q-learning with a fixed stepsize and an optimistic boost zeta added
/// to every entry after each update. The observation is the next state.
class OptimisticQAgent : public Agent {
 public:
  OptimisticQAgent(std::size_t states, std::size_t actions, double alpha, double gamma, double zeta);

  Space action_space() const override { return Space::discrete(actions_); }
  Space observation_space() const override { return Space::discrete(states_); }
  void reset(const std::optional<Signal>& first, Rng& rng) override;
  Signal act(Rng& rng) override;
  void update(const Signal& action, const Signal& observation, double reward, Rng& rng) override;

  std::size_t optq_act(std::size_t s, Rng& rng);
  void optq_update(std::size_t s, std::size_t a, double r, std::size_t next);

  double q(std::size_t s, std::size_t a) const { return q_[s * actions_ + a] + offset_; }
  void set_q(std::size_t s, std::size_t a, double v) { q_[s * actions_ + a] = v - offset_; }
  std::size_t state() const { return state_; }
  void set_state(std::size_t s) { state_ = s; }

 private:
  std::size_t states_, actions_;
  double alpha_, gamma_, zeta_;
  // Entries are stored relative to a shared offset that carries the boosts.
  std::vector<double> q_;
  double offset_ = 0.0;
  std::size_t state_ = 0;
  std::vector<std::size_t> ties_;
};

}  // namespace contilab
