#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "contilab/core/simulation.hpp"
#include "contilab/mdp/tabular.hpp"

namespace contilab {

struct GoalMdpParams {
  std::size_t states = 10;
  std::size_t actions = 3;
  /// Per-step probability that each (s, a) row is redrawn.
  double eta = 1e-3;
  std::size_t goal = 0;
  /// Discount used only to scale the goal reward.
  double gamma = 0.9;
};

/// Dirichlet(1/S, ..., 1/S) row via normalized log-gamma draws.
void sample_dirichlet_row(Rng& rng, std::size_t n, double* out);

/// Generates the drifting transition tensor step by step.
class MdpDriftProcess {
 public:
  MdpDriftProcess(const GoalMdpParams& params, const RngStream& stream);

  const TabularMdp& mdp() const { return mdp_; }
  double goal_reward() const { return goal_reward_; }
  std::size_t initial_attempts() const { return initial_attempts_; }
  std::size_t degenerate_updates() const { return degenerate_; }

  struct Event {
    std::uint64_t step;
    std::uint32_t row;  // s * A + a
  };
  /// Applies this step's row redraws. Appends them to `events` if given.
  /// Returns true if any row changed.
  bool advance(std::uint64_t step, std::vector<Event>* events = nullptr);

 private:
  void rescale();

  GoalMdpParams params_;
  Rng rng_;
  TabularMdp mdp_;
  double goal_reward_ = 0.0;
  std::uint64_t next_event_ = 0;
  std::size_t initial_attempts_ = 0;
  std::size_t degenerate_ = 0;
};

/// A recorded drift: initial tensor, every row redraw, and the goal reward
/// after each change. Replaying it is identical to live generation from the
/// same stream.
class MdpDriftSchedule {
 public:
  static MdpDriftSchedule generate(const GoalMdpParams& params, const RngStream& env_stream, std::uint64_t horizon);

  struct Change {
    std::uint64_t step;
    std::uint32_t row;
    std::vector<double> probs;
  };
  struct RewardChange {
    std::uint64_t step;
    double reward;
  };

  const GoalMdpParams& params() const { return params_; }
  const RngStream& stream() const { return stream_; }
  std::uint64_t horizon() const { return horizon_; }
  const std::vector<double>& initial_p() const { return initial_p_; }
  double initial_reward() const { return initial_reward_; }
  const std::vector<Change>& changes() const { return changes_; }
  const std::vector<RewardChange>& reward_changes() const { return reward_changes_; }
  std::size_t degenerate_updates() const { return degenerate_; }

 private:
  GoalMdpParams params_;
  RngStream stream_;
  std::uint64_t horizon_ = 0;
  std::vector<double> initial_p_;
  double initial_reward_ = 0.0;
  std::vector<Change> changes_;
  std::vector<RewardChange> reward_changes_;
  std::size_t degenerate_ = 0;
};

/// Random goal-reaching MDP whose transition rows are occasionally redrawn.
/// The observation is the state index; reward is the scaled goal reward on
/// entering the goal state.
class GoalMdpEnv : public Environment {
 public:
  explicit GoalMdpEnv(const GoalMdpParams& params);
  /// Replays a recorded drift. reset() must then receive the stream the
  /// schedule was generated from.
  explicit GoalMdpEnv(std::shared_ptr<const MdpDriftSchedule> schedule);

  Space action_space() const override { return Space::discrete(params_.actions); }
  Space observation_space() const override { return Space::discrete(params_.states); }
  std::optional<Signal> reset(Rng& rng) override;
  Transition step(const Signal& action, Rng& rng) override;

  /// Drift for the current step, then a transition. Returns (next state, reward).
  std::pair<std::size_t, double> mdp_step(std::size_t action, Rng& rng);

  const TabularMdp& mdp() const { return mdp_; }
  double goal_reward() const { return goal_reward_; }
  std::size_t state() const { return state_; }
  std::uint64_t time() const { return t_; }
  std::size_t rows_resampled() const { return rows_resampled_; }
  std::size_t reward_updates() const { return reward_updates_; }

 private:
  GoalMdpParams params_;
  std::shared_ptr<const MdpDriftSchedule> schedule_;
  std::unique_ptr<MdpDriftProcess> live_;
  TabularMdp mdp_;
  double goal_reward_ = 0.0;
  std::size_t state_ = 0;
  std::uint64_t t_ = 0;
  std::size_t change_cursor_ = 0;
  std::size_t reward_cursor_ = 0;
  std::size_t rows_resampled_ = 0;
  std::size_t reward_updates_ = 0;
  std::vector<MdpDriftProcess::Event> events_;
};

}  // namespace contilab
