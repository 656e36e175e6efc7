#include "contilab/envs/goal_mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace contilab {

void sample_dirichlet_row(Rng& rng, std::size_t n, double* out) {
  const double shape = 1.0 / static_cast<double>(n);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = rng.log_gamma_variate(shape);
    top = std::max(top, out[i]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(out[i] - top);
    sum += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= sum;
}

namespace {

void check_params(const GoalMdpParams& p) {
  if (p.states < 2 || p.actions < 1) throw std::invalid_argument("goal MDP needs at least 2 states and 1 action");
  if (!(p.eta >= 0.0 && p.eta <= 1.0)) throw std::invalid_argument("resample probability must lie in [0, 1]");
  if (p.goal >= p.states) throw std::invalid_argument("goal state out of range");
  if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw std::invalid_argument("discount must lie in (0, 1)");
}

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

}  // namespace

MdpDriftProcess::MdpDriftProcess(const GoalMdpParams& params, const RngStream& stream)
    : params_(params), rng_(stream.child("mdp-drift")) {
  check_params(params);
  mdp_ = TabularMdp(params.states, params.actions, params.gamma);
  set_goal_reward(mdp_, params.goal);
  const std::size_t rows = params.states * params.actions;
  for (initial_attempts_ = 1; initial_attempts_ <= 1000; ++initial_attempts_) {
    for (std::size_t r = 0; r < rows; ++r) sample_dirichlet_row(rng_, params.states, mdp_.p.data() + r * params.states);
    try {
      goal_reward_ = scale_goal_reward(mdp_, params.goal);
      break;
    } catch (const DegenerateMdpError&) {
      if (initial_attempts_ == 1000) throw;
    }
  }
  next_event_ = params.eta > 0.0 ? rng_.geometric(params.eta) : kNever;
}

void MdpDriftProcess::rescale() {
  try {
    goal_reward_ = scale_goal_reward(mdp_, params_.goal);
  } catch (const DegenerateMdpError&) {
    ++degenerate_;
  }
}

bool MdpDriftProcess::advance(std::uint64_t step, std::vector<Event>* events) {
  const std::uint64_t rows = params_.states * params_.actions;
  const std::uint64_t hi = (step + 1) * rows;
  bool changed = false;
  while (next_event_ < hi) {
    const auto row = static_cast<std::uint32_t>(next_event_ % rows);
    sample_dirichlet_row(rng_, params_.states, mdp_.p.data() + row * params_.states);
    if (events) events->push_back({step, row});
    changed = true;
    const std::uint64_t skip = rng_.geometric(params_.eta);
    next_event_ = skip >= kNever - next_event_ - 1 ? kNever : next_event_ + 1 + skip;
  }
  if (changed) rescale();
  return changed;
}

MdpDriftSchedule MdpDriftSchedule::generate(const GoalMdpParams& params, const RngStream& env_stream,
                                            std::uint64_t horizon) {
  MdpDriftSchedule s;
  s.params_ = params;
  s.stream_ = env_stream;
  s.horizon_ = horizon;
  MdpDriftProcess process(params, env_stream);
  s.initial_p_ = process.mdp().p;
  s.initial_reward_ = process.goal_reward();
  std::vector<MdpDriftProcess::Event> events;
  for (std::uint64_t t = 0; t < horizon; ++t) {
    events.clear();
    if (!process.advance(t, &events)) continue;
    // A row may be redrawn twice in one step; the final draw is what matters.
    for (const auto& e : events) {
      const double* row = process.mdp().row(e.row / params.actions, e.row % params.actions);
      s.changes_.push_back({t, e.row, std::vector<double>(row, row + params.states)});
    }
    s.reward_changes_.push_back({t, process.goal_reward()});
  }
  s.degenerate_ = process.degenerate_updates();
  return s;
}

GoalMdpEnv::GoalMdpEnv(const GoalMdpParams& params) : params_(params) { check_params(params); }

GoalMdpEnv::GoalMdpEnv(std::shared_ptr<const MdpDriftSchedule> schedule)
    : params_(schedule->params()), schedule_(std::move(schedule)) {}

std::optional<Signal> GoalMdpEnv::reset(Rng& rng) {
  if (schedule_) {
    if (!(rng.stream() == schedule_->stream())) throw ConfigError("drift schedule was generated for another stream");
    mdp_ = TabularMdp(params_.states, params_.actions, params_.gamma);
    set_goal_reward(mdp_, params_.goal);
    mdp_.p = schedule_->initial_p();
    goal_reward_ = schedule_->initial_reward();
  } else {
    live_ = std::make_unique<MdpDriftProcess>(params_, rng.stream());
    mdp_ = live_->mdp();
    goal_reward_ = live_->goal_reward();
  }
  t_ = 0;
  change_cursor_ = 0;
  reward_cursor_ = 0;
  rows_resampled_ = 0;
  reward_updates_ = 0;
  state_ = rng.uniform_index(params_.states);
  return Signal{state_};
}

std::pair<std::size_t, double> GoalMdpEnv::mdp_step(std::size_t action, Rng& rng) {
  if (action >= params_.actions) throw std::invalid_argument("action out of range");
  const std::size_t ns = params_.states;
  if (schedule_) {
    if (t_ >= schedule_->horizon()) throw ConfigError("drift schedule exhausted");
    const auto& changes = schedule_->changes();
    while (change_cursor_ < changes.size() && changes[change_cursor_].step == t_) {
      const auto& c = changes[change_cursor_++];
      std::copy(c.probs.begin(), c.probs.end(), mdp_.p.begin() + c.row * ns);
      ++rows_resampled_;
    }
    const auto& rewards = schedule_->reward_changes();
    if (reward_cursor_ < rewards.size() && rewards[reward_cursor_].step == t_) {
      goal_reward_ = rewards[reward_cursor_++].reward;
      ++reward_updates_;
    }
  } else {
    events_.clear();
    if (live_->advance(t_, &events_)) {
      for (const auto& e : events_) {
        const double* row = live_->mdp().row(e.row / params_.actions, e.row % params_.actions);
        std::copy(row, row + ns, mdp_.p.begin() + e.row * ns);
      }
      rows_resampled_ += events_.size();
      goal_reward_ = live_->goal_reward();
      ++reward_updates_;
    }
  }

  const double* row = mdp_.row(state_, action);
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t next = ns - 1;
  for (std::size_t k = 0; k < ns; ++k) {
    acc += row[k];
    if (u < acc) {
      next = k;
      break;
    }
  }
  if (next == ns - 1 && row[next] == 0.0) {
    // Rounding left u above the cumulative sum; take the last state with mass.
    while (next > 0 && row[next] == 0.0) --next;
  }
  state_ = next;
  ++t_;
  return {next, next == params_.goal ? goal_reward_ : 0.0};
}

Transition GoalMdpEnv::step(const Signal& action, Rng& rng) {
  const auto [next, reward] = mdp_step(as_index(action), rng);
  return {next, reward};
}

}  // namespace contilab
