#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "contilab/core/rng.hpp"

namespace contilab {

/// An action or observation value: a real number or a discrete index.
using Signal = std::variant<double, std::size_t>;

double as_real(const Signal& s);
std::size_t as_index(const Signal& s);

enum class SpaceKind { Real, Discrete, Probability };

/// Describes an action or observation set. Discrete spaces carry their size.
struct Space {
  SpaceKind kind = SpaceKind::Real;
  std::size_t size = 0;

  static Space real() { return {SpaceKind::Real, 0}; }
  static Space discrete(std::size_t n) { return {SpaceKind::Discrete, n}; }
  /// A predictive probability P(next = 1) for a binary observation.
  static Space probability() { return {SpaceKind::Probability, 0}; }

  std::string describe() const;
  friend bool operator==(const Space&, const Space&) = default;
};

/// One interaction step: the agent emits `action` at time t, the environment
/// answers with `observation` and `reward`.
struct StepRecord {
  std::size_t t = 0;
  Signal action;
  Signal observation;
  double reward = 0.0;
};

struct Transition {
  Signal observation;
  double reward = 0.0;
};

class Environment {
 public:
  virtual ~Environment() = default;

  virtual Space action_space() const = 0;
  virtual Space observation_space() const = 0;

  /// Draws latent variables from their priors. Returns an observation that is
  /// available before the first action (e.g. an initial state), if any.
  virtual std::optional<Signal> reset(Rng& rng) = 0;

  virtual Transition step(const Signal& action, Rng& rng) = 0;
};

/// Named scalar values an agent reports about its internal state.
using Diagnostics = std::vector<std::pair<std::string, double>>;

class Agent {
 public:
  virtual ~Agent() = default;

  virtual Space action_space() const = 0;
  virtual Space observation_space() const = 0;

  virtual void reset(const std::optional<Signal>& first_observation, Rng& rng) = 0;
  virtual Signal act(Rng& rng) = 0;
  virtual void update(const Signal& action, const Signal& observation, double reward, Rng& rng) = 0;

  /// Appends per-step diagnostics (stepsize, belief, ...). Called after update().
  virtual void diagnostics(Diagnostics& /*out*/) const {}
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct Series {
  std::vector<std::size_t> t;
  std::vector<double> value;

  void push(std::size_t time, double v) {
    t.push_back(time);
    value.push_back(v);
  }

  friend bool operator==(const Series&, const Series&) = default;
};

struct TrajectorySummary {
  std::size_t horizon = 0;
  /// Exact finite-horizon mean of R_1..R_T.
  double average_reward = 0.0;
  /// (t, running average) where t counts completed steps.
  Series reward_series;
  std::map<std::string, Series> diagnostics;

  friend bool operator==(const TrajectorySummary&, const TrajectorySummary&) = default;
};

struct TrajectoryOptions {
  /// Store every `stride`-th running average; 0 picks ceil(T / 2000).
  std::size_t stride = 0;
  bool record_diagnostics = true;
  /// Called once per step, in order.
  std::function<void(const StepRecord&)> observer;
};

std::size_t default_series_stride(std::size_t horizon);

/// Arithmetic mean of a nonempty sequence of finite values.
double average_reward(std::span<const double> rewards);

/// Runs T steps of the agent-environment loop. Environment draws come from
/// rng.child("env-noise") and agent draws from rng.child("agent-noise").
TrajectorySummary run_trajectory(Environment& env, Agent& agent, std::size_t horizon,
                                 const RngStream& rng, const TrajectoryOptions& options = {});

/// Same loop with explicit environment and agent streams.
TrajectorySummary run_trajectory(Environment& env, Agent& agent, std::size_t horizon, const RngStream& env_stream,
                                 const RngStream& agent_stream, const TrajectoryOptions& options = {});

}  // namespace contilab
