#include "contilab/core/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "contilab/core/errors.hpp"

namespace contilab {

double as_real(const Signal& s) {
  if (const auto* x = std::get_if<double>(&s)) return *x;
  return static_cast<double>(std::get<std::size_t>(s));
}

std::size_t as_index(const Signal& s) {
  if (const auto* i = std::get_if<std::size_t>(&s)) return *i;
  throw ConfigError("expected a discrete signal, got a real value");
}

std::string Space::describe() const {
  switch (kind) {
    case SpaceKind::Real:
      return "real";
    case SpaceKind::Probability:
      return "probability";
    case SpaceKind::Discrete:
      return "discrete(" + std::to_string(size) + ")";
  }
  return "unknown";
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

std::size_t default_series_stride(std::size_t horizon) {
  return horizon <= 2000 ? 1 : (horizon + 1999) / 2000;
}

double average_reward(std::span<const double> rewards) {
  if (rewards.empty()) throw std::invalid_argument("average_reward of an empty sequence");
  CompensatedSum sum;
  for (double r : rewards) {
    if (!std::isfinite(r)) throw std::invalid_argument("average_reward of a non-finite value");
    sum.add(r);
  }
  return sum.value() / static_cast<double>(rewards.size());
}

TrajectorySummary run_trajectory(Environment& env, Agent& agent, std::size_t horizon,
                                 const RngStream& rng, const TrajectoryOptions& options) {
  return run_trajectory(env, agent, horizon, rng.child("env-noise"), rng.child("agent-noise"), options);
}

TrajectorySummary run_trajectory(Environment& env, Agent& agent, std::size_t horizon, const RngStream& env_stream,
                                 const RngStream& agent_stream, const TrajectoryOptions& options) {
  if (horizon == 0) throw std::invalid_argument("run_trajectory needs a positive horizon");
  if (env.action_space() != agent.action_space()) {
    throw ConfigError("action space mismatch: environment " + env.action_space().describe() +
                      ", agent " + agent.action_space().describe());
  }
  if (env.observation_space() != agent.observation_space()) {
    throw ConfigError("observation space mismatch: environment " +
                      env.observation_space().describe() + ", agent " +
                      agent.observation_space().describe());
  }

  Rng env_rng(env_stream);
  Rng agent_rng(agent_stream);

  const std::optional<Signal> first = env.reset(env_rng);
  agent.reset(first, agent_rng);

  const std::size_t stride = options.stride == 0 ? default_series_stride(horizon) : options.stride;

  TrajectorySummary summary;
  summary.horizon = horizon;
  CompensatedSum total;
  Diagnostics diag;

  for (std::size_t t = 0; t < horizon; ++t) {
    const Signal action = agent.act(agent_rng);
    const Transition tr = env.step(action, env_rng);
    if (!std::isfinite(tr.reward)) throw NumericError("non-finite reward", t);
    agent.update(action, tr.observation, tr.reward, agent_rng);
    total.add(tr.reward);

    if (options.observer) options.observer(StepRecord{t, action, tr.observation, tr.reward});

    const std::size_t done = t + 1;
    if (done % stride == 0 || done == horizon) {
      summary.reward_series.push(done, total.value() / static_cast<double>(done));
      if (options.record_diagnostics) {
        diag.clear();
        agent.diagnostics(diag);
        for (const auto& [name, value] : diag) summary.diagnostics[name].push(done, value);
      }
    }
  }
  summary.average_reward = total.value() / static_cast<double>(horizon);
  return summary;
}

}  // namespace contilab
