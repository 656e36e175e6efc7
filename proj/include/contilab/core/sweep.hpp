#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "contilab/core/config.hpp"
#include "contilab/core/rng.hpp"

namespace contilab {

/// Worker count: `requested` (0 = hardware concurrency), capped by CONTILAB_THREADS.
std::size_t worker_count(std::size_t requested = 0);

/// Runs fn(i) for i in [0, n) on a pool of workers. The first exception is
/// rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t threads = 0);

using Metrics = std::vector<std::pair<std::string, double>>;

/// One trial of one configuration.
using TrialRunner = std::function<Metrics(const ExperimentConfig&, std::size_t trial, const RngStream&)>;

struct MetricStats {
  std::string metric;
  double mean = 0.0;
  /// Sample standard deviation (0 for a single trial).
  double std = 0.0;
  /// 1.96 std / sqrt(n).
  double ci95 = 0.0;
  std::size_t trials = 0;
};

struct SweepCell {
  ExperimentConfig config;
  std::vector<MetricStats> stats;
  std::size_t failures = 0;
  std::vector<std::string> errors;

  bool missing() const { return stats.empty(); }
  const MetricStats& stat(const std::string& metric) const;
};

struct SweepTable {
  std::uint64_t base_seed = 0;
  std::size_t trials = 0;
  std::vector<SweepCell> cells;

  std::size_t failed_cells() const;
};

/// Stream of trial i of a config: seed = base_seed, id = hash(config content, i).
RngStream trial_stream(const ExperimentConfig& config, std::uint64_t base_seed, std::size_t trial);

/// Runs every (config, trial) pair in parallel and aggregates each metric per
/// config. A throwing trial is recorded in its cell and the sweep continues.
SweepTable monte_carlo_sweep(const std::vector<ExperimentConfig>& grid, std::size_t trials, std::uint64_t base_seed,
                             const TrialRunner& runner, std::size_t threads = 0);

/// Mean, sample std and 95% half-width of a sample.
MetricStats summarize(const std::string& metric, const std::vector<double>& values);

}  // namespace contilab
