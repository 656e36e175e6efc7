#include "contilab/core/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "contilab/core/simulation.hpp"

namespace contilab {

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CONTILAB_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return std::max<std::size_t>(1, n);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t threads) {
  const std::size_t workers = std::min(worker_count(threads), std::max<std::size_t>(1, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    while (!stop) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const MetricStats& SweepCell::stat(const std::string& metric) const {
  for (const auto& s : stats) {
    if (s.metric == metric) return s;
  }
  throw std::out_of_range("no metric " + metric + " in sweep cell");
}

std::size_t SweepTable::failed_cells() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.missing(); }));
}

RngStream trial_stream(const ExperimentConfig& config, std::uint64_t base_seed, std::size_t trial) {
  return RngStream{base_seed, hash_combine(config.hash(), trial)};
}

MetricStats summarize(const std::string& metric, const std::vector<double>& values) {
  MetricStats s;
  s.metric = metric;
  s.trials = values.size();
  if (values.empty()) return s;
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  s.mean = sum.value() / static_cast<double>(values.size());
  if (values.size() > 1) {
    CompensatedSum sq;
    for (double v : values) sq.add((v - s.mean) * (v - s.mean));
    s.std = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
    s.ci95 = 1.96 * s.std / std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

SweepTable monte_carlo_sweep(const std::vector<ExperimentConfig>& grid, std::size_t trials, std::uint64_t base_seed,
                             const TrialRunner& runner, std::size_t threads) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  const std::size_t total = grid.size() * trials;
  std::vector<std::optional<Metrics>> results(total);
  std::vector<std::string> errors(total);

  parallel_for(
      total,
      [&](std::size_t task) {
        const std::size_t cell = task / trials;
        const std::size_t trial = task % trials;
        try {
          results[task] = runner(grid[cell], trial, trial_stream(grid[cell], base_seed, trial));
        } catch (const std::exception& e) {
          errors[task] = e.what();
        }
      },
      threads);

  SweepTable table;
  table.base_seed = base_seed;
  table.trials = trials;
  for (std::size_t c = 0; c < grid.size(); ++c) {
    SweepCell cell;
    cell.config = grid[c];
    std::vector<std::string> order;
    std::map<std::string, std::vector<double>> samples;
    for (std::size_t i = 0; i < trials; ++i) {
      const std::size_t task = c * trials + i;
      if (!results[task]) {
        ++cell.failures;
        cell.errors.push_back("trial " + std::to_string(i) + ": " + errors[task]);
        continue;
      }
      for (const auto& [name, value] : *results[task]) {
        auto [it, inserted] = samples.try_emplace(name);
        if (inserted) order.push_back(name);
        it->second.push_back(value);
      }
    }
    for (const auto& name : order) cell.stats.push_back(summarize(name, samples[name]));
    table.cells.push_back(std::move(cell));
  }
  return table;
}

}  // namespace contilab
