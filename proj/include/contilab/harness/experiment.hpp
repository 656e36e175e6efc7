#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "contilab/core/config.hpp"
#include "contilab/core/sweep.hpp"

namespace contilab {

/// Bad command line: unknown experiment, unknown key, malformed value.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Keys every experiment understands besides its own.
inline constexpr const char* kSeedKey = "seed";
inline constexpr const char* kTrialsKey = "trials";

struct ResultRow {
  /// One entry per ResultTable column; empty when not applicable.
  std::vector<std::string> coords;
  MetricStats stats;
};

/// Long-format results: coordinate columns, then one statistic per row.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  std::size_t cells = 0;
  std::size_t failed_cells = 0;
  /// "cell ...: message" lines for failed trials.
  std::vector<std::string> errors;

  bool all_failed() const { return cells > 0 && failed_cells == cells; }
  std::size_t column(const std::string& name) const;
  /// Rows whose metric and coordinates match. Empty coordinate values in
  /// `where` match only empty cells.
  std::vector<const ResultRow*> select(const std::string& metric,
                                       const std::map<std::string, std::string>& where = {}) const;
};

/// Builds a ResultTable from a sweep. Coordinates come from `keys` of each
/// cell config. A metric named "name|k=v|..." contributes extra columns k.
ResultTable tabulate(const SweepTable& sweep, const std::vector<std::string>& keys);

struct PlotSpec {
  std::string x;
  std::vector<std::string> metrics;
  /// Column that splits lines; empty for a single line per metric.
  std::string series;
  /// Rows must match these coordinates.
  std::map<std::string, std::string> where;
  bool log_x = false;
  std::string title;
  std::string y_label;
};

struct Experiment {
  std::string name;
  std::string description;
  /// Every valid key with its default. List-valued sweep keys hold
  /// comma-separated values.
  ExperimentConfig defaults;
  std::vector<std::string> sweep_keys;
  /// Coordinate columns; defaults to sweep_keys.
  std::vector<std::string> columns;
  /// Splits a resolved config into cells. Defaults to the Cartesian product of
  /// sweep_keys.
  std::function<std::vector<ExperimentConfig>(const ExperimentConfig&)> expand;
  /// Parses every key a cell needs. Throws ConfigError.
  std::function<void(const ExperimentConfig&)> validate;
  std::function<ResultTable(const ExperimentConfig& resolved, const std::vector<ExperimentConfig>& cells)> run;
  PlotSpec plot;
};

const std::vector<Experiment>& experiment_registry();
std::vector<std::string> list_experiments();
/// Throws UsageError for unknown names.
const Experiment& find_experiment(const std::string& name);

/// Defaults with overrides applied. Unknown keys raise a UsageError that lists
/// the valid ones.
ExperimentConfig resolve_config(const Experiment& experiment, const std::map<std::string, std::string>& overrides);

/// Cells of a resolved config, without the seed and trials keys.
std::vector<ExperimentConfig> expand_cells(const Experiment& experiment, const ExperimentConfig& resolved);

/// Cartesian product over `keys`, first key varying slowest.
std::vector<ExperimentConfig> cartesian_cells(const ExperimentConfig& resolved, const std::vector<std::string>& keys);

/// Resolves, expands and validates without running. Returns the cells.
std::vector<ExperimentConfig> dry_run(const std::string& name, const std::map<std::string, std::string>& overrides);

struct RunOutput {
  ExperimentConfig resolved;
  ResultTable table;
  std::vector<std::string> paths;
  /// 0 unless every cell failed.
  int exit_code = 0;
};

/// Runs an experiment and writes results.csv, config.resolved and, when
/// `plot` is set, plot.svg into out_dir. An empty out_dir writes nothing.
RunOutput run_experiment(const std::string& name, const std::map<std::string, std::string>& overrides,
                         const std::string& out_dir, bool plot = false);

/// Environment stream shared by every cell that agrees on keys with the given
/// prefixes, for common random numbers across agent settings.
RngStream shared_env_stream(const ExperimentConfig& cell, std::uint64_t seed, std::size_t trial,
                            const std::vector<std::string>& prefixes);

const char* contilab_version();

}  // namespace contilab
