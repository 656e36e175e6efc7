#include "contilab/harness/experiment.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "contilab/core/errors.hpp"
#include "contilab/harness/output.hpp"

#ifndef CONTILAB_VERSION
#define CONTILAB_VERSION "dev"
#endif

namespace contilab {

const char* contilab_version() { return CONTILAB_VERSION; }

std::size_t ResultTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw std::out_of_range("no column " + name);
}

std::vector<const ResultRow*> ResultTable::select(const std::string& metric,
                                                  const std::map<std::string, std::string>& where) const {
  std::vector<std::pair<std::size_t, std::string>> filters;
  for (const auto& [k, v] : where) filters.emplace_back(column(k), v);
  std::vector<const ResultRow*> out;
  for (const auto& row : rows) {
    if (row.stats.metric != metric) continue;
    bool ok = true;
    for (const auto& [i, v] : filters) ok = ok && row.coords[i] == v;
    if (ok) out.push_back(&row);
  }
  return out;
}

namespace {

struct TaggedMetric {
  std::string name;
  std::vector<std::pair<std::string, std::string>> tags;
};

TaggedMetric split_metric(const std::string& text) {
  TaggedMetric m;
  std::stringstream ss(text);
  std::string part;
  bool first = true;
  while (std::getline(ss, part, '|')) {
    if (first) {
      m.name = part;
      first = false;
      continue;
    }
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed metric tag '" + part + "'");
    m.tags.emplace_back(part.substr(0, eq), part.substr(eq + 1));
  }
  return m;
}

std::string describe_cell(const ExperimentConfig& cell, const std::vector<std::string>& keys) {
  std::string out;
  for (const auto& k : keys) {
    if (!cell.has(k)) continue;
    if (!out.empty()) out += ' ';
    out += k + "=" + cell.get(k);
  }
  return out.empty() ? "(single)" : out;
}

}  // namespace

ResultTable tabulate(const SweepTable& sweep, const std::vector<std::string>& keys) {
  ResultTable table;
  table.columns = keys;
  table.cells = sweep.cells.size();

  struct Pending {
    std::map<std::string, std::string> coords;
    MetricStats stats;
  };
  std::vector<Pending> pending;

  for (const auto& cell : sweep.cells) {
    std::map<std::string, std::string> base;
    for (const auto& k : keys) {
      if (cell.config.has(k)) base[k] = cell.config.get(k);
    }
    for (const auto& e : cell.errors) table.errors.push_back(describe_cell(cell.config, keys) + ": " + e);
    if (cell.missing()) {
      ++table.failed_cells;
      MetricStats s;
      s.metric = "error";
      s.mean = s.std = s.ci95 = std::numeric_limits<double>::quiet_NaN();
      s.trials = 0;
      pending.push_back({base, s});
      continue;
    }
    for (const auto& st : cell.stats) {
      const TaggedMetric m = split_metric(st.metric);
      Pending p{base, st};
      p.stats.metric = m.name;
      for (const auto& [k, v] : m.tags) {
        if (std::find(table.columns.begin(), table.columns.end(), k) == table.columns.end()) {
          table.columns.push_back(k);
        }
        p.coords[k] = v;
      }
      pending.push_back(std::move(p));
    }
  }

  for (auto& p : pending) {
    ResultRow row;
    row.stats = p.stats;
    for (const auto& c : table.columns) {
      auto it = p.coords.find(c);
      row.coords.push_back(it == p.coords.end() ? "" : it->second);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::string> list_experiments() {
  std::vector<std::string> names;
  for (const auto& e : experiment_registry()) names.push_back(e.name);
  return names;
}

const Experiment& find_experiment(const std::string& name) {
  for (const auto& e : experiment_registry()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& n : list_experiments()) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown experiment '" + name + "'; available: " + known);
}

ExperimentConfig resolve_config(const Experiment& experiment, const std::map<std::string, std::string>& overrides) {
  ExperimentConfig resolved = experiment.defaults;
  for (const auto& [key, value] : overrides) {
    if (!resolved.has(key)) {
      std::string valid;
      for (const auto& [k, v] : experiment.defaults.values()) valid += "\n  " + k + " (default " + v + ")";
      throw UsageError("unknown key '" + key + "' for " + experiment.name + "; valid keys:" + valid);
    }
    resolved.set(key, value);
  }
  return resolved;
}

std::vector<ExperimentConfig> cartesian_cells(const ExperimentConfig& resolved, const std::vector<std::string>& keys) {
  ExperimentConfig base(resolved.name());
  for (const auto& [k, v] : resolved.values()) {
    if (k != kSeedKey && k != kTrialsKey) base.set(k, v);
  }
  std::vector<ExperimentConfig> cells{base};
  for (const auto& key : keys) {
    std::vector<std::string> items;
    std::stringstream ss(resolved.get(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) items.push_back(item.substr(b, e - b + 1));
    }
    if (items.empty()) throw ConfigError("sweep key " + key + " has no values");
    std::vector<ExperimentConfig> next;
    for (const auto& cell : cells) {
      for (const auto& v : items) {
        ExperimentConfig c = cell;
        c.set(key, v);
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  return cells;
}

std::vector<ExperimentConfig> expand_cells(const Experiment& experiment, const ExperimentConfig& resolved) {
  if (experiment.expand) return experiment.expand(resolved);
  return cartesian_cells(resolved, experiment.sweep_keys);
}

namespace {

std::vector<ExperimentConfig> checked_cells(const Experiment& experiment, const ExperimentConfig& resolved) {
  try {
    resolved.get_u64(kSeedKey);
    if (resolved.has(kTrialsKey) && resolved.get_u64(kTrialsKey) == 0) {
      throw ConfigError("trials must be positive");
    }
    auto cells = expand_cells(experiment, resolved);
    for (const auto& c : cells) experiment.validate(c);
    return cells;
  } catch (const ConfigError& e) {
    throw UsageError(experiment.name + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError(experiment.name + ": " + e.what());
  }
}

}  // namespace

std::vector<ExperimentConfig> dry_run(const std::string& name, const std::map<std::string, std::string>& overrides) {
  const Experiment& experiment = find_experiment(name);
  return checked_cells(experiment, resolve_config(experiment, overrides));
}

RunOutput run_experiment(const std::string& name, const std::map<std::string, std::string>& overrides,
                         const std::string& out_dir, bool plot) {
  const Experiment& experiment = find_experiment(name);
  RunOutput out;
  out.resolved = resolve_config(experiment, overrides);
  const auto cells = checked_cells(experiment, out.resolved);
  out.table = experiment.run(out.resolved, cells);
  out.exit_code = out.table.all_failed() ? 1 : 0;

  if (out_dir.empty()) return out;
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::uint64_t seed = out.resolved.get_u64(kSeedKey);

  const fs::path csv = fs::path(out_dir) / "results.csv";
  {
    std::ofstream f(csv, std::ios::binary);
    write_results_csv(f, name, seed, out.table);
    if (!f) throw std::runtime_error("cannot write " + csv.string());
  }
  out.paths.push_back(csv.string());

  const fs::path cfg = fs::path(out_dir) / "config.resolved";
  {
    std::ofstream f(cfg, std::ios::binary);
    write_resolved_config(f, name, out.resolved);
    if (!f) throw std::runtime_error("cannot write " + cfg.string());
  }
  out.paths.push_back(cfg.string());

  if (plot) {
    const fs::path svg = fs::path(out_dir) / "plot.svg";
    std::ofstream f(svg, std::ios::binary);
    write_svg_plot(f, out.table, experiment.plot);
    if (!f) throw std::runtime_error("cannot write " + svg.string());
    out.paths.push_back(svg.string());
  }
  return out;
}

RngStream shared_env_stream(const ExperimentConfig& cell, std::uint64_t seed, std::size_t trial,
                            const std::vector<std::string>& prefixes) {
  return RngStream{seed, hash_combine(cell.hash(prefixes), trial)}.child("env-noise");
}

}  // namespace contilab
