#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contilab/harness/experiment.hpp"

using namespace contilab;

namespace {

/// Turns leftover "--key=value" / "--key value" arguments into overrides.
std::map<std::string, std::string> parse_overrides(const std::vector<std::string>& args) {
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--", 0) != 0 || a.size() < 3) throw UsageError("unexpected argument '" + a + "'");
    const auto eq = a.find('=');
    if (eq != std::string::npos) {
      out[a.substr(2, eq - 2)] = a.substr(eq + 1);
    } else if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      out[a.substr(2)] = args[++i];
    } else {
      throw UsageError("missing value for '" + a + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contilab: continual-learning experiments"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "List registered experiments");

  auto* run = app.add_subcommand("run", "Run an experiment; extra --key=value flags override its parameters");
  std::string name, out_dir = ".";
  bool plot = false, dry = false;
  std::optional<std::string> trials, seed;
  run->add_option("name", name, "Experiment name")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--plot", plot, "Also write plot.svg");
  run->add_flag("--dry-run", dry, "Validate the configuration and print it without running");
  run->add_option("--trials", trials, "Number of trials per cell");
  run->add_option("--seed", seed, "Base seed");
  run->allow_extras();

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& e : experiment_registry()) std::printf("%-22s %s\n", e.name.c_str(), e.description.c_str());
      return 0;
    }

    auto overrides = parse_overrides(run->remaining());
    if (trials) overrides[kTrialsKey] = *trials;
    if (seed) overrides[kSeedKey] = *seed;

    if (dry) {
      const auto cells = dry_run(name, overrides);
      std::cout << resolve_config(find_experiment(name), overrides).canonical();
      std::cout << "# " << cells.size() << " cells\n";
      return 0;
    }
    const auto result = run_experiment(name, overrides, out_dir, plot);
    for (const auto& p : result.paths) std::cout << p << "\n";
    if (result.table.failed_cells > 0) {
      std::cerr << result.table.failed_cells << " of " << result.table.cells << " cells failed\n";
      for (const auto& e : result.table.errors) std::cerr << "  " << e << "\n";
    }
    return result.exit_code;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
