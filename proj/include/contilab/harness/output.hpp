#pragma once

#include <ostream>
#include <string>

#include "contilab/harness/experiment.hpp"

namespace contilab {

/// "%.12g".
std::string format_value(double v);

/// `#` header lines (experiment, seed, version), then
/// columns..., metric, mean, std, ci95, trials.
void write_results_csv(std::ostream& out, const std::string& experiment, std::uint64_t seed,
                       const ResultTable& table);

/// One key=value line per parameter, including the experiment name and seed.
void write_resolved_config(std::ostream& out, const std::string& experiment, const ExperimentConfig& resolved);

/// Line plot of the selected rows with 95% error bars.
void write_svg_plot(std::ostream& out, const ResultTable& table, const PlotSpec& spec);

}  // namespace contilab
