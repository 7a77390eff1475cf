#pragma once

#include <string>
#include <string_view>

#include "pentree/experiment.hpp"

namespace pentree {

/// Sets one experiment option from text. Keys:
///
///   designs, n_grid, p_grid      comma-separated lists
///   noise_design1 .. 4           comma-separated noise levels
///   replications                 default count for every design
///   replications_design1 .. 4    per-design count
///   folds, test_samples, threads, seed, output
///   rule                         "min" or "1se"
///
/// Unknown keys and malformed values raise ParameterError.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat `key = value` text; `#` starts a comment, blank lines are skipped.
/// Settings apply on top of `base`.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace pentree
