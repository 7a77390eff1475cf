#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pentree {

/// Outcome of one oracle check.
struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Sizes of the oracle suite. The defaults are the full acceptance sizes.
struct VerifyOptions {
  std::uint64_t seed = 20'240'601;
  std::size_t shattering_samples = 100;
  std::size_t pruning_datasets = 200;
  std::size_t alphas_per_dataset = 50;
  std::size_t penalty_constants = 20;
  std::size_t exhaustive_datasets = 100;
  std::size_t penalty_grid = 1000;
  std::size_t monte_carlo_samples = 100'000;
};

CheckResult check_counting();
CheckResult check_shattering_bound(const VerifyOptions& opts);
CheckResult check_pruning_oracle(const VerifyOptions& opts);
CheckResult check_subadditive_penalty(const VerifyOptions& opts);
CheckResult check_exhaustive_vs_heuristic(const VerifyOptions& opts);
CheckResult check_strong_margin_penalty(const VerifyOptions& opts);
CheckResult check_design_analytics(const VerifyOptions& opts);

/// Runs every check above in order.
std::vector<CheckResult> run_verification(const VerifyOptions& opts = {});

/// One `PASS`/`FAIL` line per check.
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace pentree
