#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pentree/select.hpp"

namespace pentree {

/// Simulation sweep over designs, sample sizes, dimensions and noise levels.
struct ExperimentConfig {
  std::vector<int> designs{1};
  std::vector<std::size_t> n_grid{50, 100, 200};
  std::vector<std::size_t> p_grid{30, 60, 125, 250, 500, 1000};
  /// Noise levels per design; designs without an entry use default_noise().
  std::map<int, std::vector<double>> noise_grid;
  std::size_t replications = 50;
  /// Per-design replication counts overriding `replications`.
  std::map<int, std::size_t> design_replications;
  std::size_t folds = 10;
  CVRule rule = CVRule::Min;
  std::size_t test_samples = 10'000;
  std::uint64_t master_seed = 0;
  /// Worker threads; 0 means one per hardware thread.
  std::size_t threads = 0;
  std::string output_dir = "results";

  void validate() const;
  std::vector<double> noises(int design) const;
  std::size_t replications_for(int design) const;
};

/// q in {0.1, 0.2, 0.3} for design 1, sigma^2 in {0.5, 1, 2} for designs 2
/// and 3, sigma^2 = 0.2 for design 4.
std::vector<double> default_noise(int design);

struct CellKey {
  int design = 1;
  std::size_t n = 0;
  std::size_t p = 0;
  double noise = 0.0;

  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

/// Outcome of one replication.
struct ReplicationResult {
  double alpha = 0.0;
  double test_loss = 0.0;
  std::size_t tree_size = 1;
};

struct ExperimentRow {
  CellKey cell;
  double mean_alpha = 0.0;
  /// Sample standard deviation across replications (0 for one replication).
  double sd_alpha = 0.0;
  double mean_test_loss = 0.0;
  double mean_tree_size = 0.0;
  std::size_t replications = 0;
};

struct ExperimentResult {
  /// One row per grid cell, ordered by design, n, p, noise.
  std::vector<ExperimentRow> rows;
};

struct FitResult {
  int design = 1;
  std::size_t n = 0;
  double noise = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

/// Called after each finished replication with (done, total).
using ProgressCallback = std::function<void(std::size_t, std::size_t)>;

/// Generates a dataset, cross-validates alpha, and scores the chosen tree on
/// fresh draws. Every random stream is addressed by (master seed, cell, r).
ReplicationResult run_replication(const ExperimentConfig& cfg, const CellKey& cell,
                                  std::size_t replication);

/// Runs every (cell, replication) pair on `cfg.threads` workers. The result
/// does not depend on the thread count or on scheduling.
ExperimentResult run_sweep(const ExperimentConfig& cfg, const ProgressCallback& progress = {});

/// Least squares of mean_alpha on ln p within each (design, n, noise) group.
/// Throws FitError when a group has fewer than two distinct p values.
std::vector<FitResult> fit_alpha_vs_logp(const ExperimentResult& result);

std::string results_csv(const ExperimentResult& result);
std::string fit_csv(const std::vector<FitResult>& fits);

/// Noise level drawn in a design's figure: the reference level when the
/// grid has it (q = 0.3, sigma^2 = 2, 2, 0.2), else the first in the grid.
double figure_noise(const ExperimentConfig& cfg, int design);

/// Plot data with columns ln_p, mean_alpha, sd_alpha, n; one block per n,
/// blocks separated by two blank lines.
std::string figure_data(const ExperimentResult& result, int design, double noise);

/// Writes results.csv, fit.csv and figure3_<design>.dat under
/// cfg.output_dir, creating it if needed. Fits are skipped (and fit.csv
/// holds only its header) when the p grid has a single value.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace pentree
