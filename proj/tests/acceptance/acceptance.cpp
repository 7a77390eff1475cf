// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pentree/experiment.hpp"
#include "pentree/verify.hpp"

namespace {

using namespace pentree;

constexpr std::uint64_t kSeed = 20'240'601;

ExperimentConfig figure_config(std::size_t threads) {
  ExperimentConfig cfg;
  cfg.designs = {1};
  cfg.n_grid = {50, 100, 200};
  cfg.p_grid = {30, 60, 125, 250, 500, 1000};
  cfg.noise_grid = {{1, {0.3}}};
  cfg.replications = 50;
  cfg.master_seed = kSeed;
  cfg.threads = threads;
  return cfg;
}

CheckResult check_figure(const ExperimentResult& res) {
  CheckResult out{8, "alpha_n grows linearly in ln p and shrinks with n", true, "", 0.0};
  std::string detail;
  for (const FitResult& f : fit_alpha_vs_logp(res)) {
    const bool ok = f.slope > 0.0 && f.r_squared >= 0.8;
    out.passed = out.passed && ok;
    detail += fmt::format("n={} slope={:.4f} R2={:.3f}{}; ", f.n, f.slope, f.r_squared, ok ? "" : " (fail)");
  }
  std::map<std::size_t, const ExperimentRow*> at50, at200;
  for (const ExperimentRow& r : res.rows) {
    if (r.cell.n == 50) at50[r.cell.p] = &r;
    if (r.cell.n == 200) at200[r.cell.p] = &r;
  }
  double worst = INFINITY;
  for (const auto& [p, small] : at50) {
    const ExperimentRow* large = at200.at(p);
    const double se = std::sqrt(small->sd_alpha * small->sd_alpha / static_cast<double>(small->replications) +
                                large->sd_alpha * large->sd_alpha / static_cast<double>(large->replications));
    const double gap = (small->mean_alpha - large->mean_alpha) / se;
    worst = std::min(worst, gap);
    if (gap < 1.0) out.passed = false;
  }
  out.detail = detail + fmt::format("min (mean50 - mean200) / pooled SE = {:.2f}", worst);
  return out;
}

}  // namespace

int main() {
  using Clock = std::chrono::steady_clock;
  std::vector<CheckResult> results = run_verification(VerifyOptions{});

  auto start = Clock::now();
  const ExperimentResult single = run_sweep(figure_config(1));
  CheckResult figure = check_figure(single);
  figure.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  figure.detail += fmt::format(" ({:.1f} s)", figure.seconds);
  results.push_back(figure);

  start = Clock::now();
  const std::string one = results_csv(single);
  const std::string eight = results_csv(run_sweep(figure_config(8)));
  CheckResult determinism{9, "results.csv identical for 1 and 8 threads", one == eight,
                          "", std::chrono::duration<double>(Clock::now() - start).count()};
  determinism.detail = fmt::format("{} bytes, {} ({:.1f} s)", one.size(), one == eight ? "identical" : "different",
                                   determinism.seconds);
  results.push_back(determinism);

  fmt::print("{}", format_report(results));
  bool all = true;
  for (const CheckResult& r : results) all = all && r.passed;
  return all ? 0 : 1;
}
