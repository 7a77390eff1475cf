#include "pentree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "number_text.hpp"
#include "pentree/error.hpp"

namespace pentree {

namespace {

template <class T>
void require_distinct(const std::vector<T>& values, const char* what) {
  if (values.empty()) throw ParameterError(fmt::format("{} is empty", what));
  if (std::set<T>(values.begin(), values.end()).size() != values.size())
    throw ParameterError(fmt::format("{} has duplicate entries", what));
}

std::vector<CellKey> grid_cells(const ExperimentConfig& cfg) {
  std::vector<CellKey> cells;
  for (int d : cfg.designs)
    for (std::size_t n : cfg.n_grid)
      for (std::size_t p : cfg.p_grid)
        for (double noise : cfg.noises(d)) cells.push_back(CellKey{d, n, p, noise});
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::uint64_t cell_seed(std::uint64_t master, const CellKey& c) {
  return derive_seed(master, {static_cast<std::uint64_t>(c.design), c.n, c.p,
                              std::bit_cast<std::uint64_t>(c.noise)});
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot open {} for writing", path.string()));
  out << text;
  if (!out.flush()) throw IoError(fmt::format("failed writing {}", path.string()));
}

}  // namespace

std::vector<double> default_noise(int design) {
  switch (design) {
    case 1: return {0.1, 0.2, 0.3};
    case 2:
    case 3: return {0.5, 1.0, 2.0};
    case 4: return {0.2};
    default: throw ParameterError(fmt::format("unknown design {}", design));
  }
}

std::vector<double> ExperimentConfig::noises(int design) const {
  const auto it = noise_grid.find(design);
  return it == noise_grid.end() ? default_noise(design) : it->second;
}

std::size_t ExperimentConfig::replications_for(int design) const {
  const auto it = design_replications.find(design);
  return it == design_replications.end() ? replications : it->second;
}

void ExperimentConfig::validate() const {
  require_distinct(designs, "designs");
  require_distinct(n_grid, "n_grid");
  require_distinct(p_grid, "p_grid");
  if (folds < 2) throw ParameterError("folds must be >= 2");
  if (test_samples < 1) throw ParameterError("test_samples must be >= 1");
  for (std::size_t n : n_grid)
    if (n < folds) throw ParameterError(fmt::format("n = {} is smaller than folds = {}", n, folds));
  for (int d : designs) {
    if (replications_for(d) < 1) throw ParameterError("replications must be >= 1");
    const auto levels = noises(d);
    require_distinct(levels, "noise grid");
    for (double noise : levels)
      for (std::size_t p : p_grid) DesignSpec{d, n_grid.front(), p, noise, 0}.validate();
  }
}

ReplicationResult run_replication(const ExperimentConfig& cfg, const CellKey& cell,
                                  std::size_t replication) {
  const std::uint64_t base = cell_seed(cfg.master_seed, cell);
  const DesignSpec spec{cell.design, cell.n, cell.p, cell.noise, derive_seed(base, {replication, 0})};
  const Dataset data = generate(spec);
  const CVResult cv =
      cv_select_alpha(data, CVConfig{cfg.folds, cfg.rule, derive_seed(base, {replication, 1})});
  const LossEstimate loss =
      loss_estimate(cv.tree, spec, cfg.test_samples, derive_seed(base, {replication, 2}));
  return ReplicationResult{cv.alpha, loss.loss, cv.tree.size()};
}

ExperimentResult run_sweep(const ExperimentConfig& cfg, const ProgressCallback& progress) {
  cfg.validate();
  const std::vector<CellKey> cells = grid_cells(cfg);

  // Work items are (cell, replication) pairs laid out cell by cell; each
  // writes only its own slot, so aggregation order is fixed.
  std::vector<std::size_t> offset{0};
  for (const CellKey& c : cells) offset.push_back(offset.back() + cfg.replications_for(c.design));
  const std::size_t total = offset.back();
  std::vector<ReplicationResult> slots(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex report_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (std::size_t w = next++; w < total; w = next++) {
      const auto cell = static_cast<std::size_t>(
          std::upper_bound(offset.begin(), offset.end(), w) - offset.begin() - 1);
      try {
        slots[w] = run_replication(cfg, cells[cell], w - offset[cell]);
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
        return;
      }
      const std::size_t finished = ++done;
      if (progress) {
        std::lock_guard lock(report_mutex);
        progress(finished, total);
      }
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<std::size_t>(total, 1));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const std::size_t r = offset[c + 1] - offset[c];
    const auto rr = static_cast<double>(r);
    ExperimentRow row;
    row.cell = cells[c];
    row.replications = r;
    for (std::size_t w = offset[c]; w < offset[c + 1]; ++w) {
      row.mean_alpha += slots[w].alpha;
      row.mean_test_loss += slots[w].test_loss;
      row.mean_tree_size += static_cast<double>(slots[w].tree_size);
    }
    row.mean_alpha /= rr;
    row.mean_test_loss /= rr;
    row.mean_tree_size /= rr;
    if (r > 1) {
      double ss = 0.0;
      for (std::size_t w = offset[c]; w < offset[c + 1]; ++w)
        ss += (slots[w].alpha - row.mean_alpha) * (slots[w].alpha - row.mean_alpha);
      row.sd_alpha = std::sqrt(ss / (rr - 1.0));
    }
    result.rows.push_back(row);
  }
  return result;
}

std::vector<FitResult> fit_alpha_vs_logp(const ExperimentResult& result) {
  std::map<std::tuple<int, std::size_t, double>, std::vector<const ExperimentRow*>> groups;
  for (const auto& row : result.rows)
    groups[{row.cell.design, row.cell.n, row.cell.noise}].push_back(&row);

  std::vector<FitResult> fits;
  for (const auto& [key, rows] : groups) {
    std::set<std::size_t> distinct_p;
    for (const auto* r : rows) distinct_p.insert(r->cell.p);
    if (distinct_p.size() < 2)
      throw FitError(fmt::format("design {} n {} noise {}: need two distinct p values",
                                 std::get<0>(key), std::get<1>(key), std::get<2>(key)));
    const auto m = static_cast<double>(rows.size());
    double mx = 0.0, my = 0.0;
    for (const auto* r : rows) {
      mx += std::log(static_cast<double>(r->cell.p));
      my += r->mean_alpha;
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto* r : rows) {
      const double dx = std::log(static_cast<double>(r->cell.p)) - mx;
      const double dy = r->mean_alpha - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    FitResult fit;
    std::tie(fit.design, fit.n, fit.noise) = key;
    fit.points = rows.size();
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (const auto* r : rows) {
      const double e =
          r->mean_alpha - (fit.intercept + fit.slope * std::log(static_cast<double>(r->cell.p)));
      ss_res += e * e;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 0.0;
    fits.push_back(fit);
  }
  return fits;
}

std::string results_csv(const ExperimentResult& result) {
  using detail::format_double;
  std::string out =
      "design,n,p,noise,replications,mean_alpha,sd_alpha,mean_test_loss,mean_tree_size\n";
  for (const auto& r : result.rows)
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.cell.design, r.cell.n, r.cell.p,
                       format_double(r.cell.noise), r.replications, format_double(r.mean_alpha),
                       format_double(r.sd_alpha), format_double(r.mean_test_loss),
                       format_double(r.mean_tree_size));
  return out;
}

std::string fit_csv(const std::vector<FitResult>& fits) {
  using detail::format_double;
  std::string out = "design,n,noise,points,slope,intercept,r_squared\n";
  for (const auto& f : fits)
    out += fmt::format("{},{},{},{},{},{},{}\n", f.design, f.n, format_double(f.noise), f.points,
                       format_double(f.slope), format_double(f.intercept),
                       format_double(f.r_squared));
  return out;
}

double figure_noise(const ExperimentConfig& cfg, int design) {
  static const std::map<int, double> reference{{1, 0.3}, {2, 2.0}, {3, 2.0}, {4, 0.2}};
  const auto levels = cfg.noises(design);
  const auto ref = reference.find(design);
  if (ref != reference.end() && std::find(levels.begin(), levels.end(), ref->second) != levels.end())
    return ref->second;
  return levels.front();
}

std::string figure_data(const ExperimentResult& result, int design, double noise) {
  std::string out = fmt::format("# design {} noise {}\n# ln_p mean_alpha sd_alpha n\n", design,
                                detail::format_double(noise));
  std::size_t current_n = 0;
  for (const auto& r : result.rows) {
    if (r.cell.design != design || r.cell.noise != noise) continue;
    if (current_n != 0 && r.cell.n != current_n) out += "\n\n";
    current_n = r.cell.n;
    out += fmt::format("{} {} {} {}\n", detail::format_double(std::log(static_cast<double>(r.cell.p))),
                       detail::format_double(r.mean_alpha), detail::format_double(r.sd_alpha),
                       r.cell.n);
  }
  return out;
}

void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result) {
  const std::filesystem::path dir(cfg.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  write_file(dir / "results.csv", results_csv(result));
  write_file(dir / "fit.csv",
             fit_csv(cfg.p_grid.size() >= 2 ? fit_alpha_vs_logp(result) : std::vector<FitResult>{}));
  for (int d : cfg.designs)
    write_file(dir / fmt::format("figure3_{}.dat", d), figure_data(result, d, figure_noise(cfg, d)));
}

}  // namespace pentree
