#include "pentree/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pentree/data.hpp"
#include "pentree/grow.hpp"
#include "pentree/oracle.hpp"
#include "pentree/prune.hpp"
#include "pentree/random.hpp"
#include "pentree/select.hpp"

namespace pentree {

namespace {

// Stream identifiers, one per check.
enum : std::uint64_t {
  kShatterStream = 2,
  kPruneStream = 3,
  kPenaltyStream = 4,
  kExhaustiveStream = 5,
  kGridStream = 6,
  kDesignStream = 7,
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Small two-feature dataset mixing tied integer values and continuous ones,
// so both ties and clean separations show up.
Dataset random_small_dataset(Engine& engine, std::size_t n_min, std::size_t n_max) {
  std::uniform_int_distribution<std::size_t> rows(n_min, n_max);
  std::uniform_int_distribution<int> grid(0, 3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  const std::size_t n = rows(engine);
  std::vector<double> x(n * 2);
  std::vector<Label> y(n);
  const bool integer_column[2] = {coin(engine), coin(engine)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < 2; ++j)
      x[i * 2 + j] = integer_column[j] ? static_cast<double>(grid(engine)) : gauss(engine);
    y[i] = coin(engine) ? 1 : 0;
  }
  return Dataset(n, 2, std::move(x), std::move(y));
}

struct PruningInstance {
  Dataset data;
  TreeClassifier grown;
};

PruningInstance pruning_instance(std::uint64_t seed, std::size_t index) {
  Engine engine = make_engine(derive_seed(seed, {kPruneStream, index}));
  Dataset data = random_small_dataset(engine, 4, 12);
  GrowLimits limits;
  limits.max_leaves = 6;
  TreeClassifier grown = grow_maximal(data, limits);
  return {std::move(data), std::move(grown)};
}

// errors/n + (num/den) size, scaled by n den so it stays an integer.
Int128 scaled_cost(std::size_t errors, std::size_t size, const Rational& alpha, std::size_t n) {
  return static_cast<Int128>(errors) * alpha.den() +
         static_cast<Int128>(alpha.num()) * static_cast<Int128>(size) * static_cast<Int128>(n);
}

}  // namespace

CheckResult check_counting() {
  Stopwatch clock;
  CheckResult out{1, "counting lemmas", true, {}, 0.0};
  const std::uint64_t expected[] = {1, 1, 2, 5, 14, 42, 132};
  for (std::size_t k = 1; k <= 7; ++k) {
    const std::uint64_t c = catalan(k);
    const std::size_t shapes = enumerate_shapes(k).size();
    if (c != expected[k - 1] || shapes != c) {
      out.passed = false;
      out.detail = fmt::format("k={}: catalan {} enumerated {}", k, c, shapes);
      return out;
    }
  }
  for (std::size_t p = 2; p <= 4; ++p)
    for (std::size_t k = 1; k <= 4; ++k) {
      const auto listed = enumerate_classes(p, k).classes.size();
      std::uint64_t formula = catalan(k);
      for (std::size_t i = 1; i < k; ++i) formula *= p;
      if (listed != formula) {
        out.passed = false;
        out.detail = fmt::format("p={} k={}: {} classes, expected {}", p, k, listed, formula);
        return out;
      }
    }
  out.seconds = clock.seconds();
  out.detail = fmt::format("catalan 1..7 and class counts for p<=4, k<=4 agree ({:.3f} s)",
                           out.seconds);
  return out;
}

CheckResult check_shattering_bound(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{2, "shattering bound", true, {}, 0.0};
  std::vector<ClassDescriptor> classes;
  for (std::size_t k = 1; k <= 3; ++k)
    for (auto& desc : enumerate_classes(2, k).classes) classes.push_back(std::move(desc));

  double tightest = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < opts.shattering_samples; ++s) {
    Engine engine = make_engine(derive_seed(opts.seed, {kShatterStream, s}));
    const Dataset data = random_small_dataset(engine, 1, 6);
    std::vector<std::vector<double>> sample;
    for (std::size_t i = 0; i < data.rows(); ++i)
      sample.emplace_back(data.row(i).begin(), data.row(i).end());
    const double n = static_cast<double>(sample.size());
    for (const auto& desc : classes) {
      const double k = static_cast<double>(desc.shape.leaves());
      const double entropy = std::log(static_cast<double>(shattering_count(desc, sample)));
      const double bound = k * std::log(2.0 * n);
      tightest = std::max(tightest, entropy - bound);
      if (!(entropy <= bound)) {
        out.passed = false;
        out.detail = fmt::format("sample {} class {}: ln H = {} > {}", s,
                                 desc.shape.preorder(), entropy, bound);
        return out;
      }
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} samples x {} classes, max(ln H - k ln 2n) = {:.4f} ({:.2f} s)",
                           opts.shattering_samples, classes.size(), tightest, out.seconds);
  return out;
}

CheckResult check_pruning_oracle(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{3, "weakest-link pruning optimality", true, {}, 0.0};
  std::size_t comparisons = 0;
  for (std::size_t d = 0; d < opts.pruning_datasets; ++d) {
    const auto inst = pruning_instance(opts.seed, d);
    const std::size_t n = inst.data.rows();
    const PrunedSequence seq = weakest_link(inst.grown, inst.data);
    const auto all = enumerate_pruned_subtrees(inst.grown, inst.data);

    // The critical alphas themselves, then random ones of resolution 1e-6.
    std::vector<Rational> alphas(seq.exact_alphas.begin(), seq.exact_alphas.end());
    Engine engine = make_engine(derive_seed(opts.seed, {kPruneStream, d, 1}));
    std::uniform_int_distribution<std::int64_t> micro(0, 600'000);
    while (alphas.size() < opts.alphas_per_dataset) alphas.emplace_back(micro(engine), 1'000'000);

    for (const Rational& alpha : alphas) {
      const std::size_t k = seq.index_at(alpha);
      const Int128 chosen = scaled_cost(seq.errors[k], seq.subtrees[k].size(), alpha, n);
      Int128 best = std::numeric_limits<Int128>::max();
      for (const auto& s : all) best = std::min(best, scaled_cost(s.errors, s.size, alpha, n));
      ++comparisons;
      if (chosen != best) {
        out.passed = false;
        out.detail = fmt::format("dataset {} alpha {}/{}: sequence element {} is not optimal", d,
                                 alpha.num(), alpha.den(), k);
        return out;
      }
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} datasets, {} exact comparisons ({:.2f} s)", opts.pruning_datasets,
                           comparisons, out.seconds);
  return out;
}

CheckResult check_subadditive_penalty(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{4, "subadditive penalty", true, {}, 0.0};
  std::size_t comparisons = 0;
  for (std::size_t d = 0; d < opts.pruning_datasets; ++d) {
    const auto inst = pruning_instance(opts.seed, d);
    const PrunedSequence seq = weakest_link(inst.grown, inst.data);
    Engine engine = make_engine(derive_seed(opts.seed, {kPenaltyStream, d}));
    std::uniform_real_distribution<double> constant(0.0, 0.4);
    for (std::size_t c = 0; c < opts.penalty_constants; ++c) {
      const double scale = constant(engine);
      const SizePenalty pen = [scale](std::size_t k) {
        return scale * std::sqrt(static_cast<double>(k));
      };
      const std::size_t k = penalized_index(seq, pen);
      const double chosen = seq.risks[k] + pen(seq.subtrees[k].size());
      const double best = brute_force_best_subtree(inst.grown, inst.data, pen).cost;
      ++comparisons;
      if (chosen != best) {
        out.passed = false;
        out.detail = fmt::format("dataset {} c={}: pruned cost {} vs optimum {}", d, scale,
                                 chosen, best);
        return out;
      }
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} comparisons with pen = c sqrt(k) ({:.2f} s)", comparisons,
                           out.seconds);
  return out;
}

CheckResult check_exhaustive_vs_heuristic(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{5, "heuristic vs exhaustive", true, {}, 0.0};
  // Dyadic weights keep every cost exactly representable.
  const double weights[] = {0.0, 1.0 / 64, 1.0 / 16, 1.0 / 8, 3.0 / 16, 1.0 / 4};
  constexpr std::size_t kMaxLeaves = 3;
  GrowLimits limits;
  limits.max_leaves = kMaxLeaves;
  std::size_t ties = 0, total = 0;
  for (std::size_t d = 0; d < opts.exhaustive_datasets; ++d) {
    Engine engine = make_engine(derive_seed(opts.seed, {kExhaustiveStream, d}));
    const Dataset data = random_small_dataset(engine, 8, 8);
    for (double alpha : weights) {
      const PenaltySpec spec = LinearPenalty{alpha};
      const double exhaustive = exhaustive_select(data, spec, kMaxLeaves).cost;
      const double heuristic = select_tree(data, spec, limits).cost;
      ++total;
      if (exhaustive > heuristic) {
        out.passed = false;
        out.detail = fmt::format("dataset {} alpha {}: exhaustive {} > heuristic {}", d, alpha,
                                 exhaustive, heuristic);
        return out;
      }
      ties += exhaustive == heuristic;
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} instances, equality rate {:.3f} ({:.2f} s)", total,
                           static_cast<double>(ties) / static_cast<double>(total), out.seconds);
  return out;
}

CheckResult check_strong_margin_penalty(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{6, "kappa=1 penalty collapse", true, {}, 0.0};
  Engine engine = make_engine(derive_seed(opts.seed, {kGridStream}));
  std::uniform_int_distribution<std::size_t> size(1, 64), rows(2, 5000), dims(2, 2000);
  std::uniform_real_distribution<double> constant(0.01, 5.0);
  for (std::size_t g = 0; g < opts.penalty_grid; ++g) {
    const std::size_t k = size(engine), n = rows(engine), p = dims(engine);
    const double c1 = constant(engine), c2 = constant(engine);
    const double got = penalty_value(MarginAdaptivePenalty{1.0, c1, c2}, k, n, p);
    const double kk = static_cast<double>(k), nn = static_cast<double>(n);
    const double want = kk * (c1 * std::log(2.0 * nn) + c2 * std::log(static_cast<double>(p))) / nn;
    const double inf = std::numeric_limits<double>::infinity();
    if (got < std::nextafter(want, -inf) || got > std::nextafter(want, inf)) {
      out.passed = false;
      out.detail = fmt::format("k={} n={} p={}: {} vs {}", k, n, p, got, want);
      return out;
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} grid points within 1 ulp", opts.penalty_grid);
  return out;
}

CheckResult check_design_analytics(const VerifyOptions& opts) {
  Stopwatch clock;
  CheckResult out{7, "design analytics", true, {}, 0.0};
  struct Case {
    int design;
    std::size_t p;
    double noise;
  };
  const Case cases[] = {{1, 2, 0.1}, {1, 2, 0.2}, {1, 2, 0.3}, {2, 2, 0.5},
                        {2, 2, 1.0}, {2, 2, 2.0}, {4, 3, 0.2}};
  double worst = 0.0;
  for (std::size_t c = 0; c < std::size(cases); ++c) {
    DesignSpec spec{cases[c].design, 1, cases[c].p, cases[c].noise, 0};
    Engine engine = make_engine(derive_seed(opts.seed, {kDesignStream, c}));
    std::vector<double> x(spec.p);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < opts.monte_carlo_samples; ++i) {
      const Label y = draw_observation(spec, engine, x);
      const Label bayes = eta(spec, x) >= 0.5 ? 1 : 0;
      errors += bayes != y;
    }
    const double m = static_cast<double>(opts.monte_carlo_samples);
    const double risk = static_cast<double>(errors) / m;
    const double target = bayes_risk(spec);
    const double se = std::sqrt(target * (1.0 - target) / m);
    const double gap = std::abs(risk - target);
    if (se > 0.0) worst = std::max(worst, gap / se);
    if (gap > 3.0 * se) {
      out.passed = false;
      out.detail = fmt::format("design {} noise {}: Monte Carlo {} vs analytic {} (se {})",
                               spec.design, spec.noise, risk, target, se);
      return out;
    }
  }
  out.seconds = clock.seconds();
  out.detail = fmt::format("{} cases, worst deviation {:.2f} SE ({:.2f} s)", std::size(cases),
                           worst, out.seconds);
  return out;
}

std::vector<CheckResult> run_verification(const VerifyOptions& opts) {
  return {check_counting(),
          check_shattering_bound(opts),
          check_pruning_oracle(opts),
          check_subadditive_penalty(opts),
          check_exhaustive_vs_heuristic(opts),
          check_strong_margin_penalty(opts),
          check_design_analytics(opts)};
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::string out;
  for (const auto& r : results)
    out += fmt::format("{} {}. {}: {}\n", r.passed ? "PASS" : "FAIL", r.id, r.name, r.detail);
  return out;
}

}  // namespace pentree
