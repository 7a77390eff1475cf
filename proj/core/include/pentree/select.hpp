#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pentree/data.hpp"
#include "pentree/grow.hpp"
#include "pentree/prune.hpp"
#include "pentree/tree.hpp"

namespace pentree {

/// alpha |T|
struct LinearPenalty {
  double alpha = 0.0;
};

/// c1 (|T| ln(2n) / n)^e + c2 (|T| ln(p) / n)^e with e = kappa / (2 kappa - 1).
/// kappa = 1 is the strong-margin limit, where the penalty is linear in |T|.
struct MarginAdaptivePenalty {
  double kappa = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
};

/// c1 sqrt(|T| ln(n) / n) + c2 |T| / n
struct VCPenalty {
  double c1 = 1.0;
  double c2 = 1.0;
};

/// min(margin-adaptive, VC)
struct MinCombinedPenalty {
  MarginAdaptivePenalty margin;
  VCPenalty vc;
};

/// c1 sqrt(|T| p ln(n) / n)
struct NobelPenalty {
  double c1 = 1.0;
};

/// c2 p ln(p) (1 + ln(n / ln p)) |T| / n
struct GeyPenalty {
  double c2 = 1.0;
};

using PenaltySpec = std::variant<LinearPenalty, MarginAdaptivePenalty, VCPenalty,
                                 MinCombinedPenalty, NobelPenalty, GeyPenalty>;

/// Throws ParameterError on negative alpha, kappa < 1 or nonpositive constants.
void validate(const PenaltySpec& spec);
std::string penalty_name(const PenaltySpec& spec);

/// pen(k; n, p). Logarithms are natural.
double penalty_value(const PenaltySpec& spec, std::size_t k, std::size_t n, std::size_t p);

/// Per-leaf weight of the kappa = 1 penalty: (c1 ln(2n) + c2 ln p) / n.
double strong_margin_alpha(double c1, double c2, std::size_t n, std::size_t p);

struct Selection {
  TreeClassifier tree;
  /// Empirical risk plus penalty of `tree`.
  double cost = 0.0;
};

/// Grow, prune by weakest link, then pick the sequence element minimizing
/// empirical risk + penalty_value(spec, |T|, n, p).
Selection select_tree(const Dataset& data, const PenaltySpec& spec, const GrowLimits& limits = {});

enum class CVRule { Min, OneSE };

struct CVConfig {
  std::size_t folds = 10;
  CVRule rule = CVRule::Min;
  std::uint64_t seed = 0;
};

struct CVResult {
  double alpha = 0.0;
  TreeClassifier tree;
  std::vector<double> candidates;
  /// Pooled held-out misclassification rate of each candidate.
  std::vector<double> cv_risk;
};

/// Q-fold cross-validated choice of the linear penalty weight alpha_n.
///
/// Candidates are 0, the geometric means of consecutive positive critical
/// alphas of the full-data sequence, and twice the last critical alpha.
/// Each fold grows and prunes on the other folds and scores every candidate
/// on the held-out rows. The minimizer of the pooled held-out risk wins,
/// ties going to the larger alpha. The returned tree is the full-data
/// sequence pruned at that alpha. Single-class data yields (0, majority leaf).
CVResult cv_select_alpha(const Dataset& data, const CVConfig& cfg, const GrowLimits& limits = {});

}  // namespace pentree
