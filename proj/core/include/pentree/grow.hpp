#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "pentree/data.hpp"
#include "pentree/tree.hpp"

namespace pentree {

struct GrowLimits {
  /// Stop once the tree has this many leaves; empty means unlimited.
  std::optional<std::size_t> max_leaves;
  /// Each child of a split keeps at least this many rows.
  std::size_t min_node_size = 1;

  void validate() const;
};

/// A candidate split and the majority labels of its children.
struct Split {
  std::size_t feature = 0;
  double threshold = 0.0;
  Label left_label = 0;
  Label right_label = 0;
  /// Misclassified rows of the two children under their majority labels.
  std::size_t errors = 0;

  friend bool operator==(const Split&, const Split&) = default;
};

/// Majority label with ties resolved to 0.
constexpr Label majority(std::size_t zeros, std::size_t ones) noexcept { return ones > zeros ? 1 : 0; }

/// Largest double s with a <= s < b, close to the midpoint of a < b.
double split_point(double a, double b) noexcept;

/// Best split of `rows` under misclassification impurity.
///
/// Scans every feature and every midpoint between consecutive distinct
/// values; ties go to the smallest feature, then the smallest threshold.
/// Empty when the rows are pure, inseparable, or when no split strictly
/// lowers the misclassification count.
std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::size_t min_node_size = 1);

/// CART growing with empirical risk as the node impurity.
///
/// Every impure node that some threshold separates is split at its
/// lowest-error split (same tie-breaks as best_split), breadth-first until
/// `limits` stop it. Subtrees that do not lower the training error of their
/// root are then collapsed, so every internal node of the result strictly
/// reduces training error. Leaves take majority labels. With all feature
/// rows distinct and no limits, the training risk is 0.
TreeClassifier grow_maximal(const Dataset& data, const GrowLimits& limits = {});

}  // namespace pentree
