#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pentree/data.hpp"
#include "pentree/prune.hpp"
#include "pentree/select.hpp"
#include "pentree/tree.hpp"

namespace pentree {

/// Caps for the exhaustive procedures, which are exponential by nature.
struct OracleLimits {
  std::size_t max_classes = 100'000;
  std::size_t max_threshold_combinations = 2'000'000;
  std::size_t max_pruned_subtrees = 100'000;
};

/// Number of binary tree shapes with k leaves: C(2k-2, k-1) / k.
/// Throws ArithmeticError when the value does not fit in 64 bits.
std::uint64_t catalan(std::size_t k);

/// Number of tree classes of size k over p variables: p^(k-1) catalan(k).
std::uint64_t class_count(std::size_t p, std::size_t k);

/// Every shape with k leaves, by recursive left/right size splitting.
std::vector<Shape> enumerate_shapes(std::size_t k);

struct ClassEnumeration {
  std::size_t k = 1;
  std::vector<Shape> configurations;
  std::vector<ClassDescriptor> classes;
};

/// All (shape, variable list) pairs of size k over p variables, shapes in
/// enumeration order and lists in lexicographic order.
ClassEnumeration enumerate_classes(std::size_t p, std::size_t k, const OracleLimits& limits = {});

struct ClassFit {
  TreeClassifier tree;
  std::size_t errors = 0;
  double risk = 0.0;
};

/// Exact empirical risk minimizer within one class.
///
/// Each internal node tries -inf, +inf, and every midpoint between
/// consecutive distinct values of its variable; leaves take majority
/// labels. Ties go to the lexicographically smallest threshold vector.
ClassFit erm_in_class(const ClassDescriptor& desc, const Dataset& data,
                      const OracleLimits& limits = {});

/// Global minimizer of empirical risk + penalty over all classes of size
/// at most k_max. Ties go to the smaller size, then enumeration order.
Selection exhaustive_select(const Dataset& data, const PenaltySpec& spec, std::size_t k_max,
                            const OracleLimits& limits = {});

/// Number of distinct subsets {x in sample : f(x) = 1} over all f in the
/// class. At most 64 sample points.
std::uint64_t shattering_count(const ClassDescriptor& desc,
                               const std::vector<std::vector<double>>& sample,
                               const OracleLimits& limits = {});

/// One pruned subtree of a base tree, labels re-fit to the data.
struct PrunedSubtree {
  TreeClassifier tree;
  std::size_t errors = 0;
  std::size_t size = 1;
};

/// Every pruned subtree of `tree`, each leaf relabeled with the majority of
/// the training rows reaching it; errors are counted by direct evaluation.
std::vector<PrunedSubtree> enumerate_pruned_subtrees(const TreeClassifier& tree,
                                                     const Dataset& data,
                                                     const OracleLimits& limits = {});

/// Minimizer of risk + pen(|T|) over all pruned subtrees; ties go to the
/// smaller tree.
Selection brute_force_best_subtree(const TreeClassifier& tree, const Dataset& data,
                                   const SizePenalty& pen, const OracleLimits& limits = {});

}  // namespace pentree
