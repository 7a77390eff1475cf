#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "pentree/data.hpp"
#include "pentree/rational.hpp"
#include "pentree/tree.hpp"

namespace pentree {

/// Penalty as a function of tree size |T|.
using SizePenalty = std::function<double(std::size_t)>;

/// Nested pruned subtrees T0 >= T1 >= ... >= TK with their critical alphas.
///
/// subtrees[k] minimizes risk + alpha |T| over all pruned subtrees of T0 for
/// every alpha in [alphas[k], alphas[k+1]), choosing the smallest tree on
/// ties. TK is the root leaf and alphas[0] = 0. Alphas are kept as exact
/// fractions of (misclassified rows per leaf) / n.
struct PrunedSequence {
  std::vector<TreeClassifier> subtrees;
  std::vector<Rational> exact_alphas;
  std::vector<double> alphas;
  std::vector<std::size_t> errors;
  std::vector<double> risks;
  std::size_t rows = 0;

  std::size_t length() const noexcept { return subtrees.size(); }
  /// Index of the subtree active at alpha: the last k with alphas[k] <= alpha.
  std::size_t index_at(double alpha) const;
  std::size_t index_at(const Rational& alpha) const;
  const TreeClassifier& at_alpha(double alpha) const { return subtrees[index_at(alpha)]; }
};

/// Cost-complexity (weakest-link) pruning of `tree` against `data`.
///
/// Node labels are reset to the majority label of the training rows that
/// reach them. Repeatedly collapses every internal node minimizing
/// g(t) = (errors(t) - errors(T_t)) / (|T_t| - 1). Nodes whose subtree does
/// not lower the error are folded into T0, so alphas strictly increase.
PrunedSequence weakest_link(const TreeClassifier& tree, const Dataset& data);

/// Position in `seq` minimizing risk + pen(|T|); ties go to the smaller tree.
std::size_t penalized_index(const PrunedSequence& seq, const SizePenalty& pen);
TreeClassifier prune_with_penalty(const PrunedSequence& seq, const SizePenalty& pen);

/// CSV dump with columns size,risk,alpha.
std::string sequence_csv(const PrunedSequence& seq);

}  // namespace pentree
