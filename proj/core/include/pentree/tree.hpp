#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pentree/data.hpp"

namespace pentree {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoChild = std::numeric_limits<NodeId>::max();

/// Arena node. Internal when it has children: rows with
/// x[feature] > threshold go right, the rest (including equality) go left.
/// `label` is the leaf label, or for an internal node the label it takes
/// when collapsed into a leaf.
struct Node {
  std::size_t feature = 0;  // zero-based column index
  double threshold = 0.0;
  NodeId left = kNoChild;
  NodeId right = kNoChild;
  Label label = 0;

  bool is_leaf() const noexcept { return left == kNoChild; }
};

/// Binary classification tree stored as an index-based arena, root first.
///
/// Invariants: every node has 0 or 2 children and is reachable from the
/// root exactly once, so |leaves| - |internal| = 1.
class TreeClassifier {
 public:
  TreeClassifier() : TreeClassifier(leaf(0)) {}
  explicit TreeClassifier(std::vector<Node> nodes, NodeId root = 0);

  static TreeClassifier leaf(Label label);
  static TreeClassifier stump(std::size_t feature, double threshold, Label left, Label right);

  NodeId root() const noexcept { return root_; }
  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::span<const Node> nodes() const noexcept { return nodes_; }

  /// Number of leaves |T|.
  std::size_t size() const noexcept { return leaves_; }
  std::size_t internal_count() const noexcept { return nodes_.size() - leaves_; }
  std::size_t depth() const;
  /// Minimum length of a feature vector this tree can classify.
  std::size_t required_dimension() const noexcept;
  /// Sorted distinct zero-based features used by internal nodes.
  std::vector<std::size_t> features_used() const;

  NodeId leaf_of(std::span<const double> x) const noexcept;
  Label predict(std::span<const double> x) const;

  /// Copy where every node flagged in `collapse` (indexed by node id) becomes
  /// a leaf carrying its own label. The result is laid out breadth-first.
  TreeClassifier collapsed(const std::vector<bool>& collapse) const;
  /// Copy with node labels replaced (indexed by node id).
  TreeClassifier relabeled(std::span<const Label> labels) const;

  /// Same classifier: identical structure, splits, and leaf labels.
  /// Labels stored on internal nodes are ignored.
  friend bool operator==(const TreeClassifier& a, const TreeClassifier& b);

 private:
  std::vector<Node> nodes_;
  NodeId root_ = 0;
  std::size_t leaves_ = 1;
};

Label predict(const TreeClassifier& tree, std::span<const double> x);

/// Rows of `data` the tree misclassifies.
std::size_t misclassified(const TreeClassifier& tree, const Dataset& data);
/// Fraction of misclassified rows.
double empirical_risk(const TreeClassifier& tree, const Dataset& data);

struct LossEstimate {
  double risk = 0.0;
  double loss = 0.0;
  /// Binomial standard error of `risk`.
  double standard_error = 0.0;
};

/// Monte Carlo misclassification rate on m fresh draws from the design, and
/// its excess over the Bayes risk. Only the columns the tree reads are
/// simulated.
LossEstimate loss_estimate(const TreeClassifier& tree, const DesignSpec& spec, std::size_t m,
                           std::uint64_t seed);

/// True iff `a` is `b` with zero or more internal nodes collapsed into
/// leaves. Leaf labels are ignored; retained splits must match exactly.
bool is_pruned_subtree(const TreeClassifier& a, const TreeClassifier& b);

/// Pre-order text form: `node(j, s, left, right)` with one-based j, or
/// `leaf(label)`. Thresholds print in shortest round-trip form.
std::string to_text(const TreeClassifier& tree);
TreeClassifier parse_tree(std::string_view text);

// Tree classes: a configuration (shape) plus the ordered variable list.

struct ShapeNode {
  std::int32_t left = -1;
  std::int32_t right = -1;

  bool is_leaf() const noexcept { return left < 0; }
  friend auto operator<=>(const ShapeNode&, const ShapeNode&) = default;
};

/// Node hierarchy without splits or labels, nodes numbered breadth-first.
class Shape {
 public:
  Shape() : nodes_{ShapeNode{}} {}
  explicit Shape(std::vector<ShapeNode> bfs_nodes);

  static Shape of(const TreeClassifier& tree);
  /// Pre-order code with 'I' for internal nodes and 'L' for leaves;
  /// "IILLL" is the left-leaning 3-leaf shape.
  static Shape from_preorder(std::string_view code);
  std::string preorder() const;

  std::span<const ShapeNode> nodes() const noexcept { return nodes_; }
  std::size_t leaves() const noexcept { return (nodes_.size() + 1) / 2; }
  std::size_t internal_count() const noexcept { return nodes_.size() / 2; }

  friend auto operator<=>(const Shape&, const Shape&) = default;

 private:
  std::vector<ShapeNode> nodes_;
};

/// Class C_{c,l}: shape plus one variable per internal node, the k-th entry
/// going to the k-th internal node in breadth-first order.
struct ClassDescriptor {
  Shape shape;
  std::vector<std::size_t> variables;

  /// Throws ParameterError if the list length does not match the shape.
  void validate() const;
  friend auto operator<=>(const ClassDescriptor&, const ClassDescriptor&) = default;
};

ClassDescriptor describe(const TreeClassifier& tree);

/// Member of the class with the given thresholds (one per internal node,
/// breadth-first) and leaf labels (one per leaf, breadth-first).
TreeClassifier instantiate(const ClassDescriptor& desc, std::span<const double> thresholds,
                           std::span<const Label> leaf_labels);

}  // namespace pentree
