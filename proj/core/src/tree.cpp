#include "pentree/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <memory>
#include <utility>

#include <fmt/format.h>

#include "pentree/error.hpp"

namespace pentree {

TreeClassifier::TreeClassifier(std::vector<Node> nodes, NodeId root)
    : nodes_(std::move(nodes)), root_(root) {
  if (nodes_.empty()) throw InputError("tree has no nodes");
  if (root_ >= nodes_.size()) throw InputError("tree root out of range");

  std::vector<bool> seen(nodes_.size(), false);
  std::vector<NodeId> stack{root_};
  std::size_t reached = 0;
  leaves_ = 0;
  while (!stack.empty()) {
    const NodeId id = stack.back();
    stack.pop_back();
    if (seen[id]) throw InputError(fmt::format("tree node {} is reachable twice", id));
    seen[id] = true;
    ++reached;
    const Node& nd = nodes_[id];
    if (nd.label > 1) throw InputError("tree labels must be 0 or 1");
    if (nd.is_leaf()) {
      if (nd.right != kNoChild) throw InputError(fmt::format("tree node {} has one child", id));
      ++leaves_;
      continue;
    }
    if (nd.right == kNoChild) throw InputError(fmt::format("tree node {} has one child", id));
    if (nd.left >= nodes_.size() || nd.right >= nodes_.size())
      throw InputError(fmt::format("tree node {} has a child out of range", id));
    if (std::isnan(nd.threshold)) throw InputError("tree threshold is NaN");
    stack.push_back(nd.right);
    stack.push_back(nd.left);
  }
  if (reached != nodes_.size()) throw InputError("tree has unreachable nodes");
}

TreeClassifier TreeClassifier::leaf(Label label) {
  Node nd;
  nd.label = label;
  return TreeClassifier({nd});
}

TreeClassifier TreeClassifier::stump(std::size_t feature, double threshold, Label left,
                                     Label right) {
  std::vector<Node> nodes(3);
  nodes[0] = Node{feature, threshold, 1, 2, left};
  nodes[1].label = left;
  nodes[2].label = right;
  return TreeClassifier(std::move(nodes));
}

std::size_t TreeClassifier::depth() const {
  std::size_t best = 0;
  std::vector<std::pair<NodeId, std::size_t>> stack{{root_, 0}};
  while (!stack.empty()) {
    auto [id, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const Node& nd = nodes_[id];
    if (!nd.is_leaf()) {
      stack.emplace_back(nd.left, d + 1);
      stack.emplace_back(nd.right, d + 1);
    }
  }
  return best;
}

std::size_t TreeClassifier::required_dimension() const noexcept {
  std::size_t dim = 0;
  for (const Node& nd : nodes_)
    if (!nd.is_leaf()) dim = std::max(dim, nd.feature + 1);
  return dim;
}

std::vector<std::size_t> TreeClassifier::features_used() const {
  std::vector<std::size_t> out;
  for (const Node& nd : nodes_)
    if (!nd.is_leaf()) out.push_back(nd.feature);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NodeId TreeClassifier::leaf_of(std::span<const double> x) const noexcept {
  NodeId id = root_;
  while (!nodes_[id].is_leaf()) {
    const Node& nd = nodes_[id];
    id = x[nd.feature] > nd.threshold ? nd.right : nd.left;
  }
  return id;
}

Label TreeClassifier::predict(std::span<const double> x) const {
  if (x.size() < required_dimension())
    throw InputError(fmt::format("point has {} coordinates, tree reads feature {}", x.size(),
                                 required_dimension()));
  return nodes_[leaf_of(x)].label;
}

TreeClassifier TreeClassifier::collapsed(const std::vector<bool>& collapse) const {
  if (collapse.size() != nodes_.size())
    throw InputError("collapse mask does not match the node count");
  std::vector<Node> out;
  out.reserve(nodes_.size());
  // Breadth-first copy; `pending` pairs an old id with its slot in `out`.
  std::deque<std::pair<NodeId, NodeId>> pending{{root_, 0}};
  out.push_back(nodes_[root_]);
  while (!pending.empty()) {
    auto [old_id, new_id] = pending.front();
    pending.pop_front();
    const Node& src = nodes_[old_id];
    if (src.is_leaf() || collapse[old_id]) {
      out[new_id].left = out[new_id].right = kNoChild;
      continue;
    }
    const auto l = static_cast<NodeId>(out.size());
    out.push_back(nodes_[src.left]);
    const auto r = static_cast<NodeId>(out.size());
    out.push_back(nodes_[src.right]);
    out[new_id].left = l;
    out[new_id].right = r;
    pending.emplace_back(src.left, l);
    pending.emplace_back(src.right, r);
  }
  return TreeClassifier(std::move(out));
}

TreeClassifier TreeClassifier::relabeled(std::span<const Label> labels) const {
  if (labels.size() != nodes_.size()) throw InputError("label vector does not match node count");
  std::vector<Node> out = nodes_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = labels[i];
  return TreeClassifier(std::move(out), root_);
}

namespace {

bool same_subtree(const TreeClassifier& a, NodeId ia, const TreeClassifier& b, NodeId ib) {
  const Node& x = a.node(ia);
  const Node& y = b.node(ib);
  if (x.is_leaf() || y.is_leaf()) return x.is_leaf() && y.is_leaf() && x.label == y.label;
  return x.feature == y.feature && x.threshold == y.threshold &&
         same_subtree(a, x.left, b, y.left) && same_subtree(a, x.right, b, y.right);
}

bool pruned_from(const TreeClassifier& a, NodeId ia, const TreeClassifier& b, NodeId ib) {
  const Node& x = a.node(ia);
  if (x.is_leaf()) return true;
  const Node& y = b.node(ib);
  if (y.is_leaf()) return false;
  return x.feature == y.feature && x.threshold == y.threshold &&
         pruned_from(a, x.left, b, y.left) && pruned_from(a, x.right, b, y.right);
}

}  // namespace

bool operator==(const TreeClassifier& a, const TreeClassifier& b) {
  return a.size() == b.size() && same_subtree(a, a.root(), b, b.root());
}

bool is_pruned_subtree(const TreeClassifier& a, const TreeClassifier& b) {
  return a.size() <= b.size() && pruned_from(a, a.root(), b, b.root());
}

Label predict(const TreeClassifier& tree, std::span<const double> x) { return tree.predict(x); }

std::size_t misclassified(const TreeClassifier& tree, const Dataset& data) {
  if (data.dimension() < tree.required_dimension())
    throw InputError(fmt::format("dataset has p = {}, tree reads feature {}", data.dimension(),
                                 tree.required_dimension()));
  std::size_t errors = 0;
  for (std::size_t i = 0; i < data.rows(); ++i)
    errors += tree.node(tree.leaf_of(data.row(i))).label != data.y(i);
  return errors;
}

double empirical_risk(const TreeClassifier& tree, const Dataset& data) {
  return static_cast<double>(misclassified(tree, data)) / static_cast<double>(data.rows());
}

LossEstimate loss_estimate(const TreeClassifier& tree, const DesignSpec& spec, std::size_t m,
                           std::uint64_t seed) {
  spec.validate();
  if (m < 1) throw ParameterError("loss_estimate needs m >= 1");
  if (tree.required_dimension() > spec.p)
    throw InputError("tree reads a feature the design does not have");

  auto mask = std::make_unique<bool[]>(spec.p);
  for (std::size_t j : tree.features_used()) mask[j] = true;

  Engine engine = make_engine(seed);
  std::vector<double> x(spec.p, 0.0);
  std::size_t errors = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Label y = draw_observation(spec, engine, x, std::span<const bool>(mask.get(), spec.p));
    errors += tree.node(tree.leaf_of(x)).label != y;
  }
  LossEstimate out;
  out.risk = static_cast<double>(errors) / static_cast<double>(m);
  out.loss = out.risk - bayes_risk(spec);
  out.standard_error = std::sqrt(out.risk * (1.0 - out.risk) / static_cast<double>(m));
  return out;
}

// ---------------------------------------------------------------------------
// Shapes and class descriptors

Shape::Shape(std::vector<ShapeNode> bfs_nodes) : nodes_(std::move(bfs_nodes)) {
  if (nodes_.empty() || nodes_.size() % 2 == 0)
    throw InputError("a binary tree shape has an odd number of nodes");
  // Breadth-first numbering means children appear in increasing order,
  // consecutively, right after all earlier nodes' children.
  std::int32_t next = 1;
  for (const ShapeNode& nd : nodes_) {
    if (nd.is_leaf()) {
      if (nd.right >= 0) throw InputError("shape node with one child");
      continue;
    }
    if (nd.left != next || nd.right != next + 1) throw InputError("shape is not in BFS order");
    next += 2;
  }
  if (static_cast<std::size_t>(next) != nodes_.size()) throw InputError("malformed shape");
}

Shape Shape::of(const TreeClassifier& tree) {
  std::vector<ShapeNode> out{ShapeNode{}};
  std::deque<std::pair<NodeId, std::size_t>> pending{{tree.root(), 0}};
  while (!pending.empty()) {
    auto [id, slot] = pending.front();
    pending.pop_front();
    const Node& nd = tree.node(id);
    if (nd.is_leaf()) continue;
    const auto l = static_cast<std::int32_t>(out.size());
    out.push_back({});
    out.push_back({});
    out[slot] = ShapeNode{l, l + 1};
    pending.emplace_back(nd.left, static_cast<std::size_t>(l));
    pending.emplace_back(nd.right, static_cast<std::size_t>(l + 1));
  }
  return Shape(std::move(out));
}

Shape Shape::from_preorder(std::string_view code) {
  // Build a temporary arena in pre-order, then renumber breadth-first.
  std::vector<Node> arena;
  std::size_t pos = 0;
  auto build = [&](auto&& self) -> NodeId {
    if (pos >= code.size()) throw InputError("truncated shape code");
    const char c = code[pos++];
    const auto id = static_cast<NodeId>(arena.size());
    arena.push_back(Node{});
    if (c == 'L') return id;
    if (c != 'I') throw InputError(fmt::format("bad shape code character '{}'", c));
    const NodeId l = self(self);
    const NodeId r = self(self);
    arena[id].left = l;
    arena[id].right = r;
    return id;
  };
  build(build);
  if (pos != code.size()) throw InputError("trailing characters in shape code");
  return of(TreeClassifier(std::move(arena)));
}

std::string Shape::preorder() const {
  std::string out;
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    const ShapeNode& nd = nodes_[static_cast<std::size_t>(id)];
    out += nd.is_leaf() ? 'L' : 'I';
    if (!nd.is_leaf()) {
      self(self, nd.left);
      self(self, nd.right);
    }
  };
  walk(walk, 0);
  return out;
}

void ClassDescriptor::validate() const {
  if (variables.size() != shape.internal_count())
    throw ParameterError(fmt::format("variable list has {} entries, shape has {} internal nodes",
                                     variables.size(), shape.internal_count()));
}

ClassDescriptor describe(const TreeClassifier& tree) {
  ClassDescriptor desc{Shape::of(tree), {}};
  std::deque<NodeId> pending{tree.root()};
  while (!pending.empty()) {
    const Node& nd = tree.node(pending.front());
    pending.pop_front();
    if (nd.is_leaf()) continue;
    desc.variables.push_back(nd.feature);
    pending.push_back(nd.left);
    pending.push_back(nd.right);
  }
  return desc;
}

TreeClassifier instantiate(const ClassDescriptor& desc, std::span<const double> thresholds,
                           std::span<const Label> leaf_labels) {
  desc.validate();
  if (thresholds.size() != desc.shape.internal_count())
    throw ParameterError("one threshold per internal node required");
  if (leaf_labels.size() != desc.shape.leaves())
    throw ParameterError("one label per leaf required");
  const auto shape = desc.shape.nodes();
  std::vector<Node> nodes(shape.size());
  std::size_t k = 0;
  std::size_t leaf = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (shape[i].is_leaf()) {
      nodes[i].label = leaf_labels[leaf++];
    } else {
      nodes[i].feature = desc.variables[k];
      nodes[i].threshold = thresholds[k];
      ++k;
      nodes[i].left = static_cast<NodeId>(shape[i].left);
      nodes[i].right = static_cast<NodeId>(shape[i].right);
    }
  }
  return TreeClassifier(std::move(nodes));
}

}  // namespace pentree
