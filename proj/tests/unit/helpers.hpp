#pragma once

// Builders and random generators shared by the unit tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "pentree/data.hpp"
#include "pentree/random.hpp"
#include "pentree/tree.hpp"

namespace testing {

using namespace pentree;

/// One informative column plus a constant second column, since datasets
/// need p >= 2.
inline Dataset line_data(const std::vector<double>& x, const std::vector<Label>& y) {
  std::vector<double> flat;
  for (double v : x) {
    flat.push_back(v);
    flat.push_back(0.0);
  }
  return Dataset(x.size(), 2, std::move(flat), y);
}

inline Dataset table(std::size_t p, const std::vector<double>& flat, const std::vector<Label>& y) {
  return Dataset(y.size(), p, flat, y);
}

/// n rows, p columns. Values come from a small integer grid when `ties` is
/// set, otherwise from a standard normal; labels are fair coin flips.
inline Dataset random_dataset(Engine& rng, std::size_t n, std::size_t p, bool ties) {
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> grid(0, 3);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> x(n * p);
  std::vector<Label> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j)
      x[i * p + j] = ties ? static_cast<double>(grid(rng)) : gauss(rng);
    y[i] = coin(rng) ? 1 : 0;
  }
  return Dataset(n, p, std::move(x), std::move(y));
}

namespace detail_gen {

inline NodeId build(Engine& rng, std::vector<Node>& nodes, std::size_t leaves, std::size_t p) {
  const auto id = static_cast<NodeId>(nodes.size());
  nodes.emplace_back();
  std::bernoulli_distribution coin(0.5);
  nodes[id].label = coin(rng) ? 1 : 0;
  if (leaves == 1) return id;
  std::uniform_int_distribution<std::size_t> cut(1, leaves - 1);
  std::uniform_int_distribution<std::size_t> var(0, p - 1);
  std::uniform_int_distribution<int> thr(-4, 4);
  const std::size_t left_leaves = cut(rng);
  nodes[id].feature = var(rng);
  nodes[id].threshold = thr(rng) * 0.5;
  const NodeId l = build(rng, nodes, left_leaves, p);
  const NodeId r = build(rng, nodes, leaves - left_leaves, p);
  nodes[id].left = l;
  nodes[id].right = r;
  return id;
}

}  // namespace detail_gen

/// Random tree with exactly `leaves` leaves over features 0..p-1, stored in
/// pre-order.
inline TreeClassifier random_tree(Engine& rng, std::size_t leaves, std::size_t p) {
  std::vector<Node> nodes;
  detail_gen::build(rng, nodes, leaves, p);
  return TreeClassifier(std::move(nodes));
}

/// Random pruning of `tree`: each internal node is cut with probability q.
inline TreeClassifier random_pruning(Engine& rng, const TreeClassifier& tree, double q) {
  std::bernoulli_distribution cut(q);
  std::vector<bool> mask(tree.nodes().size());
  for (std::size_t k = 0; k < mask.size(); ++k) mask[k] = !tree.nodes()[k].is_leaf() && cut(rng);
  return tree.collapsed(mask);
}

/// Independent label count for a tree: walks the nodes directly.
inline Label walk(const TreeClassifier& tree, std::span<const double> x) {
  NodeId id = tree.root();
  while (!tree.node(id).is_leaf()) {
    const Node& nd = tree.node(id);
    id = x[nd.feature] > nd.threshold ? nd.right : nd.left;
  }
  return tree.node(id).label;
}

inline std::size_t naive_errors(const TreeClassifier& tree, const Dataset& data) {
  std::size_t e = 0;
  for (std::size_t i = 0; i < data.rows(); ++i) e += walk(tree, data.row(i)) != data.y(i);
  return e;
}

}  // namespace testing
