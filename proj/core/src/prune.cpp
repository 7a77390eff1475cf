#include "pentree/prune.hpp"

#include <algorithm>
#include <deque>
#include <optional>

#include <fmt/format.h>

#include "number_text.hpp"
#include "pentree/error.hpp"
#include "pentree/grow.hpp"

namespace pentree {

std::size_t PrunedSequence::index_at(double alpha) const {
  const auto it = std::upper_bound(alphas.begin(), alphas.end(), alpha);
  return it == alphas.begin() ? 0 : static_cast<std::size_t>(it - alphas.begin()) - 1;
}

std::size_t PrunedSequence::index_at(const Rational& alpha) const {
  const auto it = std::upper_bound(exact_alphas.begin(), exact_alphas.end(), alpha);
  return it == exact_alphas.begin() ? 0 : static_cast<std::size_t>(it - exact_alphas.begin()) - 1;
}

PrunedSequence weakest_link(const TreeClassifier& tree, const Dataset& data) {
  if (data.dimension() < tree.required_dimension())
    throw InputError("dataset has fewer features than the tree reads");
  const auto nodes = tree.nodes();
  const std::size_t count = nodes.size();

  std::vector<std::size_t> zeros(count, 0), ones(count, 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto x = data.row(i);
    NodeId id = tree.root();
    while (true) {
      (data.y(i) ? ones : zeros)[id] += 1;
      const Node& nd = nodes[id];
      if (nd.is_leaf()) break;
      id = x[nd.feature] > nd.threshold ? nd.right : nd.left;
    }
  }
  std::vector<Label> labels(count);
  std::vector<std::size_t> node_errors(count);
  for (std::size_t k = 0; k < count; ++k) {
    const bool empty = zeros[k] + ones[k] == 0;
    labels[k] = empty ? nodes[k].label : majority(zeros[k], ones[k]);
    node_errors[k] = std::min(zeros[k], ones[k]);
  }
  const TreeClassifier base = tree.relabeled(labels);

  std::vector<NodeId> bfs;
  bfs.reserve(count);
  for (std::deque<NodeId> q{tree.root()}; !q.empty(); q.pop_front()) {
    bfs.push_back(q.front());
    const Node& nd = nodes[q.front()];
    if (!nd.is_leaf()) {
      q.push_back(nd.left);
      q.push_back(nd.right);
    }
  }

  std::vector<bool> cut(count, false);
  std::vector<std::size_t> sub_errors(count), sub_leaves(count);
  std::vector<bool> active(count);
  const auto n = static_cast<std::int64_t>(data.rows());

  // Refreshes subtree totals under the current cuts and returns the minimal
  // g(t) over active internal nodes as (error increase, leaves saved).
  auto weakest = [&]() -> std::optional<std::pair<std::int64_t, std::int64_t>> {
    for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
      const NodeId k = *it;
      if (nodes[k].is_leaf() || cut[k]) {
        sub_errors[k] = node_errors[k];
        sub_leaves[k] = 1;
      } else {
        sub_errors[k] = sub_errors[nodes[k].left] + sub_errors[nodes[k].right];
        sub_leaves[k] = sub_leaves[nodes[k].left] + sub_leaves[nodes[k].right];
      }
    }
    std::fill(active.begin(), active.end(), false);
    active[tree.root()] = true;
    std::optional<std::pair<std::int64_t, std::int64_t>> best;
    for (NodeId k : bfs) {
      if (!active[k] || nodes[k].is_leaf() || cut[k]) continue;
      active[nodes[k].left] = active[nodes[k].right] = true;
      const auto gain = static_cast<std::int64_t>(node_errors[k] - sub_errors[k]);
      const auto saved = static_cast<std::int64_t>(sub_leaves[k] - 1);
      if (!best || static_cast<Int128>(gain) * best->second <
                       static_cast<Int128>(best->first) * saved)
        best = std::make_pair(gain, saved);
    }
    return best;
  };
  auto collapse_at = [&](std::pair<std::int64_t, std::int64_t> g) {
    for (NodeId k : bfs) {
      if (!active[k] || nodes[k].is_leaf() || cut[k]) continue;
      const auto gain = static_cast<std::int64_t>(node_errors[k] - sub_errors[k]);
      const auto saved = static_cast<std::int64_t>(sub_leaves[k] - 1);
      if (static_cast<Int128>(gain) * g.second == static_cast<Int128>(g.first) * saved)
        cut[k] = true;
    }
  };

  PrunedSequence seq;
  seq.rows = data.rows();
  auto snapshot = [&](Rational alpha) {
    seq.subtrees.push_back(base.collapsed(cut));
    seq.exact_alphas.push_back(alpha);
    seq.alphas.push_back(alpha.to_double());
    seq.errors.push_back(sub_errors[tree.root()]);
    seq.risks.push_back(static_cast<double>(sub_errors[tree.root()]) / static_cast<double>(n));
  };

  auto g = weakest();
  while (g && g->first == 0) {
    collapse_at(*g);
    g = weakest();
  }
  snapshot(Rational(0, 1));
  while (g) {
    collapse_at(*g);
    const Rational alpha(g->first, g->second * n);
    const auto next = weakest();
    if (!(seq.exact_alphas.back() < alpha))
      throw Error("weakest-link alphas failed to increase");
    snapshot(alpha);
    g = next;
  }
  return seq;
}

std::size_t penalized_index(const PrunedSequence& seq, const SizePenalty& pen) {
  if (seq.subtrees.empty()) throw InputError("empty pruned sequence");
  std::size_t best = 0;
  double best_cost = seq.risks[0] + pen(seq.subtrees[0].size());
  for (std::size_t k = 1; k < seq.length(); ++k) {
    const double cost = seq.risks[k] + pen(seq.subtrees[k].size());
    if (cost <= best_cost) {
      best = k;
      best_cost = cost;
    }
  }
  return best;
}

TreeClassifier prune_with_penalty(const PrunedSequence& seq, const SizePenalty& pen) {
  return seq.subtrees[penalized_index(seq, pen)];
}

std::string sequence_csv(const PrunedSequence& seq) {
  std::string out = "size,risk,alpha\n";
  for (std::size_t k = 0; k < seq.length(); ++k)
    out += fmt::format("{},{},{}\n", seq.subtrees[k].size(), detail::format_double(seq.risks[k]),
                       detail::format_double(seq.alphas[k]));
  return out;
}

}  // namespace pentree
