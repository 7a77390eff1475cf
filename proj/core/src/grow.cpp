#include "pentree/grow.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <numeric>
#include <vector>

#include "pentree/error.hpp"

namespace pentree {

void GrowLimits::validate() const {
  if (max_leaves && *max_leaves < 1) throw ParameterError("max_leaves must be >= 1");
  if (min_node_size < 1) throw ParameterError("min_node_size must be >= 1");
}

double split_point(double a, double b) noexcept {
  const double mid = a + (b - a) / 2.0;
  return (mid >= a && mid < b) ? mid : a;
}

namespace {

using RowIndex = std::uint32_t;

// Column-major copy: scans walk one column at a time.
struct Columns {
  std::size_t n = 0;
  std::vector<double> values;

  explicit Columns(const Dataset& data) : n(data.rows()), values(data.rows() * data.dimension()) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < data.dimension(); ++j) values[j * n + i] = data.x(i, j);
  }
  double at(std::size_t j, RowIndex i) const noexcept { return values[j * n + i]; }
};

// Lowest-error separating split of the rows listed in `sorted[j]` (each the
// same row set, sorted by feature j). Strict improvement only, so earlier
// features and smaller thresholds win ties.
std::optional<Split> scan(const Columns& cols, std::span<const Label> y,
                          const std::vector<std::span<const RowIndex>>& sorted,
                          std::size_t min_node_size) {
  const std::size_t m = sorted.front().size();
  std::size_t total1 = 0;
  for (RowIndex r : sorted.front()) total1 += y[r];
  const std::size_t total0 = m - total1;

  std::optional<Split> best;
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    const auto rows = sorted[j];
    std::size_t l0 = 0, l1 = 0;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      (y[rows[i]] ? l1 : l0) += 1;
      const double a = cols.at(j, rows[i]);
      const double b = cols.at(j, rows[i + 1]);
      if (!(a < b)) continue;
      const std::size_t left = i + 1;
      if (left < min_node_size || m - left < min_node_size) continue;
      const std::size_t r0 = total0 - l0, r1 = total1 - l1;
      const std::size_t errors = std::min(l0, l1) + std::min(r0, r1);
      if (!best || errors < best->errors)
        best = Split{j, split_point(a, b), majority(l0, l1), majority(r0, r1), errors};
    }
  }
  return best;
}

}  // namespace

std::optional<Split> best_split(const Dataset& data, std::span<const std::size_t> rows,
                                std::size_t min_node_size) {
  if (rows.empty()) throw InputError("best_split needs a nonempty row subset");
  if (min_node_size < 1) throw ParameterError("min_node_size must be >= 1");
  const Columns cols(data);
  const std::size_t p = data.dimension();
  std::vector<std::vector<RowIndex>> order(p);
  std::vector<std::span<const RowIndex>> views(p);
  for (std::size_t j = 0; j < p; ++j) {
    order[j].reserve(rows.size());
    for (std::size_t r : rows) {
      if (r >= data.rows()) throw InputError("row index out of range");
      order[j].push_back(static_cast<RowIndex>(r));
    }
    std::stable_sort(order[j].begin(), order[j].end(),
                     [&](RowIndex a, RowIndex b) { return cols.at(j, a) < cols.at(j, b); });
    views[j] = order[j];
  }
  std::size_t ones = 0;
  for (std::size_t r : rows) ones += data.y(r);
  const std::size_t node_errors = std::min(ones, rows.size() - ones);

  auto split = scan(cols, data.labels(), views, min_node_size);
  if (!split || split->errors >= node_errors) return std::nullopt;
  return split;
}

TreeClassifier grow_maximal(const Dataset& data, const GrowLimits& limits) {
  limits.validate();
  const std::size_t n = data.rows();
  const std::size_t p = data.dimension();
  const Columns cols(data);
  const auto y = data.labels();

  // order[j] holds all rows sorted by feature j; each node owns the same
  // contiguous range [lo, hi) in every order[j].
  std::vector<std::vector<RowIndex>> order(p, std::vector<RowIndex>(n));
  for (std::size_t j = 0; j < p; ++j) {
    std::iota(order[j].begin(), order[j].end(), RowIndex{0});
    std::stable_sort(order[j].begin(), order[j].end(),
                     [&](RowIndex a, RowIndex b) { return cols.at(j, a) < cols.at(j, b); });
  }

  struct Pending {
    NodeId id;
    std::size_t lo, hi;
  };
  std::vector<Node> nodes(1);
  std::vector<std::size_t> node_errors(1);
  std::deque<Pending> queue{{0, 0, n}};
  std::size_t leaves = 1;
  std::vector<char> goes_right(n, 0);
  std::vector<RowIndex> scratch(n);
  std::vector<std::span<const RowIndex>> views(p);

  while (!queue.empty()) {
    const Pending cur = queue.front();
    queue.pop_front();
    const std::size_t m = cur.hi - cur.lo;
    std::size_t ones = 0;
    for (std::size_t i = cur.lo; i < cur.hi; ++i) ones += y[order[0][i]];
    nodes[cur.id].label = majority(m - ones, ones);
    node_errors[cur.id] = std::min(ones, m - ones);

    if (node_errors[cur.id] == 0) continue;
    if (limits.max_leaves && leaves >= *limits.max_leaves) continue;
    for (std::size_t j = 0; j < p; ++j)
      views[j] = std::span<const RowIndex>(order[j].data() + cur.lo, m);
    const auto split = scan(cols, y, views, limits.min_node_size);
    if (!split) continue;

    for (std::size_t i = cur.lo; i < cur.hi; ++i) {
      const RowIndex r = order[0][i];
      goes_right[r] = cols.at(split->feature, r) > split->threshold;
    }
    std::size_t left_count = 0;
    for (std::size_t j = 0; j < p; ++j) {
      auto& ord = order[j];
      std::size_t l = cur.lo, rr = 0;
      for (std::size_t i = cur.lo; i < cur.hi; ++i) {
        if (goes_right[ord[i]]) scratch[rr++] = ord[i];
        else ord[l++] = ord[i];
      }
      std::copy(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(rr),
                ord.begin() + static_cast<std::ptrdiff_t>(l));
      left_count = l - cur.lo;
    }

    const auto left = static_cast<NodeId>(nodes.size());
    nodes.resize(nodes.size() + 2);
    node_errors.resize(nodes.size());
    Node& parent = nodes[cur.id];
    parent.feature = split->feature;
    parent.threshold = split->threshold;
    parent.left = left;
    parent.right = left + 1;
    ++leaves;
    queue.push_back({left, cur.lo, cur.lo + left_count});
    queue.push_back({left + 1, cur.lo + left_count, cur.hi});
  }

  // Collapse zero-gain subtrees bottom-up; breadth-first ids put children
  // after parents, so a reverse sweep sees children first.
  std::vector<std::size_t> subtree_errors(nodes.size());
  std::vector<bool> collapse(nodes.size(), false);
  for (std::size_t k = nodes.size(); k-- > 0;) {
    const Node& nd = nodes[k];
    if (nd.is_leaf()) {
      subtree_errors[k] = node_errors[k];
      continue;
    }
    const std::size_t below = subtree_errors[nd.left] + subtree_errors[nd.right];
    if (below >= node_errors[k]) {
      collapse[k] = true;
      subtree_errors[k] = node_errors[k];
    } else {
      subtree_errors[k] = below;
    }
  }
  TreeClassifier grown(std::move(nodes));
  if (std::none_of(collapse.begin(), collapse.end(), [](bool c) { return c; })) return grown;
  return grown.collapsed(collapse);
}

}  // namespace pentree
