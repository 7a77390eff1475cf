#include "pentree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include <fmt/format.h>

#include "pentree/error.hpp"
#include "pentree/grow.hpp"

namespace pentree {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// -inf, the midpoints of consecutive distinct values, +inf.
std::vector<double> threshold_candidates(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<double> out{-kInf};
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    out.push_back(split_point(values[i], values[i + 1]));
  out.push_back(kInf);
  return out;
}

class ShapeRouter {
 public:
  ShapeRouter(const ClassDescriptor& desc)
      : nodes_(desc.shape.nodes()), variables_(desc.variables), ordinal_(nodes_.size()) {
    int internal = 0, leaf = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      ordinal_[i] = nodes_[i].is_leaf() ? leaf++ : internal++;
  }

  std::size_t leaf_of(std::span<const double> x, std::span<const double> thresholds) const {
    std::size_t id = 0;
    while (!nodes_[id].is_leaf()) {
      const auto k = static_cast<std::size_t>(ordinal_[id]);
      id = static_cast<std::size_t>(x[variables_[k]] > thresholds[k] ? nodes_[id].right
                                                                      : nodes_[id].left);
    }
    return static_cast<std::size_t>(ordinal_[id]);
  }

 private:
  std::span<const ShapeNode> nodes_;
  std::span<const std::size_t> variables_;
  std::vector<int> ordinal_;
};

// Mixed-radix counter over per-node candidate lists, first node most
// significant, so iteration follows lexicographic threshold order.
class ThresholdOdometer {
 public:
  ThresholdOdometer(std::vector<std::vector<double>> candidates, std::size_t cap)
      : candidates_(std::move(candidates)), index_(candidates_.size(), 0),
        current_(candidates_.size()) {
    std::size_t total = 1;
    for (const auto& c : candidates_)
      if (__builtin_mul_overflow(total, c.size(), &total) || total > cap)
        throw ResourceError(fmt::format("threshold combinations exceed the cap {}", cap));
    for (std::size_t k = 0; k < candidates_.size(); ++k) current_[k] = candidates_[k][0];
  }

  std::span<const double> current() const noexcept { return current_; }

  bool next() {
    std::size_t pos = index_.size();
    while (pos > 0) {
      --pos;
      if (++index_[pos] < candidates_[pos].size()) {
        current_[pos] = candidates_[pos][index_[pos]];
        return true;
      }
      index_[pos] = 0;
      current_[pos] = candidates_[pos][0];
    }
    return false;
  }

 private:
  std::vector<std::vector<double>> candidates_;
  std::vector<std::size_t> index_;
  std::vector<double> current_;
};

void check_variables(const ClassDescriptor& desc, std::size_t dimension) {
  desc.validate();
  for (std::size_t v : desc.variables)
    if (v >= dimension)
      throw InputError(fmt::format("class uses feature {} but data has p = {}", v + 1, dimension));
}

}  // namespace

ClassFit erm_in_class(const ClassDescriptor& desc, const Dataset& data,
                      const OracleLimits& limits) {
  check_variables(desc, data.dimension());
  const std::size_t leaves = desc.shape.leaves();
  std::vector<std::vector<double>> candidates;
  for (std::size_t v : desc.variables) {
    std::vector<double> column(data.rows());
    for (std::size_t i = 0; i < data.rows(); ++i) column[i] = data.x(i, v);
    candidates.push_back(threshold_candidates(std::move(column)));
  }
  ThresholdOdometer odometer(std::move(candidates), limits.max_threshold_combinations);
  const ShapeRouter router(desc);

  std::vector<std::size_t> zeros(leaves), ones(leaves);
  std::size_t best_errors = std::numeric_limits<std::size_t>::max();
  std::vector<double> best_thresholds;
  std::vector<Label> best_labels(leaves);
  do {
    std::fill(zeros.begin(), zeros.end(), 0);
    std::fill(ones.begin(), ones.end(), 0);
    for (std::size_t i = 0; i < data.rows(); ++i)
      (data.y(i) ? ones : zeros)[router.leaf_of(data.row(i), odometer.current())] += 1;
    std::size_t errors = 0;
    for (std::size_t l = 0; l < leaves; ++l) errors += std::min(zeros[l], ones[l]);
    if (errors < best_errors) {
      best_errors = errors;
      best_thresholds.assign(odometer.current().begin(), odometer.current().end());
      for (std::size_t l = 0; l < leaves; ++l) best_labels[l] = majority(zeros[l], ones[l]);
    }
  } while (odometer.next());

  ClassFit fit;
  fit.tree = instantiate(desc, best_thresholds, best_labels);
  fit.errors = best_errors;
  fit.risk = static_cast<double>(best_errors) / static_cast<double>(data.rows());
  return fit;
}

Selection exhaustive_select(const Dataset& data, const PenaltySpec& spec, std::size_t k_max,
                            const OracleLimits& limits) {
  validate(spec);
  if (k_max < 1) throw ParameterError("k_max must be >= 1");
  const std::size_t n = data.rows();
  const std::size_t p = data.dimension();
  Selection best{TreeClassifier{}, kInf};
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double pen = penalty_value(spec, k, n, p);
    for (const ClassDescriptor& desc : enumerate_classes(p, k, limits).classes) {
      ClassFit fit = erm_in_class(desc, data, limits);
      const double cost = fit.risk + pen;
      if (cost < best.cost) best = Selection{std::move(fit.tree), cost};
    }
  }
  return best;
}

std::uint64_t shattering_count(const ClassDescriptor& desc,
                               const std::vector<std::vector<double>>& sample,
                               const OracleLimits& limits) {
  desc.validate();
  if (sample.size() > 64) throw ResourceError("shattering_count handles at most 64 points");
  if (sample.empty()) return 1;
  const std::size_t dimension = sample.front().size();
  for (const auto& x : sample)
    if (x.size() != dimension) throw InputError("sample points differ in dimension");
  check_variables(desc, std::max<std::size_t>(dimension, 2));
  for (std::size_t v : desc.variables)
    if (v >= dimension) throw InputError("class reads a feature the sample lacks");

  const std::size_t leaves = desc.shape.leaves();
  if (leaves > 20) throw ResourceError("too many leaves to enumerate labelings");
  std::vector<std::vector<double>> candidates;
  for (std::size_t v : desc.variables) {
    std::vector<double> column;
    for (const auto& x : sample) column.push_back(x[v]);
    candidates.push_back(threshold_candidates(std::move(column)));
  }
  ThresholdOdometer odometer(std::move(candidates),
                             limits.max_threshold_combinations >> std::min<std::size_t>(leaves, 20));
  const ShapeRouter router(desc);

  std::unordered_set<std::uint64_t> traces;
  std::vector<std::uint64_t> members(leaves);
  do {
    std::fill(members.begin(), members.end(), 0);
    for (std::size_t i = 0; i < sample.size(); ++i)
      members[router.leaf_of(sample[i], odometer.current())] |= std::uint64_t{1} << i;
    for (std::uint64_t labeling = 0; labeling < (std::uint64_t{1} << leaves); ++labeling) {
      std::uint64_t trace = 0;
      for (std::size_t l = 0; l < leaves; ++l)
        if (labeling >> l & 1U) trace |= members[l];
      traces.insert(trace);
    }
  } while (odometer.next());
  return traces.size();
}

namespace {

// Number of pruned subtrees below `id`, saturating at `cap + 1`.
std::size_t count_pruned(const TreeClassifier& tree, NodeId id, std::size_t cap) {
  const Node& nd = tree.node(id);
  if (nd.is_leaf()) return 1;
  const std::size_t l = count_pruned(tree, nd.left, cap);
  const std::size_t r = count_pruned(tree, nd.right, cap);
  std::size_t product = 0;
  if (__builtin_mul_overflow(l, r, &product) || product >= cap) return cap + 1;
  return product + 1;
}

// Every set of cut points that yields a distinct pruned subtree below `id`.
std::vector<std::vector<NodeId>> cut_sets(const TreeClassifier& tree, NodeId id) {
  const Node& nd = tree.node(id);
  if (nd.is_leaf()) return {{}};
  std::vector<std::vector<NodeId>> out{{id}};
  const auto left = cut_sets(tree, nd.left);
  const auto right = cut_sets(tree, nd.right);
  for (const auto& a : left)
    for (const auto& b : right) {
      std::vector<NodeId> both = a;
      both.insert(both.end(), b.begin(), b.end());
      out.push_back(std::move(both));
    }
  return out;
}

}  // namespace

std::vector<PrunedSubtree> enumerate_pruned_subtrees(const TreeClassifier& tree,
                                                     const Dataset& data,
                                                     const OracleLimits& limits) {
  if (count_pruned(tree, tree.root(), limits.max_pruned_subtrees) > limits.max_pruned_subtrees)
    throw ResourceError(
        fmt::format("tree has more than {} pruned subtrees", limits.max_pruned_subtrees));

  const auto nodes = tree.nodes();
  std::vector<std::size_t> zeros(nodes.size(), 0), ones(nodes.size(), 0);
  for (std::size_t i = 0; i < data.rows(); ++i) {
    NodeId id = tree.root();
    for (;;) {
      (data.y(i) ? ones : zeros)[id] += 1;
      if (nodes[id].is_leaf()) break;
      id = data.x(i, nodes[id].feature) > nodes[id].threshold ? nodes[id].right : nodes[id].left;
    }
  }
  std::vector<Label> labels(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k)
    labels[k] = zeros[k] + ones[k] == 0 ? nodes[k].label : majority(zeros[k], ones[k]);
  const TreeClassifier base = tree.relabeled(labels);

  std::vector<PrunedSubtree> out;
  for (const auto& cuts : cut_sets(tree, tree.root())) {
    std::vector<bool> mask(nodes.size(), false);
    for (NodeId c : cuts) mask[c] = true;
    TreeClassifier sub = base.collapsed(mask);
    const std::size_t errors = misclassified(sub, data);
    const std::size_t size = sub.size();
    out.push_back(PrunedSubtree{std::move(sub), errors, size});
  }
  return out;
}

Selection brute_force_best_subtree(const TreeClassifier& tree, const Dataset& data,
                                   const SizePenalty& pen, const OracleLimits& limits) {
  const auto all = enumerate_pruned_subtrees(tree, data, limits);
  const auto n = static_cast<double>(data.rows());
  const PrunedSubtree* best = nullptr;
  double best_cost = kInf;
  for (const auto& s : all) {
    const double cost = static_cast<double>(s.errors) / n + pen(s.size);
    if (!best || cost < best_cost || (cost == best_cost && s.size < best->size)) {
      best = &s;
      best_cost = cost;
    }
  }
  return Selection{best->tree, best_cost};
}

}  // namespace pentree
