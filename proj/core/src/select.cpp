#include <algorithm>
#include <cmath>
#include <numeric>

#include "pentree/error.hpp"
#include "pentree/random.hpp"
#include "pentree/select.hpp"

namespace pentree {

Selection select_tree(const Dataset& data, const PenaltySpec& spec, const GrowLimits& limits) {
  validate(spec);
  const TreeClassifier grown = grow_maximal(data, limits);
  const PrunedSequence seq = weakest_link(grown, data);
  const std::size_t n = data.rows();
  const std::size_t p = data.dimension();
  const SizePenalty pen = [&](std::size_t k) { return penalty_value(spec, k, n, p); };
  const std::size_t k = penalized_index(seq, pen);
  return Selection{seq.subtrees[k], seq.risks[k] + pen(seq.subtrees[k].size())};
}

namespace {

std::vector<double> candidate_alphas(const PrunedSequence& seq) {
  std::vector<double> out{0.0};
  const std::size_t last = seq.length() - 1;
  for (std::size_t k = 1; k < last; ++k)
    out.push_back(std::sqrt(seq.alphas[k] * seq.alphas[k + 1]));
  if (last >= 1) out.push_back(2.0 * seq.alphas[last]);
  return out;
}

}  // namespace

CVResult cv_select_alpha(const Dataset& data, const CVConfig& cfg, const GrowLimits& limits) {
  const std::size_t n = data.rows();
  if (cfg.folds < 2) throw ParameterError("cross-validation needs at least 2 folds");
  if (cfg.folds > n) throw ParameterError("more folds than rows");

  const std::size_t ones = data.count_label(1);
  if (ones == 0 || ones == n) {
    CVResult out;
    out.tree = TreeClassifier::leaf(ones == n ? 1 : 0);
    out.candidates = {0.0};
    out.cv_risk = {0.0};
    return out;
  }

  const PrunedSequence full = weakest_link(grow_maximal(data, limits), data);
  CVResult out;
  out.candidates = candidate_alphas(full);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Engine engine = make_engine(derive_seed(cfg.seed, {0x43565f666f6c64ULL}));
  std::shuffle(perm.begin(), perm.end(), engine);
  std::vector<std::size_t> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[perm[i]] = i % cfg.folds;

  std::vector<std::size_t> held_out_errors(out.candidates.size(), 0);
  std::vector<std::size_t> train_rows, test_rows;
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    train_rows.clear();
    test_rows.clear();
    for (std::size_t i = 0; i < n; ++i) (fold[i] == f ? test_rows : train_rows).push_back(i);
    const Dataset train = data.subset(train_rows);
    const Dataset test = data.subset(test_rows);
    const PrunedSequence seq = weakest_link(grow_maximal(train, limits), train);
    for (std::size_t c = 0; c < out.candidates.size(); ++c)
      held_out_errors[c] += misclassified(seq.at_alpha(out.candidates[c]), test);
  }

  std::size_t best = 0;
  out.cv_risk.resize(out.candidates.size());
  for (std::size_t c = 0; c < out.candidates.size(); ++c) {
    out.cv_risk[c] = static_cast<double>(held_out_errors[c]) / static_cast<double>(n);
    if (held_out_errors[c] <= held_out_errors[best]) best = c;
  }
  if (cfg.rule == CVRule::OneSE) {
    const double r = out.cv_risk[best];
    const double bound = r + std::sqrt(r * (1.0 - r) / static_cast<double>(n));
    for (std::size_t c = out.candidates.size(); c-- > best;)
      if (out.cv_risk[c] <= bound) {
        best = c;
        break;
      }
  }
  out.alpha = out.candidates[best];
  const double alpha = out.alpha;
  out.tree = prune_with_penalty(full, [alpha](std::size_t k) { return alpha * static_cast<double>(k); });
  return out;
}

}  // namespace pentree
