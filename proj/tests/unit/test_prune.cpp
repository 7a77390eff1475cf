#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "pentree/error.hpp"
#include "pentree/grow.hpp"
#include "pentree/oracle.hpp"
#include "pentree/prune.hpp"

using namespace pentree;
using testing::line_data;

namespace {

// Eight points on a line; the left child of the root is the weakest link.
Dataset eight_points() { return line_data({1, 2, 3, 4, 5, 6, 7, 8}, {0, 1, 1, 1, 0, 0, 0, 0}); }
TreeClassifier eight_tree() { return parse_tree("node(1, 4.5, node(1, 1.5, leaf(0), leaf(1)), leaf(0))"); }

// errors/n + alpha size, scaled by n * den(alpha) to stay integral.
Int128 scaled_cost(std::size_t errors, std::size_t size, const Rational& alpha, std::size_t n) {
  return static_cast<Int128>(errors) * alpha.den() +
         static_cast<Int128>(alpha.num()) * static_cast<Int128>(size) * static_cast<Int128>(n);
}

}  // namespace

TEST_CASE("weakest_link on a single leaf") {
  const Dataset d = line_data({1, 2, 3}, {1, 1, 0});
  const PrunedSequence seq = weakest_link(TreeClassifier::leaf(0), d);
  REQUIRE(seq.length() == 1);
  CHECK(seq.subtrees[0] == TreeClassifier::leaf(1));
  CHECK(seq.alphas == std::vector<double>{0.0});
  CHECK(seq.errors == std::vector<std::size_t>{1});
  CHECK(seq.index_at(5.0) == 0);
}

TEST_CASE("weakest_link hand-computed sequence") {
  const PrunedSequence seq = weakest_link(eight_tree(), eight_points());
  REQUIRE(seq.length() == 3);
  CHECK(seq.subtrees[0].size() == 3);
  CHECK(seq.subtrees[1] == TreeClassifier::stump(0, 4.5, 1, 0));
  CHECK(seq.subtrees[2] == TreeClassifier::leaf(0));
  CHECK(seq.exact_alphas == std::vector<Rational>{Rational(0, 1), Rational(1, 8), Rational(1, 4)});
  CHECK(seq.errors == std::vector<std::size_t>{0, 1, 3});
  CHECK(seq.risks == std::vector<double>{0.0, 0.125, 0.375});
  CHECK(seq.index_at(0.1249) == 0);
  CHECK(seq.index_at(0.125) == 1);
  CHECK(seq.index_at(Rational(1, 4)) == 2);
  CHECK(sequence_csv(seq) == "size,risk,alpha\n3,0,0\n2,0.125,0.125\n1,0.375,0.25\n");
}

TEST_CASE("a child weaker than its parent is skipped") {
  // The root gains 1 error over 2 leaves, its left child 1 error over 1.
  const Dataset d = line_data({1, 2, 3, 4, 5, 6}, {0, 1, 0, 0, 0, 0});
  const PrunedSequence seq = weakest_link(parse_tree("node(1, 2.5, node(1, 1.5, leaf(0), leaf(1)), leaf(0))"), d);
  REQUIRE(seq.length() == 2);
  CHECK(seq.exact_alphas[1] == Rational(1, 12));
  CHECK(seq.subtrees[1].size() == 1);
}

TEST_CASE("nodes that do not lower the error are folded into T0") {
  const Dataset d = line_data({1, 2, 3, 4}, {0, 0, 1, 1});
  const PrunedSequence seq =
      weakest_link(parse_tree("node(1, 2.5, node(1, 1.5, leaf(1), leaf(0)), leaf(1))"), d);
  REQUIRE(seq.length() == 2);
  CHECK(seq.subtrees[0] == TreeClassifier::stump(0, 2.5, 0, 1));
  CHECK_THROWS_AS(weakest_link(parse_tree("node(3, 0, leaf(0), leaf(1))"), d), InputError);
}

TEST_CASE("prune_with_penalty examples") {
  const PrunedSequence seq = weakest_link(eight_tree(), eight_points());
  CHECK(penalized_index(seq, [](std::size_t) { return 0.0; }) == 0);
  CHECK(penalized_index(seq, [](std::size_t k) { return 0.3 * static_cast<double>(k); }) == 2);
  CHECK(penalized_index(seq, [](std::size_t k) { return 0.1 * std::sqrt(static_cast<double>(k)); }) == 0);
  CHECK(prune_with_penalty(seq, [](std::size_t k) { return 0.15 * static_cast<double>(k); }) ==
        seq.subtrees[1]);
  // 0.25 k ties the stump and the root; the smaller tree wins.
  CHECK(penalized_index(seq, [](std::size_t k) { return 0.25 * static_cast<double>(k); }) == 2);
  CHECK_THROWS_AS(penalized_index(PrunedSequence{}, [](std::size_t) { return 0.0; }), InputError);
}

TEST_CASE("brute_force_best_subtree examples") {
  const Selection s = brute_force_best_subtree(eight_tree(), eight_points(),
                                               [](std::size_t k) { return 0.25 * static_cast<double>(k); });
  CHECK(s.tree == TreeClassifier::leaf(0));
  CHECK(s.cost == 0.625);
  const auto all = enumerate_pruned_subtrees(eight_tree(), eight_points());
  CHECK(all.size() == 3);
}

TEST_CASE("weakest_link sequence properties on random data") {
  Engine rng = make_engine(21);
  for (int trial = 0; trial < 250; ++trial) {
    std::uniform_int_distribution<std::size_t> n(1, 30), leaves(1, 9);
    const Dataset d = testing::random_dataset(rng, n(rng), 3, trial % 2 == 0);
    const TreeClassifier base = trial % 3 == 0 ? testing::random_tree(rng, leaves(rng), 3) : grow_maximal(d);
    const PrunedSequence seq = weakest_link(base, d);
    const std::size_t K = seq.length();
    REQUIRE(K >= 1);
    CHECK(seq.exact_alphas[0] == Rational(0, 1));
    CHECK(seq.subtrees[K - 1].size() == 1);
    CHECK(is_pruned_subtree(seq.subtrees[0], base));
    for (std::size_t k = 0; k < K; ++k) {
      CHECK(seq.errors[k] == misclassified(seq.subtrees[k], d));
      CHECK(seq.alphas[k] == seq.exact_alphas[k].to_double());
      if (k + 1 == K) continue;
      CHECK(is_pruned_subtree(seq.subtrees[k + 1], seq.subtrees[k]));
      CHECK(seq.subtrees[k + 1].size() < seq.subtrees[k].size());
      CHECK(seq.exact_alphas[k] < seq.exact_alphas[k + 1]);
      CHECK(seq.errors[k] <= seq.errors[k + 1]);
    }

    // Exact optimality against every pruned subtree, at every critical alpha
    // and at points strictly between and beyond them.
    const auto all = enumerate_pruned_subtrees(base, d);
    std::vector<Rational> probes = seq.exact_alphas;
    for (std::size_t k = 0; k + 1 < K; ++k) {
      const Rational& a = seq.exact_alphas[k];
      const Rational& b = seq.exact_alphas[k + 1];
      probes.emplace_back(a.num() * b.den() + b.num() * a.den(), 2 * a.den() * b.den());
    }
    probes.emplace_back(seq.exact_alphas[K - 1].num() * 2 + 1, seq.exact_alphas[K - 1].den());
    for (const Rational& alpha : probes) {
      const std::size_t k = seq.index_at(alpha);
      const Int128 ours = scaled_cost(seq.errors[k], seq.subtrees[k].size(), alpha, d.rows());
      Int128 best = ours;
      std::size_t best_size = seq.subtrees[k].size();
      for (const PrunedSubtree& s : all) {
        const Int128 c = scaled_cost(s.errors, s.size, alpha, d.rows());
        if (c < best || (c == best && s.size < best_size)) {
          best = c;
          best_size = s.size;
        }
      }
      CHECK(ours == best);
      CHECK(seq.subtrees[k].size() == best_size);
    }

    // Geometric means of consecutive alphas select the element in between.
    for (std::size_t k = 1; k + 1 < K; ++k)
      CHECK(seq.index_at(std::sqrt(seq.alphas[k] * seq.alphas[k + 1])) == k);
  }
}

TEST_CASE("penalized_index agrees with brute force for random penalties") {
  Engine rng = make_engine(22);
  std::uniform_real_distribution<double> c(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> n(2, 24);
    const Dataset d = testing::random_dataset(rng, n(rng), 2, trial % 2 == 1);
    const TreeClassifier base = grow_maximal(d);
    const PrunedSequence seq = weakest_link(base, d);
    const double a = c(rng), b = c(rng);
    const SizePenalty pen = [a, b](std::size_t k) {
      const double kk = static_cast<double>(k);
      return a * std::sqrt(kk) + b * kk * 0.1;
    };
    const std::size_t k = penalized_index(seq, pen);
    const Selection brute = brute_force_best_subtree(base, d, pen);
    CHECK(seq.risks[k] + pen(seq.subtrees[k].size()) == doctest::Approx(brute.cost).epsilon(1e-12));
  }
}
