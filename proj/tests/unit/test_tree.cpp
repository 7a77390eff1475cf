#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "helpers.hpp"
#include "pentree/error.hpp"
#include "pentree/tree.hpp"

using namespace pentree;
using testing::line_data;

namespace {

// P(chi2 with 3 degrees of freedom <= x), closed form.
double chi2_3_cdf(double x) {
  return std::erf(std::sqrt(x / 2)) - std::sqrt(2 * x / std::numbers::pi) * std::exp(-x / 2);
}

// The Bayes rule of design 1 as a tree: 0 on the positive quadrant.
TreeClassifier design1_bayes_tree() {
  return parse_tree("node(1, 0, leaf(1), node(2, 0, leaf(1), leaf(0)))");
}

}  // namespace

TEST_CASE("predict examples") {
  const TreeClassifier stump = TreeClassifier::stump(0, 0.5, 0, 1);
  CHECK(predict(stump, std::vector<double>{0.7}) == 1);
  CHECK(predict(stump, std::vector<double>{0.5}) == 0);
  CHECK(predict(TreeClassifier::leaf(1), std::vector<double>{}) == 1);
  const TreeClassifier deep = parse_tree("node(3, 0, leaf(0), leaf(1))");
  CHECK_THROWS_AS(predict(deep, std::vector<double>{1.0, 2.0}), InputError);
}

TEST_CASE("empirical_risk examples") {
  CHECK(empirical_risk(TreeClassifier::leaf(0), line_data({1, 2, 3, 4}, {0, 0, 1, 1})) == 0.5);
  const Dataset d = line_data({1, 2, 3, 4}, {0, 1, 1, 0});
  CHECK(empirical_risk(TreeClassifier::stump(0, 2.5, 0, 1), d) == 0.5);
  CHECK(empirical_risk(TreeClassifier::stump(0, 2.5, 0, 1), line_data({1, 2, 3, 4}, {0, 0, 1, 1})) == 0.0);
}

TEST_CASE("empirical_risk agrees with a naive recount on random trees") {
  Engine rng = make_engine(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> leaves(1, 9), rows(1, 30);
    const TreeClassifier t = testing::random_tree(rng, leaves(rng), 3);
    const Dataset d = testing::random_dataset(rng, rows(rng), 3, trial % 2 == 0);
    CHECK(misclassified(t, d) == testing::naive_errors(t, d));
    for (std::size_t i = 0; i < d.rows(); ++i) CHECK(t.predict(d.row(i)) == testing::walk(t, d.row(i)));
    CHECK(t.size() - t.internal_count() == 1);
  }
}

TEST_CASE("tree construction rejects malformed arenas") {
  std::vector<Node> one_child(2);
  one_child[0].left = 1;
  CHECK_THROWS_AS(TreeClassifier{one_child}, InputError);

  std::vector<Node> shared(2);
  shared[0].left = 1;
  shared[0].right = 1;
  CHECK_THROWS_AS(TreeClassifier{shared}, InputError);

  std::vector<Node> orphan(4);
  orphan[0].left = 1;
  orphan[0].right = 2;
  CHECK_THROWS_AS(TreeClassifier{orphan}, InputError);

  std::vector<Node> nan(3);
  nan[0] = Node{0, std::nan(""), 1, 2, 0};
  CHECK_THROWS_AS(TreeClassifier{nan}, InputError);

  std::vector<Node> bad_label(1);
  bad_label[0].label = 2;
  CHECK_THROWS_AS(TreeClassifier{bad_label}, InputError);
}

TEST_CASE("loss_estimate") {
  SUBCASE("Bayes tree has no excess loss under design 1") {
    const DesignSpec spec{1, 1, 4, 0.1, 0};
    const LossEstimate e = loss_estimate(design1_bayes_tree(), spec, 100'000, 3);
    CHECK(std::abs(e.loss) <= 3 * e.standard_error);
  }
  SUBCASE("constant 0 under design 1") {
    const DesignSpec spec{1, 1, 2, 0.1, 0};
    const LossEstimate e = loss_estimate(TreeClassifier::leaf(0), spec, 100'000, 4);
    const double p1 = 0.25 * 0.1 + 0.75 * 0.9;
    CHECK(std::abs(e.risk - p1) <= 3 * std::sqrt(p1 * (1 - p1) / 1e5));
    CHECK(e.loss == doctest::Approx(e.risk - 0.1));
  }
  SUBCASE("constant 1 under design 4") {
    const DesignSpec spec{4, 1, 6, 0.2, 0};
    const double target = chi2_3_cdf(2.5);
    CHECK(target == doctest::Approx(0.525).epsilon(0.002));
    const LossEstimate e = loss_estimate(TreeClassifier::leaf(1), spec, 100'000, 5);
    CHECK(std::abs(e.risk - target) <= 3 * std::sqrt(target * (1 - target) / 1e5));
  }
  SUBCASE("only used columns are simulated, with the same law") {
    // A tree reading a non-core column of design 4 sees its true
    // distribution: compare against risk computed from full draws.
    const DesignSpec spec{4, 1, 5, 0.2, 0};
    const TreeClassifier t = parse_tree("node(5, 1.2, leaf(0), leaf(1))");
    Engine rng = make_engine(9);
    std::vector<double> x(5);
    std::size_t errors = 0;
    const std::size_t m = 100'000;
    for (std::size_t i = 0; i < m; ++i) {
      const Label y = draw_observation(spec, rng, x);
      errors += t.predict(x) != y;
    }
    const double full = static_cast<double>(errors) / static_cast<double>(m);
    const LossEstimate e = loss_estimate(t, spec, m, 10);
    CHECK(std::abs(e.risk - full) <= 4 * std::sqrt(2 * full * (1 - full) / static_cast<double>(m)));
  }
  CHECK_THROWS_AS(loss_estimate(TreeClassifier::leaf(0), DesignSpec{1, 1, 2, 0.1, 0}, 0, 1),
                  ParameterError);
  CHECK_THROWS_AS(loss_estimate(parse_tree("node(3, 0, leaf(0), leaf(1))"),
                                DesignSpec{1, 1, 2, 0.1, 0}, 10, 1),
                  InputError);
}

TEST_CASE("is_pruned_subtree examples") {
  Engine rng = make_engine(2);
  const TreeClassifier t = testing::random_tree(rng, 5, 3);
  CHECK(is_pruned_subtree(TreeClassifier::leaf(1), t));
  CHECK(is_pruned_subtree(t, t));
  const TreeClassifier a = parse_tree("node(1, 0.5, node(2, 7.25, leaf(0), leaf(1)), leaf(1))");
  const TreeClassifier b = parse_tree("node(1, 0.5, leaf(0), node(2, 1, leaf(0), leaf(1)))");
  CHECK_FALSE(is_pruned_subtree(a, b));
  CHECK_FALSE(is_pruned_subtree(b, a));
  CHECK(is_pruned_subtree(parse_tree("node(1, 0.5, leaf(1), leaf(0))"), a));
}

TEST_CASE("is_pruned_subtree is a partial order on random trees") {
  Engine rng = make_engine(3);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<std::size_t> leaves(1, 10);
    const TreeClassifier c = testing::random_tree(rng, leaves(rng), 3);
    const TreeClassifier b = testing::random_pruning(rng, c, 0.3);
    const TreeClassifier a = testing::random_pruning(rng, b, 0.3);
    CHECK(is_pruned_subtree(c, c));
    CHECK(is_pruned_subtree(b, c));
    CHECK(is_pruned_subtree(a, b));
    CHECK(is_pruned_subtree(a, c));
    if (is_pruned_subtree(c, b)) CHECK(Shape::of(b) == Shape::of(c));
    const TreeClassifier other = testing::random_tree(rng, leaves(rng), 3);
    if (is_pruned_subtree(other, c) && is_pruned_subtree(c, other))
      CHECK(to_text(c.relabeled(std::vector<Label>(c.nodes().size(), 0))) ==
            to_text(other.relabeled(std::vector<Label>(other.nodes().size(), 0))));
  }
}

TEST_CASE("collapsed and relabeled") {
  const TreeClassifier t = parse_tree("node(1, 0, node(2, 1, leaf(0), leaf(1)), leaf(1))");
  std::vector<bool> mask(t.nodes().size(), false);
  mask[t.root()] = true;
  const TreeClassifier root = t.collapsed(mask);
  CHECK(root.size() == 1);
  CHECK_THROWS_AS(t.collapsed(std::vector<bool>(2, false)), InputError);
  const TreeClassifier ones = t.relabeled(std::vector<Label>(t.nodes().size(), 1));
  CHECK(to_text(ones) == "node(1, 0, node(2, 1, leaf(1), leaf(1)), leaf(1))");
  CHECK(t.depth() == 2);
  CHECK(t.required_dimension() == 2);
  CHECK(t.features_used() == std::vector<std::size_t>{0, 1});
}

TEST_CASE("text format round trips exactly") {
  Engine rng = make_engine(4);
  std::normal_distribution<double> g(0.0, 1e3);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> leaves(1, 12);
    TreeClassifier t = testing::random_tree(rng, leaves(rng), 5);
    std::vector<Node> nodes(t.nodes().begin(), t.nodes().end());
    for (Node& nd : nodes) nd.threshold = g(rng) / 7.0;
    t = TreeClassifier(nodes);
    const TreeClassifier back = parse_tree(to_text(t));
    CHECK(back == t);
    CHECK(to_text(back) == to_text(t));
  }
  const double inf = std::numeric_limits<double>::infinity();
  const TreeClassifier edge = TreeClassifier::stump(1, -inf, 1, 0);
  CHECK(to_text(edge) == "node(2, -inf, leaf(1), leaf(0))");
  CHECK(parse_tree(to_text(edge)) == edge);
  CHECK(parse_tree("  node( 1 ,2.5,leaf(0) , leaf( 1 ) ) ") == TreeClassifier::stump(0, 2.5, 0, 1));

  CHECK_THROWS_AS(parse_tree(""), InputError);
  CHECK_THROWS_AS(parse_tree("leaf(2)"), InputError);
  CHECK_THROWS_AS(parse_tree("node(0, 1, leaf(0), leaf(1))"), InputError);
  CHECK_THROWS_AS(parse_tree("node(1, x, leaf(0), leaf(1))"), InputError);
  CHECK_THROWS_AS(parse_tree("node(1, 1, leaf(0))"), InputError);
  CHECK_THROWS_AS(parse_tree("leaf(0) leaf(1)"), InputError);
}

TEST_CASE("shapes and class descriptors") {
  const TreeClassifier t = parse_tree(
      "node(2, 0, node(1, 1, leaf(0), leaf(1)), node(3, 2, leaf(1), node(1, 3, leaf(0), leaf(1))))");
  const ClassDescriptor d = describe(t);
  CHECK(d.shape.preorder() == "IILLILILL");
  CHECK(d.shape == Shape::from_preorder("IILLILILL"));
  CHECK(d.variables == std::vector<std::size_t>{1, 0, 2, 0});
  CHECK(d.shape.leaves() == 5);
  CHECK(d.shape.internal_count() == 4);

  const std::vector<double> thresholds{0, 1, 2, 3};
  const std::vector<Label> labels{0, 1, 1, 0, 1};
  CHECK(instantiate(d, thresholds, labels) == t);
  CHECK_THROWS_AS(instantiate(d, std::vector<double>{0, 1}, labels), ParameterError);
  CHECK_THROWS_AS((ClassDescriptor{d.shape, {0, 1}}.validate()), ParameterError);

  CHECK(Shape{}.preorder() == "L");
  CHECK_THROWS_AS(Shape::from_preorder("IL"), InputError);
  CHECK_THROWS_AS(Shape::from_preorder("ILLL"), InputError);
  CHECK_THROWS_AS(Shape::from_preorder("IXL"), InputError);
}

TEST_CASE("shape pre-order codes round trip on random trees") {
  Engine rng = make_engine(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<std::size_t> leaves(1, 15);
    const TreeClassifier t = testing::random_tree(rng, leaves(rng), 4);
    const Shape s = Shape::of(t);
    CHECK(Shape::from_preorder(s.preorder()) == s);
    CHECK(s.leaves() == t.size());
    const ClassDescriptor d = describe(t);
    CHECK(d.variables.size() == t.internal_count());
    // Re-instantiating with the tree's own splits and labels reproduces it.
    std::vector<double> thr;
    std::vector<Label> lab;
    std::vector<NodeId> queue{t.root()};
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Node& nd = t.node(queue[q]);
      if (nd.is_leaf()) {
        lab.push_back(nd.label);
      } else {
        thr.push_back(nd.threshold);
        queue.push_back(nd.left);
        queue.push_back(nd.right);
      }
    }
    CHECK(instantiate(d, thr, lab) == t);
  }
}
