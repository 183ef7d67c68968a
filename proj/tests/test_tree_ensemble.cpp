#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dcode/rng.hpp"
#include "dcode/tree_ensemble.hpp"

using namespace dcode;

namespace {

const std::string kFixtures = DCODE_FIXTURE_DIR;

DecisionTree leaf_tree(double value) {
    DecisionTree t;
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, value});
    return t;
}

// {x[feature] < threshold -> lo, else hi}
DecisionTree stump(int feature, double threshold, double lo, double hi) {
    DecisionTree t;
    t.nodes.push_back(TreeNode{feature, threshold, 1, 2, 0.0});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, lo});
    t.nodes.push_back(TreeNode{-1, 0.0, -1, -1, hi});
    return t;
}

Box unit_box(std::size_t dim) {
    Box b;
    b.lower.assign(dim, 0.0);
    b.upper.assign(dim, 1.0);
    return b;
}

} // namespace

TEST_CASE("constant tree evaluates to its leaf everywhere") {
    TreeEnsemble ens;
    ens.trees.push_back(leaf_tree(7.0));
    CHECK(ensemble_eval(ens, std::vector<double>{0.0}) == 7.0);
    CHECK(ensemble_eval(ens, std::vector<double>{123.0}) == 7.0);
    CHECK(ensemble_dim(ens) == 0);
}

TEST_CASE("hand descent on a depth-1 tree") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    CHECK(ensemble_eval(ens, std::vector<double>{0.7}) == -2.0);
    CHECK(ensemble_eval(ens, std::vector<double>{0.3}) == 1.0);
    CHECK(ensemble_eval(ens, std::vector<double>{0.5}) == -2.0); // boundary goes right
}

TEST_CASE("duplicated tree doubles the value, additivity over subsets") {
    TreeEnsemble one;
    one.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    TreeEnsemble two;
    two.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    two.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    for (double x : {0.1, 0.5, 0.9}) {
        const std::vector<double> pt = {x};
        CHECK(ensemble_eval(two, pt) == 2.0 * ensemble_eval(one, pt));
    }

    // additivity over an arbitrary split of trees
    TreeEnsemble mixed;
    mixed.trees.push_back(stump(0, 0.3, 4.0, 0.5));
    mixed.trees.push_back(stump(1, 0.6, -1.0, 2.5));
    mixed.trees.push_back(leaf_tree(0.25));
    TreeEnsemble first_two, last_one;
    first_two.trees = {mixed.trees[0], mixed.trees[1]};
    last_one.trees = {mixed.trees[2]};
    const std::vector<double> pt = {0.44, 0.9};
    CHECK(ensemble_eval(mixed, pt) ==
          ensemble_eval(first_two, pt) + ensemble_eval(last_one, pt));
}

TEST_CASE("feature index beyond the input dimension throws") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(3, 0.5, 0.0, 1.0));
    CHECK_THROWS(ensemble_eval(ens, std::vector<double>{0.1, 0.2}));
}

TEST_CASE("validate rejects malformed trees") {
    // contradictory path: x0 < 0.2 on the left, then a split at 0.8 inside it
    // whose right branch (x0 >= 0.8) is unreachable
    DecisionTree bad;
    bad.nodes.push_back(TreeNode{0, 0.2, 1, 4, 0.0});
    bad.nodes.push_back(TreeNode{0, 0.8, 2, 3, 0.0});
    bad.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1.0});
    bad.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 2.0});
    bad.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 3.0});
    TreeEnsemble ens;
    ens.trees.push_back(bad);
    CHECK_THROWS(validate(ens));

    // dangling child index
    DecisionTree dangle;
    dangle.nodes.push_back(TreeNode{0, 0.5, 1, 7, 0.0});
    dangle.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 1.0});
    TreeEnsemble ens2;
    ens2.trees.push_back(dangle);
    CHECK_THROWS(validate(ens2));

    // non-finite leaf
    TreeEnsemble ens3;
    ens3.trees.push_back(leaf_tree(std::nan("")));
    CHECK_THROWS(validate(ens3));
}

TEST_CASE("json round-trip preserves evaluation") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.25, -1.5, 2.0));
    ens.trees.push_back(stump(1, 0.75, 3.0, 0.5));
    const std::string text = ensemble_to_json(ens);
    const TreeEnsemble back = ensemble_from_json(text);
    SeededRng rng(17);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = {rng.next_double(), rng.next_double()};
        CHECK(ensemble_eval(back, x) == ensemble_eval(ens, x));
    }
}

TEST_CASE("json loader rejects unknown keys and junk") {
    CHECK_THROWS(ensemble_from_json(R"([{"leaf": 1.0, "extra": 2}])"));
    CHECK_THROWS(ensemble_from_json(R"([{"feature": 0, "threshold": 0.5}])"));
    CHECK_THROWS(ensemble_from_json(R"({"not": "an array"})"));
    CHECK_THROWS(ensemble_from_json("nonsense"));
}

TEST_CASE("bundled ensemble fixtures load and evaluate") {
    const TreeEnsemble demo = load_ensemble(kFixtures + "/ensembles/demo.json");
    REQUIRE(demo.trees.size() == 1);
    CHECK(ensemble_eval(demo, std::vector<double>{0.7}) == -2.0);
    CHECK(ensemble_eval(demo, std::vector<double>{0.2}) == 1.0);

    const TreeEnsemble three = load_ensemble(kFixtures + "/ensembles/three_trees.json");
    CHECK(three.trees.size() == 3);
    CHECK(ensemble_dim(three) == 3);
}

TEST_CASE("brute force: single-leaf trees sum their leaves") {
    TreeEnsemble ens;
    ens.trees.push_back(leaf_tree(2.0));
    ens.trees.push_back(leaf_tree(-0.5));
    const TeooResult r = teoo_brute_force(ens, unit_box(1));
    CHECK(r.value == 1.5);
}

TEST_CASE("brute force: depth-1 tree picks the winning half") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    const TeooResult r = teoo_brute_force(ens, unit_box(1));
    CHECK(r.value == -2.0);
    REQUIRE(r.x.size() == 1);
    CHECK(r.x[0] >= 0.5);
    CHECK(r.x[0] <= 1.0);
    CHECK(joint_box_count(ens, unit_box(1)) == 2);
}

TEST_CASE("brute force: two trees on different features enumerate 4 boxes") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    ens.trees.push_back(stump(1, 0.25, -0.75, 4.0));
    const Box b = unit_box(2);
    CHECK(joint_box_count(ens, b) == 4);
    const TeooResult r = teoo_brute_force(ens, b);
    // minimum joint value: x0 >= 0.5 (-2.0) and x1 < 0.25 (-0.75)
    CHECK(r.value == -2.75);
    CHECK(r.x[0] >= 0.5);
    CHECK(r.x[1] < 0.25);
    CHECK(ensemble_eval(ens, r.x) == r.value);
}

TEST_CASE("brute force respects the bounding box") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    Box left_only;
    left_only.lower = {0.0};
    left_only.upper = {0.4}; // the -2.0 region is unreachable
    const TeooResult r = teoo_brute_force(ens, left_only);
    CHECK(r.value == 1.0);
    CHECK(joint_box_count(ens, left_only) == 1);
}

TEST_CASE("brute force rejects combinatorial explosions") {
    // 21 trees x 2 leaves = 2^21 > 10^6 combinations
    TreeEnsemble ens;
    for (int i = 0; i < 21; ++i) ens.trees.push_back(stump(0, 0.5, 0.0, 1.0));
    try {
        (void)teoo_brute_force(ens, unit_box(1));
        FAIL("expected runtime_error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("shrink the ensemble") != std::string::npos);
    }
}

TEST_CASE("teoo_minimize never beats the oracle and hits it with budget") {
    TreeEnsemble ens;
    ens.trees.push_back(stump(0, 0.5, 1.0, -2.0));
    const Box b = unit_box(1);
    const TeooResult oracle = teoo_brute_force(ens, b);

    SeededRng rng(23);
    const TeooResult found = teoo_minimize(ens, b, 500, rng);
    CHECK(found.value >= oracle.value);
    CHECK(found.value == oracle.value); // budget 500 on 2 boxes
    CHECK(ensemble_eval(ens, found.x) == found.value);
}

TEST_CASE("teoo_minimize matches the oracle on the 3-tree fixture") {
    const TreeEnsemble ens = load_ensemble(kFixtures + "/ensembles/three_trees.json");
    const Box b = unit_box(3);
    const TeooResult oracle = teoo_brute_force(ens, b);
    SeededRng rng(29);
    const TeooResult found = teoo_minimize(ens, b, 2000, rng);
    CHECK(found.value == oracle.value);
}

TEST_CASE("teoo_minimize is deterministic and validates inputs") {
    const TreeEnsemble ens = load_ensemble(kFixtures + "/ensembles/three_trees.json");
    const Box b = unit_box(3);
    SeededRng a(31), c(31);
    const TeooResult ra = teoo_minimize(ens, b, 300, a);
    const TeooResult rc = teoo_minimize(ens, b, 300, c);
    CHECK(ra.x == rc.x);
    CHECK(ra.value == rc.value);

    Box empty;
    empty.lower = {1.0};
    empty.upper = {0.0};
    SeededRng r2(1);
    TreeEnsemble one;
    one.trees.push_back(leaf_tree(1.0));
    CHECK_THROWS(teoo_minimize(one, empty, 100, r2));
    SeededRng r3(1);
    CHECK_THROWS(teoo_minimize(one, unit_box(1), 0, r3));
}
