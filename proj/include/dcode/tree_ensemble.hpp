#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dcode/rng.hpp"

namespace dcode {

// Binary decision tree in flattened form: node 0 is the root, internal nodes
// carry (feature, threshold) and child indices, leaves carry a value.
// Descent convention: x[feature] < threshold goes left.
struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double leaf = 0.0;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
};

struct TreeEnsemble {
    std::vector<DecisionTree> trees;
};

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct TeooResult {
    std::vector<double> x;
    double value = 0.0;
};

// Smallest feature count covering every index referenced by the ensemble.
std::size_t ensemble_dim(const TreeEnsemble& ens);

// Throws if any root-to-leaf path is contradictory (empty box), a child link
// is malformed, or a leaf value is non-finite.
void validate(const TreeEnsemble& ens);

double tree_eval(const DecisionTree& tree, std::span<const double> x);
double ensemble_eval(const TreeEnsemble& ens, std::span<const double> x);

// JSON layout: top-level array of trees, each a nested node object
// {"feature": i, "threshold": t, "left": {...}, "right": {...}} or {"leaf": v}.
std::string ensemble_to_json(const TreeEnsemble& ens);
TreeEnsemble ensemble_from_json(const std::string& text);
TreeEnsemble load_ensemble(const std::filesystem::path& path);

// Exact global minimum over the box by enumerating joint leaf regions.
// Throws if the joint combination count exceeds 10^6.
TeooResult teoo_brute_force(const TreeEnsemble& ens, const Box& bounds);

// Number of non-empty joint leaf regions inside the box.
std::int64_t joint_box_count(const TreeEnsemble& ens, const Box& bounds);

// Sigmoid-scheduled random search: stratified uniform sampling early, then
// Gaussian perturbation of the incumbent with radius shrinking as 1 - E(t).
TeooResult teoo_minimize(const TreeEnsemble& ens, const Box& bounds, std::int64_t budget,
                         SeededRng& rng);

} // namespace dcode
