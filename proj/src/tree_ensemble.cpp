#include "dcode/tree_ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "dcode/efficiency.hpp"

namespace dcode {

namespace {

constexpr std::int64_t kComboCap = 1'000'000;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct LeafRegion {
    double value = 0.0;
    std::vector<double> lo; // inclusive
    std::vector<double> hi; // exclusive
};

void collect_leaves(const DecisionTree& tree, std::size_t node, std::vector<double>& lo,
                    std::vector<double>& hi, std::vector<LeafRegion>& out) {
    const TreeNode& nd = tree.nodes[node];
    if (nd.is_leaf()) {
        out.push_back({nd.leaf, lo, hi});
        return;
    }
    const auto f = static_cast<std::size_t>(nd.feature);
    const double saved_hi = hi[f];
    const double saved_lo = lo[f];
    hi[f] = std::min(saved_hi, nd.threshold);
    if (lo[f] < hi[f]) collect_leaves(tree, static_cast<std::size_t>(nd.left), lo, hi, out);
    hi[f] = saved_hi;
    lo[f] = std::max(saved_lo, nd.threshold);
    if (lo[f] < hi[f]) collect_leaves(tree, static_cast<std::size_t>(nd.right), lo, hi, out);
    lo[f] = saved_lo;
}

void validate_tree(const DecisionTree& tree, std::size_t node, std::vector<double>& lo,
                   std::vector<double>& hi, std::vector<char>& seen) {
    if (node >= tree.nodes.size()) throw std::invalid_argument("tree: child index out of range");
    if (seen[node]) throw std::invalid_argument("tree: node reached twice, not a tree");
    seen[node] = 1;
    const TreeNode& nd = tree.nodes[node];
    if (nd.is_leaf()) {
        if (!std::isfinite(nd.leaf)) throw std::invalid_argument("tree: non-finite leaf value");
        return;
    }
    if (!std::isfinite(nd.threshold)) throw std::invalid_argument("tree: non-finite threshold");
    if (nd.left < 0 || nd.right < 0) throw std::invalid_argument("tree: internal node missing child");
    const auto f = static_cast<std::size_t>(nd.feature);
    if (nd.threshold <= lo[f] || nd.threshold >= hi[f]) {
        throw std::invalid_argument("tree: contradictory path, threshold outside feasible box");
    }
    const double saved_hi = hi[f];
    hi[f] = nd.threshold;
    validate_tree(tree, static_cast<std::size_t>(nd.left), lo, hi, seen);
    hi[f] = saved_hi;
    const double saved_lo = lo[f];
    lo[f] = nd.threshold;
    validate_tree(tree, static_cast<std::size_t>(nd.right), lo, hi, seen);
    lo[f] = saved_lo;
}

nlohmann::json node_to_json(const DecisionTree& tree, std::size_t node) {
    const TreeNode& nd = tree.nodes[node];
    if (nd.is_leaf()) return nlohmann::json{{"leaf", nd.leaf}};
    return nlohmann::json{{"feature", nd.feature},
                          {"threshold", nd.threshold},
                          {"left", node_to_json(tree, static_cast<std::size_t>(nd.left))},
                          {"right", node_to_json(tree, static_cast<std::size_t>(nd.right))}};
}

int node_from_json(const nlohmann::json& j, DecisionTree& tree) {
    if (!j.is_object()) throw std::invalid_argument("ensemble json: node must be an object");
    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (j.contains("leaf")) {
        if (j.size() != 1) throw std::invalid_argument("ensemble json: leaf node has extra keys");
        if (!j["leaf"].is_number()) throw std::invalid_argument("ensemble json: leaf must be a number");
        tree.nodes[static_cast<std::size_t>(idx)].leaf = j["leaf"].get<double>();
        return idx;
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "feature" && key != "threshold" && key != "left" && key != "right") {
            throw std::invalid_argument("ensemble json: unknown node key '" + key + "'");
        }
    }
    if (!j.contains("feature") || !j.contains("threshold") || !j.contains("left") ||
        !j.contains("right")) {
        throw std::invalid_argument("ensemble json: internal node needs feature/threshold/left/right");
    }
    if (!j["feature"].is_number_integer() || j["feature"].get<int>() < 0) {
        throw std::invalid_argument("ensemble json: feature must be a nonnegative integer");
    }
    if (!j["threshold"].is_number()) {
        throw std::invalid_argument("ensemble json: threshold must be a number");
    }
    const int feature = j["feature"].get<int>();
    const double threshold = j["threshold"].get<double>();
    const int left = node_from_json(j["left"], tree);
    const int right = node_from_json(j["right"], tree);
    TreeNode& nd = tree.nodes[static_cast<std::size_t>(idx)];
    nd.feature = feature;
    nd.threshold = threshold;
    nd.left = left;
    nd.right = right;
    return idx;
}

void check_box(const Box& bounds) {
    if (bounds.lower.size() != bounds.upper.size() || bounds.lower.empty()) {
        throw std::invalid_argument("box: lower/upper must be same nonzero size");
    }
    for (std::size_t d = 0; d < bounds.lower.size(); ++d) {
        if (!(bounds.lower[d] <= bounds.upper[d])) {
            throw std::invalid_argument("box: empty (lower > upper)");
        }
    }
}

// Distinct split features, ascending.
std::vector<std::size_t> split_features(const TreeEnsemble& ens) {
    std::vector<std::size_t> feats;
    for (const auto& tree : ens.trees) {
        for (const auto& nd : tree.nodes) {
            if (!nd.is_leaf()) feats.push_back(static_cast<std::size_t>(nd.feature));
        }
    }
    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    return feats;
}

} // namespace

std::size_t ensemble_dim(const TreeEnsemble& ens) {
    int max_f = -1;
    for (const auto& tree : ens.trees) {
        for (const auto& nd : tree.nodes) {
            if (!nd.is_leaf()) max_f = std::max(max_f, nd.feature);
        }
    }
    return static_cast<std::size_t>(max_f + 1);
}

void validate(const TreeEnsemble& ens) {
    const std::size_t dim = std::max<std::size_t>(ensemble_dim(ens), 1);
    for (const auto& tree : ens.trees) {
        if (tree.nodes.empty()) throw std::invalid_argument("tree: no nodes");
        std::vector<double> lo(dim, -kInf), hi(dim, kInf);
        std::vector<char> seen(tree.nodes.size(), 0);
        validate_tree(tree, 0, lo, hi, seen);
        if (std::count(seen.begin(), seen.end(), 1) !=
            static_cast<std::ptrdiff_t>(tree.nodes.size())) {
            throw std::invalid_argument("tree: unreachable nodes present");
        }
    }
}

double tree_eval(const DecisionTree& tree, std::span<const double> x) {
    std::size_t node = 0;
    while (true) {
        const TreeNode& nd = tree.nodes[node];
        if (nd.is_leaf()) return nd.leaf;
        const auto f = static_cast<std::size_t>(nd.feature);
        if (f >= x.size()) throw std::out_of_range("tree_eval: feature index beyond input size");
        node = static_cast<std::size_t>(x[f] < nd.threshold ? nd.left : nd.right);
    }
}

double ensemble_eval(const TreeEnsemble& ens, std::span<const double> x) {
    double sum = 0.0;
    for (const auto& tree : ens.trees) sum += tree_eval(tree, x);
    return sum;
}

std::string ensemble_to_json(const TreeEnsemble& ens) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& tree : ens.trees) doc.push_back(node_to_json(tree, 0));
    return doc.dump(2);
}

TreeEnsemble ensemble_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("ensemble json: ") + e.what());
    }
    if (!doc.is_array()) throw std::invalid_argument("ensemble json: top level must be an array");
    TreeEnsemble ens;
    for (const auto& jt : doc) {
        DecisionTree tree;
        node_from_json(jt, tree);
        ens.trees.push_back(std::move(tree));
    }
    validate(ens);
    return ens;
}

TreeEnsemble load_ensemble(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ensemble file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return ensemble_from_json(buf.str());
}

namespace {

// Recurse over trees intersecting leaf regions; call visit(sum, lo, hi) for
// every nonempty joint region (still unclipped by the outer bounds).
void joint_regions(const std::vector<std::vector<LeafRegion>>& per_tree, std::size_t tree_idx,
                   double sum, std::vector<double>& lo, std::vector<double>& hi,
                   const std::function<void(double, const std::vector<double>&,
                                            const std::vector<double>&)>& visit) {
    if (tree_idx == per_tree.size()) {
        visit(sum, lo, hi);
        return;
    }
    const std::size_t dim = lo.size();
    for (const LeafRegion& leaf : per_tree[tree_idx]) {
        std::vector<double> nlo(dim), nhi(dim);
        bool empty = false;
        for (std::size_t d = 0; d < dim; ++d) {
            nlo[d] = std::max(lo[d], leaf.lo[d]);
            nhi[d] = std::min(hi[d], leaf.hi[d]);
            if (!(nlo[d] < nhi[d])) {
                empty = true;
                break;
            }
        }
        if (empty) continue;
        joint_regions(per_tree, tree_idx + 1, sum + leaf.value, nlo, nhi, visit);
    }
}

std::vector<std::vector<LeafRegion>> leaves_per_tree(const TreeEnsemble& ens, std::size_t dim) {
    std::vector<std::vector<LeafRegion>> per_tree;
    std::int64_t combos = 1;
    for (const auto& tree : ens.trees) {
        std::vector<double> lo(dim, -kInf), hi(dim, kInf);
        std::vector<LeafRegion> leaves;
        collect_leaves(tree, 0, lo, hi, leaves);
        combos *= static_cast<std::int64_t>(leaves.size());
        if (combos > kComboCap) {
            throw std::runtime_error(
                "teoo_brute_force: joint leaf combinations exceed 10^6, shrink the ensemble");
        }
        per_tree.push_back(std::move(leaves));
    }
    return per_tree;
}

// Clip a joint region against the closed bounds; returns false when empty,
// otherwise fills a representative point strictly inside every half-open side.
bool representative(const std::vector<double>& lo, const std::vector<double>& hi,
                    const Box& bounds, std::vector<double>& rep) {
    const std::size_t dim = rep.size();
    for (std::size_t d = 0; d < dim; ++d) {
        const double a = std::max(lo[d], bounds.lower[d]);
        if (!(a < hi[d]) || a > bounds.upper[d]) return false;
        double r;
        if (hi[d] > bounds.upper[d]) {
            r = a + (bounds.upper[d] - a) / 2.0;
        } else {
            r = a + (hi[d] - a) / 2.0;
            if (r >= hi[d]) r = a;
        }
        rep[d] = r;
    }
    return true;
}

} // namespace

TeooResult teoo_brute_force(const TreeEnsemble& ens, const Box& bounds) {
    check_box(bounds);
    const std::size_t dim = bounds.lower.size();
    if (ensemble_dim(ens) > dim) {
        throw std::invalid_argument("teoo_brute_force: bounds dimension below ensemble features");
    }
    const auto per_tree = leaves_per_tree(ens, dim);

    TeooResult best;
    best.value = kInf;
    std::vector<double> rep(dim);
    std::vector<double> lo(dim, -kInf), hi(dim, kInf);
    joint_regions(per_tree, 0, 0.0, lo, hi,
                  [&](double sum, const std::vector<double>& rlo, const std::vector<double>& rhi) {
                      if (sum >= best.value) return;
                      if (!representative(rlo, rhi, bounds, rep)) return;
                      best.value = sum;
                      best.x = rep;
                  });
    if (best.x.empty()) {
        // No tree (empty product) cannot happen: zero trees yield one joint
        // region covering the box. Empty here means every region missed the box.
        throw std::logic_error("teoo_brute_force: no joint region intersects the bounds");
    }
    return best;
}

std::int64_t joint_box_count(const TreeEnsemble& ens, const Box& bounds) {
    check_box(bounds);
    const std::size_t dim = bounds.lower.size();
    if (ensemble_dim(ens) > dim) {
        throw std::invalid_argument("joint_box_count: bounds dimension below ensemble features");
    }
    const auto per_tree = leaves_per_tree(ens, dim);
    std::int64_t count = 0;
    std::vector<double> rep(dim);
    std::vector<double> lo(dim, -kInf), hi(dim, kInf);
    joint_regions(per_tree, 0, 0.0, lo, hi,
                  [&](double, const std::vector<double>& rlo, const std::vector<double>& rhi) {
                      if (representative(rlo, rhi, bounds, rep)) ++count;
                  });
    return count;
}

TeooResult teoo_minimize(const TreeEnsemble& ens, const Box& bounds, std::int64_t budget,
                         SeededRng& rng) {
    check_box(bounds);
    if (budget < 1) throw std::invalid_argument("teoo_minimize: budget must be at least 1");
    const std::size_t dim = bounds.lower.size();
    if (ensemble_dim(ens) > dim) {
        throw std::invalid_argument("teoo_minimize: bounds dimension below ensemble features");
    }

    const EfficiencySchedule sched = default_schedule(budget);
    const std::int64_t uniform_budget = (budget + 1) / 2;

    // Stratify the uniform phase over the features the ensemble actually
    // splits on; grid-aligned regions at least one cell wide are then hit
    // with certainty instead of with high probability.
    const auto feats = split_features(ens);
    std::vector<std::ptrdiff_t> strat_pos(dim, -1);
    for (std::size_t p = 0; p < feats.size(); ++p) strat_pos[feats[p]] = static_cast<std::ptrdiff_t>(p);
    std::int64_t side = 1;
    if (!feats.empty()) {
        while (true) {
            std::int64_t cells = 1;
            bool over = false;
            for (std::size_t p = 0; p < feats.size(); ++p) {
                cells *= side * 2;
                if (cells > uniform_budget) {
                    over = true;
                    break;
                }
            }
            if (over) break;
            side *= 2;
        }
    }
    std::int64_t grid_cells = 1;
    for (std::size_t p = 0; p < feats.size(); ++p) grid_cells *= side;

    TeooResult best;
    best.value = kInf;
    std::vector<double> x(dim);
    std::vector<std::int64_t> cell(feats.size());
    for (std::int64_t t = 1; t <= budget; ++t) {
        if (t <= uniform_budget) {
            const std::int64_t q = t - 1;
            if (q < grid_cells) {
                std::int64_t rem = q;
                for (std::size_t p = 0; p < feats.size(); ++p) {
                    cell[p] = rem % side;
                    rem /= side;
                }
            }
            for (std::size_t d = 0; d < dim; ++d) {
                const double u = rng.next_double();
                const double range = bounds.upper[d] - bounds.lower[d];
                if (q < grid_cells && strat_pos[d] >= 0) {
                    const double g = static_cast<double>(cell[static_cast<std::size_t>(strat_pos[d])]);
                    x[d] = bounds.lower[d] + (g + u) * range / static_cast<double>(side);
                } else {
                    x[d] = bounds.lower[d] + u * range;
                }
            }
        } else {
            const double radius = 1.0 - efficiency(sched, static_cast<double>(t));
            for (std::size_t d = 0; d < dim; ++d) {
                const double range = bounds.upper[d] - bounds.lower[d];
                const double step = radius * range * rng.next_gaussian();
                x[d] = std::clamp(best.x[d] + step, bounds.lower[d], bounds.upper[d]);
            }
        }
        const double v = ensemble_eval(ens, x);
        if (v < best.value) {
            best.value = v;
            best.x = x;
        }
    }
    return best;
}

} // namespace dcode
