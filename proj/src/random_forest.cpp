#include "imbtk/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "imbtk/rng.hpp"
#include "json.hpp"

namespace imbtk {

namespace {

double gini(const std::vector<std::uint32_t>& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double impurity = 1.0;
    for (std::uint32_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        impurity -= p * p;
    }
    return impurity;
}

int argmax_lowest(const std::vector<std::uint32_t>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return static_cast<int>(best) + 1;
}

struct BestSplit {
    double decrease = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const FeatureTable& table, const ForestParams& params, std::size_t mtry, Rng rng)
        : table_(table), params_(params), mtry_(mtry), rng_(std::move(rng)) {}

    DecisionTree build() {
        std::vector<std::size_t> sample;
        const std::size_t n = table_.rows();
        sample.reserve(n);
        if (params_.bootstrap) {
            for (std::size_t i = 0; i < n; ++i) sample.push_back(rng_.uniform_below(n));
        } else {
            sample.resize(n);
            std::iota(sample.begin(), sample.end(), 0);
        }
        DecisionTree tree;
        grow(tree, std::move(sample), 1);
        return tree;
    }

private:
    std::int32_t grow(DecisionTree& tree, std::vector<std::size_t> rows, std::size_t depth) {
        const std::int32_t node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::vector<std::uint32_t> counts(table_.num_classes, 0);
        for (std::size_t r : rows) ++counts[table_.labels[r] - 1];
        const double node_gini = gini(counts, rows.size());

        const bool depth_capped = params_.max_depth > 0 && depth >= params_.max_depth;
        BestSplit best;
        if (node_gini > 0.0 && !depth_capped && rows.size() >= 2 * params_.min_samples_leaf) {
            best = find_best_split(rows, counts, node_gini);
        }
        if (best.feature < 0) {
            tree.nodes[node_id].counts = std::move(counts);
            return node_id;
        }

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (table_.at(r, best.feature) <= best.threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        tree.nodes[node_id].feature = best.feature;
        tree.nodes[node_id].threshold = best.threshold;
        const std::int32_t left = grow(tree, std::move(left_rows), depth + 1);
        tree.nodes[node_id].left = left;
        const std::int32_t right = grow(tree, std::move(right_rows), depth + 1);
        tree.nodes[node_id].right = right;
        return node_id;
    }

    BestSplit find_best_split(const std::vector<std::size_t>& rows,
                              const std::vector<std::uint32_t>& node_counts, double node_gini) {
        const std::size_t p = table_.cols();
        // Partial Fisher-Yates draw of mtry distinct feature indices.
        std::vector<std::size_t> features(p);
        std::iota(features.begin(), features.end(), 0);
        for (std::size_t i = 0; i < mtry_; ++i) {
            const std::size_t j = i + rng_.uniform_below(p - i);
            std::swap(features[i], features[j]);
        }

        BestSplit best;
        const std::size_t n = rows.size();
        std::vector<std::pair<double, int>> sorted(n);
        std::vector<std::uint32_t> left_counts(table_.num_classes);
        for (std::size_t fi = 0; fi < mtry_; ++fi) {
            const int feature = static_cast<int>(features[fi]);
            for (std::size_t i = 0; i < n; ++i) {
                sorted[i] = {table_.at(rows[i], feature), table_.labels[rows[i]]};
            }
            std::sort(sorted.begin(), sorted.end());

            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::size_t n_left = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left_counts[sorted[i].second - 1];
                ++n_left;
                if (sorted[i].first == sorted[i + 1].first) continue;
                const std::size_t n_right = n - n_left;
                if (n_left < params_.min_samples_leaf || n_right < params_.min_samples_leaf) {
                    continue;
                }
                double gini_left = 1.0;
                double gini_right = 1.0;
                {
                    double acc_l = 0.0;
                    double acc_r = 0.0;
                    for (std::size_t c = 0; c < left_counts.size(); ++c) {
                        const double pl =
                            static_cast<double>(left_counts[c]) / static_cast<double>(n_left);
                        const double pr = static_cast<double>(node_counts[c] - left_counts[c]) /
                                          static_cast<double>(n_right);
                        acc_l += pl * pl;
                        acc_r += pr * pr;
                    }
                    gini_left = 1.0 - acc_l;
                    gini_right = 1.0 - acc_r;
                }
                const double weighted =
                    (static_cast<double>(n_left) * gini_left +
                     static_cast<double>(n_right) * gini_right) /
                    static_cast<double>(n);
                const double decrease = node_gini - weighted;
                if (decrease > best.decrease) {
                    best.decrease = decrease;
                    best.feature = feature;
                    best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
                }
            }
        }
        return best;
    }

    const FeatureTable& table_;
    const ForestParams& params_;
    std::size_t mtry_;
    Rng rng_;
};

}  // namespace

int DecisionTree::predict(std::span<const double> x) const {
    const TreeNode* node = &nodes[0];
    while (node->feature >= 0) {
        node = x[node->feature] <= node->threshold ? &nodes[node->left] : &nodes[node->right];
    }
    return argmax_lowest(node->counts);
}

RandomForest RandomForest::train(const FeatureTable& table, const ForestParams& params,
                                 std::uint64_t seed) {
    table.validate();
    if (params.n_trees < 1) {
        throw std::invalid_argument("forest needs at least one tree");
    }
    int distinct = 0;
    {
        std::vector<bool> seen(table.num_classes, false);
        for (int label : table.labels) {
            if (!seen[label - 1]) {
                seen[label - 1] = true;
                ++distinct;
            }
        }
    }
    if (distinct < 2) {
        throw std::invalid_argument("training data has a single class");
    }

    RandomForest forest;
    forest.n_features_ = table.cols();
    forest.num_classes_ = table.num_classes;
    forest.mtry_ = params.mtry > 0
                       ? std::min(params.mtry, table.cols())
                       : static_cast<std::size_t>(
                             std::ceil(std::sqrt(static_cast<double>(table.cols()))));
    forest.trees_.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        TreeBuilder builder(table, params, forest.mtry_, Rng(derive_seed(seed, t)));
        forest.trees_.push_back(builder.build());
    }
    return forest;
}

std::vector<std::uint32_t> RandomForest::votes(std::span<const double> x) const {
    if (x.size() != n_features_) {
        throw std::invalid_argument("sample has " + std::to_string(x.size()) +
                                    " features, forest expects " + std::to_string(n_features_));
    }
    std::vector<std::uint32_t> tally(num_classes_, 0);
    for (const auto& tree : trees_) {
        ++tally[tree.predict(x) - 1];
    }
    return tally;
}

int RandomForest::predict(std::span<const double> x) const {
    return argmax_lowest(votes(x));
}

std::string RandomForest::to_json() const {
    nlohmann::ordered_json root;
    root["n_trees"] = trees_.size();
    root["n_features"] = n_features_;
    root["mtry"] = mtry_;
    root["num_classes"] = num_classes_;
    nlohmann::ordered_json trees = nlohmann::ordered_json::array();
    for (const auto& tree : trees_) {
        nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
        for (const auto& node : tree.nodes) {
            if (node.feature < 0) {
                nodes.push_back({{"counts", node.counts}});
            } else {
                nodes.push_back({{"feature", node.feature},
                                 {"threshold", node.threshold},
                                 {"left", node.left},
                                 {"right", node.right}});
            }
        }
        trees.push_back(std::move(nodes));
    }
    root["trees"] = std::move(trees);
    return root.dump(2) + "\n";
}

}  // namespace imbtk
