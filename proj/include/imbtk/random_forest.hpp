#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "imbtk/feature_table.hpp"

namespace imbtk {

struct ForestParams {
    std::size_t n_trees = 100;
    std::size_t mtry = 0;  // 0 resolves to ceil(sqrt(p)) at training time
    std::size_t min_samples_leaf = 1;
    std::size_t max_depth = 0;  // 0 = unlimited
    bool bootstrap = true;      // test hook: off makes a single tree a plain CART
};

/// Binary CART node. Internal nodes carry (feature, threshold); leaves carry
/// per-class training counts. Stored flat, children by index.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<std::uint32_t> counts;  // leaf only, indexed by class-1
};

struct DecisionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    /// Class vote for one sample: argmax of the reached leaf's counts,
    /// lowest label on ties.
    int predict(std::span<const double> x) const;
};

/// Bagged CART forest with Gini splits and majority voting.
class RandomForest {
public:
    static RandomForest train(const FeatureTable& table, const ForestParams& params,
                              std::uint64_t seed);

    int predict(std::span<const double> x) const;

    /// Per-class vote tally over all trees, indexed by class-1.
    std::vector<std::uint32_t> votes(std::span<const double> x) const;

    std::size_t n_trees() const { return trees_.size(); }
    std::size_t n_features() const { return n_features_; }
    std::size_t mtry() const { return mtry_; }
    int num_classes() const { return num_classes_; }
    const std::vector<DecisionTree>& trees() const { return trees_; }

    /// Inspection dump of the tree structures. Not a stable format.
    std::string to_json() const;

private:
    std::vector<DecisionTree> trees_;
    std::size_t n_features_ = 0;
    std::size_t mtry_ = 0;
    int num_classes_ = 0;
};

}  // namespace imbtk
