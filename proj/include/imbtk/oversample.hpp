#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imbtk/feature_table.hpp"
#include "imbtk/neighbors.hpp"

namespace imbtk {

enum class Method { random, smote, b1, b2, adasyn };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

/// Lambda draw policy for the interpolation step: a fresh draw per feature
/// (the default) or a single draw shared by all features of one instance.
enum class LambdaMode { per_feature, per_sample };

struct SamplerConfig {
    Method method = Method::smote;
    std::size_t k = 5;
    std::uint64_t seed = 0;
    LambdaMode lambda_mode = LambdaMode::per_feature;
    double b2_out_of_class_lambda_max = 0.5;  // lambda cap when b2 picks an out-of-class neighbor
    bool single_member_fallback = false;      // duplicate instead of erroring on 1-member classes
};

/// Per-class synthetic quota needed to reach the majority count.
struct BalancePlan {
    std::vector<std::size_t> quota;  // index c-1
    std::size_t target = 0;          // the majority count

    std::size_t for_class(int cls) const { return quota[cls - 1]; }
};

struct Provenance {
    Method method;
    std::size_t parent_row;
    std::optional<std::size_t> neighbor_row;  // nullopt for random duplication
    std::vector<double> lambda;               // per feature; empty for random duplication
};

/// Synthetic instances plus enough bookkeeping to reconstruct each one.
struct SyntheticBatch {
    std::vector<double> values;  // row-major, rows() x cols
    std::vector<int> labels;
    std::vector<Provenance> provenance;
    std::size_t cols = 0;

    std::size_t rows() const { return labels.size(); }
    std::span<const double> row(std::size_t index) const {
        return {values.data() + index * cols, cols};
    }
};

enum class DangerLabel { Safe, Danger, Noise };

BalancePlan plan_balance(const ClassPartition& part);

/// Applies one entry of Eq. (1): out[j] = s[j] + lambda[j] * (a[j] - s[j]).
std::vector<double> smote_interpolate(std::span<const double> s, std::span<const double> a,
                                      std::span<const double> lambda);

/// Three-way boundary classification from the out-of-class neighbor count H
/// of a knn_all query: Noise when H = K, Danger when K/2 <= H < K, else Safe.
DangerLabel assign_danger(const NeighborSet& ns, std::size_t k);

/// Density weights for ADASYN: r_i = H_i / K normalized to sum 1. Falls back
/// to uniform weights when every H is zero.
std::vector<double> adasyn_weights(const std::vector<std::size_t>& minority_rows,
                                   const NeighborIndex& idx, std::size_t k);

/// Integer split of a quota proportional to weights: floor(w_i * quota) each,
/// remainder distributed one-by-one in descending weight order (ties to the
/// lower index). Always sums to quota exactly.
std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t quota);

SyntheticBatch random_oversample(const FeatureTable& t, const BalancePlan& plan,
                                 const SamplerConfig& cfg);
SyntheticBatch smote(const FeatureTable& t, const BalancePlan& plan, const SamplerConfig& cfg,
                     const NeighborIndex& idx);
SyntheticBatch borderline1(const FeatureTable& t, const BalancePlan& plan,
                           const SamplerConfig& cfg, const NeighborIndex& idx);
SyntheticBatch borderline2(const FeatureTable& t, const BalancePlan& plan,
                           const SamplerConfig& cfg, const NeighborIndex& idx);
SyntheticBatch adasyn(const FeatureTable& t, const BalancePlan& plan, const SamplerConfig& cfg,
                      const NeighborIndex& idx);

/// Runs the method selected by cfg.method.
SyntheticBatch oversample(const FeatureTable& t, const BalancePlan& plan,
                          const SamplerConfig& cfg, const NeighborIndex& idx);

/// Original table with the synthetic rows appended.
FeatureTable append_batch(const FeatureTable& t, const SyntheticBatch& batch);

}  // namespace imbtk
