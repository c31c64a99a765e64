#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imbtk/feature_table.hpp"
#include "imbtk/oversample.hpp"
#include "imbtk/random_forest.hpp"

namespace imbtk {

struct SplitSpec {
    double train_fraction = 0.7;
    std::size_t repeats = 30;
    std::uint64_t seed = 0;
};

struct Split {
    std::vector<std::size_t> train;  // ascending row indices
    std::vector<std::size_t> test;
};

/// Per-class stratified hold-out split, deterministic in (seed, repeat_index).
/// Each class contributes round(fraction * count) training rows, clamped so
/// both sides keep at least one row. Classes need >= 2 members.
Split stratified_split(const FeatureTable& table, const SplitSpec& spec,
                       std::size_t repeat_index);

/// Square confusion matrix, true class by row, predicted class by column.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<std::size_t> cells;  // row-major

    explicit ConfusionMatrix(int classes = 0)
        : num_classes(classes), cells(static_cast<std::size_t>(classes) * classes, 0) {}

    std::size_t& at(int true_cls, int predicted_cls) {
        return cells[(true_cls - 1) * num_classes + (predicted_cls - 1)];
    }
    std::size_t at(int true_cls, int predicted_cls) const {
        return cells[(true_cls - 1) * num_classes + (predicted_cls - 1)];
    }
    std::size_t row_total(int cls) const;
    std::size_t trace() const;
    std::size_t total() const;
};

/// Per-class recall in percent: 100 * correct / test count of the class.
double sensitivity(const ConfusionMatrix& confusion, int cls);

struct RepeatRecord {
    ConfusionMatrix confusion;
    double accuracy = 0.0;                 // percent
    std::map<int, double> sensitivity;     // per class present in the test set
};

struct MethodResult {
    std::string name;  // "none" for the baseline
    std::optional<SamplerConfig> sampler;
    std::vector<RepeatRecord> repeats;
    std::map<int, double> mean_sensitivity;
    double mean_accuracy = 0.0;
};

struct ExperimentReport {
    SplitSpec split;
    ForestParams forest;
    std::vector<int> classes;
    int majority_class = 0;
    std::vector<MethodResult> methods;
    std::map<int, double> avg_increase;  // synthetic methods vs baseline, empty if n/a

    const MethodResult* find(const std::string& name) const;
    std::string to_csv() const;
    std::string to_json() const;
};

/// Observer invoked once per (method, repeat) with the split actually used
/// and the generated batch (null for the baseline). For provenance checks.
using RepeatObserver =
    std::function<void(const std::string& method, std::size_t repeat, const Split& split,
                       const SyntheticBatch* batch)>;

/// Runs the hold-out protocol for one method (nullopt = no oversampling).
/// Per repeat: split, oversample the training side only, fit a forest on
/// train + synthetic rows, score the untouched test rows.
MethodResult run_single(const FeatureTable& table, const SplitSpec& spec,
                        const std::optional<SamplerConfig>& sampler, const ForestParams& forest,
                        const RepeatObserver& observer = {});

/// Runs the baseline plus every requested sampler and assembles the full
/// report. Splits depend only on (seed, repeat), so every method sees the
/// same partitions. The per-class average-increase column is computed over
/// the synthetic methods only (random excluded) when any are present.
ExperimentReport run_experiment(const FeatureTable& table, const SplitSpec& spec,
                                const std::vector<SamplerConfig>& samplers,
                                const ForestParams& forest,
                                const RepeatObserver& observer = {});

}  // namespace imbtk
