#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "imbtk/feature_table.hpp"

namespace imbtk {

/// Normalized frequency histogram over fixed bin edges. Values outside the
/// edge range are clamped into the first/last bin.
struct Histogram {
    std::vector<double> edges;  // B+1, strictly ascending
    std::vector<double> mass;   // B, sums to 1

    std::size_t bins() const { return mass.size(); }
};

std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins);

Histogram build_histogram(std::span<const double> values, std::vector<double> edges);

/// Jensen-Shannon divergence with base-2 logarithms, so the result lies in
/// [0, 1]. Requires identical edges.
double js_divergence(const Histogram& p, const Histogram& q);

/// Square root of js_divergence. Despite the historical name, larger values
/// mean the distributions are more DIFFERENT (it is a metric).
double js_similarity(const Histogram& p, const Histogram& q);

struct DivergenceEntry {
    int class_label;
    std::string feature;
    double similarity;
    std::size_t rank;  // 1 = most divergent feature of its class
};

/// Dump of the histogram pair behind one audit entry, for external plotting.
struct HistogramPair {
    int class_label;
    std::string feature;
    std::vector<double> edges;
    std::vector<double> original_mass;
    std::vector<double> resampled_mass;
};

struct DivergenceReport {
    std::vector<DivergenceEntry> entries;  // minority classes ascending, features in table order
    std::map<int, double> per_class_mean;
    double overall_mean = 0.0;           // mean of all entries
    double mean_of_class_means = 0.0;
    int majority_class = 0;              // excluded from entries and means
    std::size_t bins = 0;
    std::vector<HistogramPair> histograms;  // filled only when requested

    std::string to_csv() const;
    std::string to_json() const;
    std::string histograms_to_json() const;
};

/// Compares per-class feature distributions of two tables sharing a schema.
/// For each minority class and feature, both value sets are binned over their
/// combined range into `bins` equal-width bins and scored by js_similarity.
DivergenceReport audit(const FeatureTable& original, const FeatureTable& resampled,
                       std::size_t bins = 50, bool keep_histograms = false);

}  // namespace imbtk
