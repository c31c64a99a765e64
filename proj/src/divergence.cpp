#include "imbtk/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "imbtk/csv.hpp"
#include "json.hpp"

namespace imbtk {

std::vector<double> equal_width_edges(double lo, double hi, std::size_t bins) {
    if (bins < 1) {
        throw std::invalid_argument("need at least one bin");
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("edge range must have positive width");
    }
    std::vector<double> edges(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        edges[i] = lo + width * static_cast<double>(i);
    }
    edges.back() = hi;  // guard against accumulation past hi
    return edges;
}

Histogram build_histogram(std::span<const double> values, std::vector<double> edges) {
    if (values.empty()) {
        throw std::invalid_argument("cannot build a histogram from no values");
    }
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()) ||
        std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
        throw std::invalid_argument("histogram edges must be strictly ascending");
    }
    Histogram h;
    h.edges = std::move(edges);
    h.mass.assign(h.edges.size() - 1, 0.0);
    const double lo = h.edges.front();
    const double hi = h.edges.back();
    const std::size_t last = h.mass.size() - 1;
    for (double v : values) {
        std::size_t bin;
        if (v <= lo) {
            bin = 0;
        } else if (v >= hi) {
            bin = last;
        } else {
            // upper_bound gives the first edge strictly greater than v
            bin = static_cast<std::size_t>(
                      std::upper_bound(h.edges.begin(), h.edges.end(), v) - h.edges.begin()) -
                  1;
            bin = std::min(bin, last);
        }
        h.mass[bin] += 1.0;
    }
    const double total = static_cast<double>(values.size());
    for (double& m : h.mass) m /= total;
    return h;
}

double js_divergence(const Histogram& p, const Histogram& q) {
    if (p.edges != q.edges) {
        throw std::invalid_argument("histograms must share identical edges");
    }
    double kl_p = 0.0;
    double kl_q = 0.0;
    for (std::size_t i = 0; i < p.mass.size(); ++i) {
        const double m = 0.5 * (p.mass[i] + q.mass[i]);
        if (p.mass[i] > 0.0) kl_p += p.mass[i] * std::log2(p.mass[i] / m);
        if (q.mass[i] > 0.0) kl_q += q.mass[i] * std::log2(q.mass[i] / m);
    }
    double jsd = 0.5 * kl_p + 0.5 * kl_q;
    if (jsd < 0.0) jsd = 0.0;  // floating-point noise near identity
    if (jsd > 1.0) jsd = 1.0;
    return jsd;
}

double js_similarity(const Histogram& p, const Histogram& q) {
    return std::sqrt(js_divergence(p, q));
}

namespace {

std::vector<double> class_feature_values(const FeatureTable& t,
                                         const std::vector<std::size_t>& rows,
                                         std::size_t feature) {
    std::vector<double> values;
    values.reserve(rows.size());
    for (std::size_t r : rows) values.push_back(t.at(r, feature));
    return values;
}

}  // namespace

DivergenceReport audit(const FeatureTable& original, const FeatureTable& resampled,
                       std::size_t bins, bool keep_histograms) {
    if (bins < 2) {
        throw std::invalid_argument("audit needs at least 2 bins");
    }
    if (original.feature_names != resampled.feature_names) {
        throw std::invalid_argument("tables have different feature columns");
    }
    const ClassPartition orig_part = partition(original);
    const ClassPartition res_part = partition(resampled);
    const int num_classes = std::max(orig_part.num_classes(), res_part.num_classes());
    for (int cls = 1; cls <= num_classes; ++cls) {
        const bool in_orig =
            cls <= orig_part.num_classes() && !orig_part.members(cls).empty();
        const bool in_res = cls <= res_part.num_classes() && !res_part.members(cls).empty();
        if (in_orig != in_res) {
            throw std::invalid_argument("class " + std::to_string(cls) +
                                        " present in only one table");
        }
    }

    DivergenceReport report;
    report.bins = bins;
    report.majority_class = orig_part.majority_class;

    double total = 0.0;
    for (int cls = 1; cls <= orig_part.num_classes(); ++cls) {
        if (cls == report.majority_class || orig_part.members(cls).empty()) continue;
        double class_total = 0.0;
        std::vector<std::size_t> entry_positions;
        for (std::size_t f = 0; f < original.cols(); ++f) {
            const auto vo = class_feature_values(original, orig_part.members(cls), f);
            const auto vr = class_feature_values(resampled, res_part.members(cls), f);
            const auto [lo_o, hi_o] = std::minmax_element(vo.begin(), vo.end());
            const auto [lo_r, hi_r] = std::minmax_element(vr.begin(), vr.end());
            const double lo = std::min(*lo_o, *lo_r);
            const double hi = std::max(*hi_o, *hi_r);
            double similarity = 0.0;  // degenerate range: identical point masses
            if (hi > lo) {
                const auto edges = equal_width_edges(lo, hi, bins);
                const Histogram ho = build_histogram(vo, edges);
                const Histogram hr = build_histogram(vr, edges);
                similarity = js_similarity(ho, hr);
                if (keep_histograms) {
                    report.histograms.push_back(
                        {cls, original.feature_names[f], ho.edges, ho.mass, hr.mass});
                }
            } else if (keep_histograms) {
                report.histograms.push_back({cls,
                                             original.feature_names[f],
                                             {lo, lo + 1.0},
                                             {1.0},
                                             {1.0}});
            }
            entry_positions.push_back(report.entries.size());
            report.entries.push_back({cls, original.feature_names[f], similarity, 0});
            class_total += similarity;
            total += similarity;
        }
        // Descending-similarity rank within the class; ties keep column order.
        std::vector<std::size_t> order = entry_positions;
        std::stable_sort(order.begin(), order.end(), [this_report = &report](auto a, auto b) {
            return this_report->entries[a].similarity > this_report->entries[b].similarity;
        });
        for (std::size_t rank = 0; rank < order.size(); ++rank) {
            report.entries[order[rank]].rank = rank + 1;
        }
        report.per_class_mean[cls] = class_total / static_cast<double>(original.cols());
    }

    if (!report.entries.empty()) {
        report.overall_mean = total / static_cast<double>(report.entries.size());
        double mean_sum = 0.0;
        for (const auto& [cls, mean] : report.per_class_mean) mean_sum += mean;
        report.mean_of_class_means =
            mean_sum / static_cast<double>(report.per_class_mean.size());
    }
    return report;
}

std::string DivergenceReport::to_csv() const {
    std::string out = "class,feature,js_similarity,rank\n";
    for (const auto& e : entries) {
        out += std::to_string(e.class_label) + ',' + e.feature + ',' +
               csv::format_double(e.similarity) + ',' + std::to_string(e.rank) + '\n';
    }
    for (const auto& [cls, mean] : per_class_mean) {
        out += std::to_string(cls) + ",__class_mean__," + csv::format_double(mean) + ",\n";
    }
    out += ",__overall_mean__," + csv::format_double(overall_mean) + ",\n";
    out += ",__mean_of_class_means__," + csv::format_double(mean_of_class_means) + ",\n";
    return out;
}

std::string DivergenceReport::to_json() const {
    nlohmann::ordered_json root;
    root["bins"] = bins;
    root["majority_class"] = majority_class;
    nlohmann::ordered_json classes = nlohmann::ordered_json::object();
    for (const auto& [cls, mean] : per_class_mean) {
        nlohmann::ordered_json features = nlohmann::ordered_json::object();
        for (const auto& e : entries) {
            if (e.class_label != cls) continue;
            features[e.feature] = {{"js_similarity", e.similarity}, {"rank", e.rank}};
        }
        classes[std::to_string(cls)] = {{"features", std::move(features)}, {"mean", mean}};
    }
    root["classes"] = std::move(classes);
    root["overall_mean"] = overall_mean;
    root["mean_of_class_means"] = mean_of_class_means;
    return root.dump(2) + "\n";
}

std::string DivergenceReport::histograms_to_json() const {
    nlohmann::ordered_json root;
    root["bins"] = bins;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& h : histograms) {
        pairs.push_back({{"class", h.class_label},
                         {"feature", h.feature},
                         {"edges", h.edges},
                         {"original", h.original_mass},
                         {"resampled", h.resampled_mass}});
    }
    root["pairs"] = std::move(pairs);
    return root.dump(2) + "\n";
}

}  // namespace imbtk
