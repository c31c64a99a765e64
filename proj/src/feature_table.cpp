#include "imbtk/feature_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "imbtk/csv.hpp"

namespace imbtk {

void FeatureTable::validate() const {
    if (feature_names.empty()) {
        throw std::invalid_argument("feature table needs at least one feature column");
    }
    if (values.size() != rows() * cols()) {
        throw std::invalid_argument("feature matrix size does not match rows x cols");
    }
    if (num_classes < 1) {
        throw std::invalid_argument("num_classes must be at least 1");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 1 || labels[i] > num_classes) {
            throw std::invalid_argument("label " + std::to_string(labels[i]) + " at row " +
                                        std::to_string(i + 1) + " outside 1.." +
                                        std::to_string(num_classes));
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("feature matrix contains a non-finite value");
        }
    }
}

namespace {

FeatureTable table_from_csv(const csv::Table& raw, const std::string& label_column,
                            int num_classes, const std::vector<std::string>& skip_columns) {
    const auto label_idx = raw.find_column(label_column);
    if (!label_idx) {
        throw std::runtime_error("label column '" + label_column + "' not found in CSV header");
    }
    std::unordered_set<std::size_t> skipped{*label_idx};
    for (const auto& name : skip_columns) {
        if (auto idx = raw.find_column(name)) skipped.insert(*idx);
    }

    FeatureTable table;
    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < raw.columns(); ++c) {
        if (skipped.count(c)) continue;
        feature_cols.push_back(c);
        table.feature_names.push_back(raw.header[c]);
    }
    if (feature_cols.empty()) {
        throw std::runtime_error("CSV has no feature columns besides '" + label_column + "'");
    }
    if (raw.rows.empty()) {
        throw std::runtime_error("CSV has no data rows");
    }

    table.values.reserve(raw.rows.size() * feature_cols.size());
    table.labels.reserve(raw.rows.size());
    int max_label = 0;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const auto& row = raw.rows[r];
        for (std::size_t c : feature_cols) {
            const auto value = csv::parse_double(row[c]);
            if (!value) {
                throw std::runtime_error("non-numeric cell at row " + std::to_string(r + 1) +
                                         ", column '" + raw.header[c] + "'");
            }
            if (!std::isfinite(*value)) {
                throw std::runtime_error("non-finite value at row " + std::to_string(r + 1) +
                                         ", column '" + raw.header[c] + "'");
            }
            table.values.push_back(*value);
        }
        const auto label_value = csv::parse_double(row[*label_idx]);
        if (!label_value || !std::isfinite(*label_value) ||
            *label_value != std::floor(*label_value) || *label_value < 1 ||
            *label_value > 1e9) {
            throw std::runtime_error("label at row " + std::to_string(r + 1) + ", column '" +
                                     label_column + "' is not a positive integer");
        }
        const int label = static_cast<int>(*label_value);
        max_label = std::max(max_label, label);
        table.labels.push_back(label);
    }

    table.num_classes = num_classes > 0 ? num_classes : max_label;
    if (max_label > table.num_classes) {
        throw std::runtime_error("label " + std::to_string(max_label) +
                                 " exceeds declared class count " +
                                 std::to_string(table.num_classes));
    }
    table.validate();
    return table;
}

}  // namespace

FeatureTable load_csv(const std::string& path, const std::string& label_column, int num_classes,
                      const std::vector<std::string>& skip_columns) {
    return table_from_csv(csv::read_file(path), label_column, num_classes, skip_columns);
}

FeatureTable load_csv_string(const std::string& text, const std::string& label_column,
                             int num_classes, const std::vector<std::string>& skip_columns) {
    return table_from_csv(csv::read_string(text), label_column, num_classes, skip_columns);
}

int aggregate_rating(const RatingSet& r) {
    std::array<int, 5> tally{};
    int sum = 0;
    for (int value : r.ratings) {
        if (value < 1 || value > 5) {
            throw std::invalid_argument("rating " + std::to_string(value) + " outside 1..5");
        }
        ++tally[value - 1];
        sum += value;
    }
    const int max_count = *std::max_element(tally.begin(), tally.end());
    int mode = 0;
    int holders = 0;
    for (int v = 1; v <= 5; ++v) {
        if (tally[v - 1] == max_count) {
            ++holders;
            mode = v;
        }
    }
    if (holders == 1) return mode;
    return (sum + 3) / 4;  // ceil of the mean, in exact integer arithmetic
}

ClassPartition partition(const FeatureTable& table) {
    if (table.rows() == 0) {
        throw std::invalid_argument("cannot partition an empty table");
    }
    ClassPartition part;
    part.by_class.resize(table.num_classes);
    part.counts.assign(table.num_classes, 0);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        part.by_class[table.labels[i] - 1].push_back(i);
        ++part.counts[table.labels[i] - 1];
    }
    part.majority_class = 1;
    for (int c = 2; c <= table.num_classes; ++c) {
        if (part.counts[c - 1] > part.counts[part.majority_class - 1]) {
            part.majority_class = c;
        }
    }
    return part;
}

FeatureTable subset(const FeatureTable& table, std::span<const std::size_t> row_indices) {
    FeatureTable out;
    out.feature_names = table.feature_names;
    out.num_classes = table.num_classes;
    out.values.reserve(row_indices.size() * table.cols());
    out.labels.reserve(row_indices.size());
    for (std::size_t index : row_indices) {
        const auto row = table.row(index);
        out.values.insert(out.values.end(), row.begin(), row.end());
        out.labels.push_back(table.labels[index]);
    }
    return out;
}

}  // namespace imbtk
