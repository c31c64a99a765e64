#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace imbtk {

/// Dense numeric dataset: rows of feature vectors plus an integer class label
/// in 1..num_classes per row. Immutable by convention once validated.
struct FeatureTable {
    std::vector<double> values;  // row-major, rows() x cols()
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    int num_classes = 0;

    std::size_t rows() const { return labels.size(); }
    std::size_t cols() const { return feature_names.size(); }

    double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }

    std::span<const double> row(std::size_t index) const {
        return {values.data() + index * cols(), cols()};
    }

    /// Checks all structural invariants (shape, label range, finite values).
    /// Throws std::invalid_argument on violation.
    void validate() const;
};

struct ClassPartition {
    std::vector<std::vector<std::size_t>> by_class;  // index c-1 -> ascending row indices
    std::vector<std::size_t> counts;                 // index c-1
    int majority_class = 0;

    int num_classes() const { return static_cast<int>(counts.size()); }
    std::size_t majority_count() const { return counts[majority_class - 1]; }
    const std::vector<std::size_t>& members(int cls) const { return by_class[cls - 1]; }
};

/// Four expert ratings, each on the 1..5 scale.
struct RatingSet {
    std::array<int, 4> ratings;
};

/// Loads a CSV with a header row; every column except label_column becomes a
/// feature (order preserved), parsed as 64-bit floats. Labels must be positive
/// integers. num_classes of 0 infers the class count from the max label.
/// skip_columns lets callers drop bookkeeping columns (e.g. resample output).
FeatureTable load_csv(const std::string& path, const std::string& label_column,
                      int num_classes = 0,
                      const std::vector<std::string>& skip_columns = {});

/// Same parse/validation applied to an in-memory CSV text.
FeatureTable load_csv_string(const std::string& text, const std::string& label_column,
                             int num_classes = 0,
                             const std::vector<std::string>& skip_columns = {});

/// Collapses four ratings to one label: the unique mode when exactly one value
/// attains maximal multiplicity, otherwise the ceiling of the mean.
int aggregate_rating(const RatingSet& r);

/// Groups rows by class label. Majority ties go to the lowest label.
ClassPartition partition(const FeatureTable& table);

/// New table holding the given rows (in the given order) of the source table.
FeatureTable subset(const FeatureTable& table, std::span<const std::size_t> row_indices);

}  // namespace imbtk
