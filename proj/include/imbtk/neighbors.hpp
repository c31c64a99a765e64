#pragma once

#include <span>
#include <vector>

#include "imbtk/feature_table.hpp"

namespace imbtk {

struct NeighborEntry {
    std::size_t row;
    int label;
    double squared_distance;  // in index space (scaled when scaling is on)
};

/// The K nearest neighbors of one row, ascending by (distance, row index).
struct NeighborSet {
    std::size_t owner = 0;
    std::vector<NeighborEntry> neighbors;
    std::size_t out_of_class_count = 0;  // H: entries whose label differs from the owner's
};

/// Exact Euclidean nearest-neighbor queries over a feature table. Searches are
/// brute force; the tables this toolkit targets are small. With scaling on
/// (the default elsewhere), each feature's observed range is mapped onto
/// [0, 1] before distances are taken; constant features map to 0.
class NeighborIndex {
public:
    NeighborIndex(const FeatureTable& table, bool scale);

    /// K nearest rows over all classes, owner excluded. K must be <= rows-1.
    NeighborSet knn_all(std::size_t owner, std::size_t k) const;

    /// K nearest rows restricted to class cls, owner excluded. When fewer than
    /// K co-members exist the query degrades to all of them with a warning;
    /// zero co-members is an error.
    NeighborSet knn_within(std::size_t owner, std::size_t k, int cls) const;

    const FeatureTable& table() const { return *table_; }
    bool scaled() const { return scale_; }

    // Scaling parameters, exposed for verification.
    std::span<const double> offsets() const { return offset_; }
    std::span<const double> inverse_ranges() const { return inv_range_; }

private:
    NeighborSet select(std::size_t owner, std::size_t k,
                       std::span<const std::size_t> candidates) const;
    double squared_distance(std::size_t a, std::size_t b) const;

    const FeatureTable* table_;
    bool scale_;
    std::vector<double> offset_;
    std::vector<double> inv_range_;
    std::vector<double> points_;  // row-major working copy, scaled when scale_
    std::vector<std::vector<std::size_t>> by_class_;
};

/// Builds a query index over the table. scale toggles min-max normalization
/// of the distance space.
NeighborIndex build_index(const FeatureTable& table, bool scale = true);

}  // namespace imbtk
