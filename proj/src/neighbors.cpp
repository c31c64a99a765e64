#include "imbtk/neighbors.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "imbtk/warnings.hpp"

namespace imbtk {

NeighborIndex::NeighborIndex(const FeatureTable& table, bool scale)
    : table_(&table), scale_(scale) {
    if (table.rows() == 0) {
        throw std::invalid_argument("cannot build a neighbor index over an empty table");
    }
    const std::size_t p = table.cols();
    offset_.assign(p, 0.0);
    inv_range_.assign(p, 1.0);
    if (scale_) {
        std::vector<double> lo(p, std::numeric_limits<double>::infinity());
        std::vector<double> hi(p, -std::numeric_limits<double>::infinity());
        for (std::size_t i = 0; i < table.rows(); ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                const double v = table.at(i, j);
                lo[j] = std::min(lo[j], v);
                hi[j] = std::max(hi[j], v);
            }
        }
        for (std::size_t j = 0; j < p; ++j) {
            offset_[j] = lo[j];
            inv_range_[j] = hi[j] > lo[j] ? 1.0 / (hi[j] - lo[j]) : 0.0;
        }
    }
    points_.resize(table.rows() * p);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            points_[i * p + j] = (table.at(i, j) - offset_[j]) * inv_range_[j];
        }
    }
    by_class_.resize(table.num_classes);
    for (std::size_t i = 0; i < table.rows(); ++i) {
        by_class_[table.labels[i] - 1].push_back(i);
    }
}

double NeighborIndex::squared_distance(std::size_t a, std::size_t b) const {
    const std::size_t p = table_->cols();
    const double* pa = points_.data() + a * p;
    const double* pb = points_.data() + b * p;
    double sum = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        const double d = pa[j] - pb[j];
        sum += d * d;
    }
    return sum;
}

NeighborSet NeighborIndex::select(std::size_t owner, std::size_t k,
                                  std::span<const std::size_t> candidates) const {
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(candidates.size());
    for (std::size_t row : candidates) {
        if (row == owner) continue;
        order.emplace_back(squared_distance(owner, row), row);
    }
    const std::size_t take = std::min(k, order.size());
    std::partial_sort(order.begin(), order.begin() + take, order.end());

    NeighborSet set;
    set.owner = owner;
    set.neighbors.reserve(take);
    const int owner_label = table_->labels[owner];
    for (std::size_t i = 0; i < take; ++i) {
        const auto& [dist, row] = order[i];
        const int label = table_->labels[row];
        set.neighbors.push_back({row, label, dist});
        if (label != owner_label) ++set.out_of_class_count;
    }
    return set;
}

NeighborSet NeighborIndex::knn_all(std::size_t owner, std::size_t k) const {
    if (owner >= table_->rows()) {
        throw std::invalid_argument("owner row out of range");
    }
    if (k + 1 > table_->rows()) {
        throw std::invalid_argument("K = " + std::to_string(k) + " too large for a table of " +
                                    std::to_string(table_->rows()) + " rows");
    }
    std::vector<std::size_t> all(table_->rows());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return select(owner, k, all);
}

NeighborSet NeighborIndex::knn_within(std::size_t owner, std::size_t k, int cls) const {
    if (owner >= table_->rows()) {
        throw std::invalid_argument("owner row out of range");
    }
    if (cls < 1 || cls > table_->num_classes) {
        throw std::invalid_argument("class " + std::to_string(cls) + " out of range");
    }
    const auto& members = by_class_[cls - 1];
    std::size_t available = members.size();
    for (std::size_t row : members) {
        if (row == owner) {
            --available;
            break;
        }
    }
    if (available == 0) {
        throw std::runtime_error("class " + std::to_string(cls) +
                                 " has no within-class neighbor for row " +
                                 std::to_string(owner));
    }
    if (available < k) {
        warn("class " + std::to_string(cls) + " has only " + std::to_string(available) +
             " co-members; reducing K from " + std::to_string(k));
    }
    return select(owner, std::min(k, available), members);
}

NeighborIndex build_index(const FeatureTable& table, bool scale) {
    return NeighborIndex(table, scale);
}

}  // namespace imbtk
