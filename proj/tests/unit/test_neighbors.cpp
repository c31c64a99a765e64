#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "imbtk/neighbors.hpp"
#include "imbtk/warnings.hpp"
#include "support/datagen.hpp"

using namespace imbtk;

namespace {

FeatureTable one_dim(const std::vector<double>& xs, const std::vector<int>& labels,
                     int num_classes) {
    FeatureTable t;
    t.feature_names = {"x"};
    t.values = xs;
    t.labels = labels;
    t.num_classes = num_classes;
    t.validate();
    return t;
}

// Independent O(n^2) reference search used to cross-check index queries.
std::vector<std::size_t> brute_knn(const FeatureTable& t, std::size_t owner, std::size_t k,
                                   bool scale, int cls = 0) {
    const std::size_t p = t.cols();
    std::vector<double> lo(p, 1e300), hi(p, -1e300);
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            lo[j] = std::min(lo[j], t.at(i, j));
            hi[j] = std::max(hi[j], t.at(i, j));
        }
    }
    auto scaled = [&](std::size_t i, std::size_t j) {
        if (!scale) return t.at(i, j);
        const double inv = hi[j] > lo[j] ? 1.0 / (hi[j] - lo[j]) : 0.0;
        return (t.at(i, j) - lo[j]) * inv;
    };
    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (i == owner) continue;
        if (cls != 0 && t.labels[i] != cls) continue;
        double d = 0;
        for (std::size_t j = 0; j < p; ++j) {
            const double diff = scaled(owner, j) - scaled(i, j);
            d += diff * diff;
        }
        order.emplace_back(d, i);
    }
    std::sort(order.begin(), order.end());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) out.push_back(order[i].second);
    return out;
}

}  // namespace

TEST_CASE("knn_all on a 1-D layout") {
    const auto t = one_dim({0, 1, 10}, {1, 1, 2}, 2);
    const NeighborIndex idx(t, false);
    const auto ns = idx.knn_all(0, 2);
    REQUIRE(ns.neighbors.size() == 2);
    CHECK(ns.neighbors[0].row == 1);
    CHECK(ns.neighbors[1].row == 2);
    CHECK(ns.out_of_class_count == 1);
    CHECK(ns.neighbors[0].squared_distance == 1.0);
}

TEST_CASE("knn_all duplicate rows come first, ties by row index") {
    const auto t = one_dim({5, 7, 5, 5, 6}, {1, 1, 1, 2, 2}, 2);
    const NeighborIndex idx(t, false);
    const auto ns = idx.knn_all(0, 4);
    REQUIRE(ns.neighbors.size() == 4);
    CHECK(ns.neighbors[0].row == 2);  // distance 0, lowest row first
    CHECK(ns.neighbors[1].row == 3);
    CHECK(ns.neighbors[2].row == 4);
    CHECK(ns.neighbors[3].row == 1);
    CHECK(ns.out_of_class_count == 2);
}

TEST_CASE("knn_all K bounds") {
    const auto t = one_dim({0, 1, 2}, {1, 1, 1}, 1);
    const NeighborIndex idx(t, false);
    CHECK(idx.knn_all(1, 2).neighbors.size() == 2);  // K = rows-1 allowed
    CHECK_THROWS(idx.knn_all(1, 3));
}

TEST_CASE("knn_within is restricted to the class") {
    // c1 at {0, 5}, c2 at {1}; within-class neighbor of row 0 is 5, not 1
    const auto t = one_dim({0, 5, 1}, {1, 1, 2}, 2);
    const NeighborIndex idx(t, false);
    const auto ns = idx.knn_within(0, 1, 1);
    REQUIRE(ns.neighbors.size() == 1);
    CHECK(ns.neighbors[0].row == 1);
    CHECK(ns.out_of_class_count == 0);
}

TEST_CASE("knn_within reduced-K fallback warns, zero co-members throws") {
    const auto t = one_dim({0, 1, 2, 3}, {1, 1, 2, 2}, 2);
    const NeighborIndex idx(t, false);
    std::vector<std::string> warnings;
    set_warning_handler([&warnings](const std::string& m) { warnings.push_back(m); });
    const auto ns = idx.knn_within(0, 5, 1);
    set_warning_handler({});
    CHECK(ns.neighbors.size() == 1);  // only one co-member available
    CHECK(warnings.size() == 1);

    const auto single = one_dim({0, 1}, {1, 2}, 2);
    const NeighborIndex idx2(single, false);
    CHECK_THROWS(idx2.knn_within(0, 1, 1));
}

TEST_CASE("scaling maps ranges onto [0,1] and constant features to zero") {
    FeatureTable t;
    t.feature_names = {"wide", "flat"};
    t.values = {0, 3, 50, 3, 100, 3};
    t.labels = {1, 1, 1};
    t.num_classes = 1;
    const NeighborIndex idx(t, true);
    CHECK(idx.inverse_ranges()[0] == doctest::Approx(0.01));
    CHECK(idx.inverse_ranges()[1] == 0.0);
    // distance between rows 0 and 2 is 1.0 in scaled space
    const auto ns = idx.knn_all(0, 2);
    CHECK(ns.neighbors[1].squared_distance == doctest::Approx(1.0));
}

TEST_CASE("index queries match brute force on random tables") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const bool quantized = seed % 2 == 0;
        const auto t = testsupport::make_uniform_table(60 + 13 * seed, 4, 3, seed, quantized);
        for (bool scale : {false, true}) {
            const NeighborIndex idx(t, scale);
            for (std::size_t owner = 0; owner < t.rows(); owner += 7) {
                const auto ns = idx.knn_all(owner, 8);
                const auto expect = brute_knn(t, owner, 8, scale);
                REQUIRE(ns.neighbors.size() == expect.size());
                std::size_t h = 0;
                for (std::size_t i = 0; i < expect.size(); ++i) {
                    CHECK(ns.neighbors[i].row == expect[i]);
                    if (t.labels[expect[i]] != t.labels[owner]) ++h;
                }
                CHECK(ns.out_of_class_count == h);
                CHECK(std::is_sorted(ns.neighbors.begin(), ns.neighbors.end(),
                                     [](const auto& a, const auto& b) {
                                         return a.squared_distance < b.squared_distance;
                                     }));

                const int cls = t.labels[owner];
                const auto within = idx.knn_within(owner, 5, cls);
                const auto expect_within = brute_knn(t, owner, 5, scale, cls);
                REQUIRE(within.neighbors.size() == expect_within.size());
                for (std::size_t i = 0; i < expect_within.size(); ++i) {
                    CHECK(within.neighbors[i].row == expect_within[i]);
                }
                CHECK(within.out_of_class_count == 0);
            }
        }
    }
}
