#include <algorithm>

#include "doctest.h"
#include "imbtk/random_forest.hpp"
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

double training_accuracy(const RandomForest& forest, const FeatureTable& t) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (forest.predict(t.row(i)) == t.labels[i]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(t.rows());
}

}  // namespace

TEST_CASE("plain CART memorizes consistent data (no-bootstrap hook)") {
    const auto t = testsupport::make_uniform_table(80, 3, 4, 42);
    ForestParams params;
    params.n_trees = 1;
    params.mtry = t.cols();
    params.bootstrap = false;
    const auto forest = RandomForest::train(t, params, 7);
    CHECK(training_accuracy(forest, t) == 1.0);
}

TEST_CASE("separable 1-D data is fit perfectly by one tree") {
    const auto t = one_dim({0, 1, 2, 10, 11, 12}, {1, 1, 1, 2, 2, 2}, 2);
    ForestParams params;
    params.n_trees = 1;
    params.mtry = 1;
    params.bootstrap = false;
    const auto forest = RandomForest::train(t, params, 3);
    CHECK(training_accuracy(forest, t) == 1.0);
    CHECK(forest.predict(std::vector<double>{-5.0}) == 1);
    CHECK(forest.predict(std::vector<double>{20.0}) == 2);
    // the split threshold is the midpoint of the gap
    REQUIRE(forest.trees().size() == 1);
    CHECK(forest.trees()[0].nodes[0].threshold == 6.0);
}

TEST_CASE("thresholds are midpoints of consecutive distinct values") {
    const auto t = one_dim({1, 3, 3, 9}, {1, 1, 2, 2}, 2);
    ForestParams params;
    params.n_trees = 1;
    params.mtry = 1;
    params.bootstrap = false;
    const auto forest = RandomForest::train(t, params, 1);
    for (const auto& node : forest.trees()[0].nodes) {
        if (node.feature < 0) continue;
        CHECK((node.threshold == 2.0 || node.threshold == 6.0));
    }
}

TEST_CASE("prediction is the majority vote with lowest-label ties") {
    const auto t = testsupport::make_uniform_table(60, 2, 4, 11);
    ForestParams params;
    params.n_trees = 5;
    const auto forest = RandomForest::train(t, params, 19);
    for (std::size_t i = 0; i < t.rows(); i += 3) {
        const auto tally = forest.votes(t.row(i));
        std::size_t total = 0;
        for (auto v : tally) total += v;
        CHECK(total == forest.n_trees());
        const int predicted = forest.predict(t.row(i));
        for (int c = 1; c <= t.num_classes; ++c) {
            CHECK(tally[predicted - 1] >= tally[c - 1]);
            if (tally[c - 1] == tally[predicted - 1]) CHECK(predicted <= c);
        }
    }
}

TEST_CASE("same seed gives identical forests, different seeds differ") {
    const auto t = testsupport::make_line_blobs({30, 30, 30}, 4, 2.0, 1.0, 5);
    ForestParams params;
    params.n_trees = 10;
    const auto a = RandomForest::train(t, params, 1001);
    const auto b = RandomForest::train(t, params, 1001);
    const auto c = RandomForest::train(t, params, 1002);
    REQUIRE(a.n_trees() == b.n_trees());
    bool all_same = true;
    bool any_differs_from_c = false;
    for (std::size_t i = 0; i < t.rows(); ++i) {
        if (a.predict(t.row(i)) != b.predict(t.row(i))) all_same = false;
        if (a.predict(t.row(i)) != c.predict(t.row(i))) any_differs_from_c = true;
    }
    CHECK(all_same);
    CHECK(any_differs_from_c);  // blobs overlap enough for seeds to matter
}

TEST_CASE("training rejects degenerate inputs") {
    const auto single = one_dim({1, 2, 3}, {2, 2, 2}, 2);
    ForestParams params;
    CHECK_THROWS(RandomForest::train(single, params, 1));

    const auto t = one_dim({1, 2}, {1, 2}, 2);
    params.n_trees = 0;
    CHECK_THROWS(RandomForest::train(t, params, 1));
}

TEST_CASE("prediction rejects wrong dimension") {
    const auto t = testsupport::make_uniform_table(30, 3, 2, 2);
    const auto forest = RandomForest::train(t, ForestParams{.n_trees = 3}, 5);
    CHECK_THROWS(forest.predict(std::vector<double>{1.0, 2.0}));
}

TEST_CASE("mtry defaults to ceil(sqrt(p)) and is capped at p") {
    const auto t = testsupport::make_uniform_table(40, 10, 2, 3);
    const auto forest = RandomForest::train(t, ForestParams{.n_trees = 1}, 5);
    CHECK(forest.mtry() == 4);  // ceil(sqrt(10))
    const auto capped =
        RandomForest::train(t, ForestParams{.n_trees = 1, .mtry = 99}, 5);
    CHECK(capped.mtry() == 10);
}

TEST_CASE("max depth limits the tree") {
    const auto t = testsupport::make_uniform_table(100, 3, 2, 21);
    ForestParams params;
    params.n_trees = 1;
    params.bootstrap = false;
    params.max_depth = 2;
    const auto forest = RandomForest::train(t, params, 9);
    // depth 2 allows a root split plus one more level: at most 7 nodes
    CHECK(forest.trees()[0].nodes.size() <= 7);
}

TEST_CASE("model dump is valid JSON-ish and repeatable") {
    const auto t = testsupport::make_uniform_table(30, 2, 2, 8);
    const auto forest = RandomForest::train(t, ForestParams{.n_trees = 2}, 4);
    const auto dump = forest.to_json();
    CHECK(dump == forest.to_json());
    CHECK(dump.find("\"trees\"") != std::string::npos);
}
