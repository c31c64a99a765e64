#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "imbtk/evaluation.hpp"
#include "support/datagen.hpp"

using namespace imbtk;

TEST_CASE("stratified_split keeps per-class proportions") {
    const auto t = testsupport::make_uniform_table_with_counts({10, 20}, 2, 3);
    SplitSpec spec;
    spec.train_fraction = 0.7;
    spec.seed = 5;
    const auto split = stratified_split(t, spec, 0);
    CHECK(split.train.size() == 21);
    CHECK(split.test.size() == 9);
    std::size_t train_c1 = 0;
    for (std::size_t row : split.train) {
        if (t.labels[row] == 1) ++train_c1;
    }
    CHECK(train_c1 == 7);

    // disjoint and covering
    std::set<std::size_t> all(split.train.begin(), split.train.end());
    for (std::size_t row : split.test) CHECK(all.insert(row).second);
    CHECK(all.size() == t.rows());
}

TEST_CASE("stratified_split guards tiny classes") {
    const auto t = testsupport::make_uniform_table_with_counts({2, 10}, 2, 4);
    SplitSpec spec;
    spec.train_fraction = 0.5;
    spec.seed = 1;
    const auto split = stratified_split(t, spec, 0);
    std::size_t train_c1 = 0, test_c1 = 0;
    for (std::size_t row : split.train) {
        if (t.labels[row] == 1) ++train_c1;
    }
    for (std::size_t row : split.test) {
        if (t.labels[row] == 1) ++test_c1;
    }
    CHECK(train_c1 == 1);
    CHECK(test_c1 == 1);

    const auto tiny = testsupport::make_uniform_table_with_counts({1, 10}, 2, 4);
    CHECK_THROWS(stratified_split(tiny, spec, 0));
    SplitSpec bad = spec;
    bad.train_fraction = 1.0;
    CHECK_THROWS(stratified_split(t, bad, 0));
}

TEST_CASE("stratified_split is deterministic per (seed, repeat)") {
    const auto t = testsupport::make_uniform_table_with_counts({15, 25, 40}, 3, 9);
    SplitSpec spec;
    spec.seed = 77;
    const auto a = stratified_split(t, spec, 3);
    const auto b = stratified_split(t, spec, 3);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    const auto c = stratified_split(t, spec, 4);
    CHECK(a.train != c.train);
}

TEST_CASE("sensitivity reads the confusion matrix") {
    ConfusionMatrix m(3);
    m.at(1, 1) = 3;
    m.at(1, 2) = 1;
    m.at(2, 2) = 5;
    m.at(3, 1) = 2;
    CHECK(sensitivity(m, 1) == 75.0);
    CHECK(sensitivity(m, 2) == 100.0);
    CHECK(sensitivity(m, 3) == 0.0);
    ConfusionMatrix empty(3);
    CHECK_THROWS(sensitivity(empty, 1));
}

TEST_CASE("run_experiment: protocol invariants on a small dataset") {
    const auto t = testsupport::make_line_blobs({12, 40, 16}, 3, 2.0, 1.0, 31);
    SplitSpec spec;
    spec.repeats = 3;
    spec.seed = 500;
    ForestParams forest;
    forest.n_trees = 15;

    SamplerConfig smote_cfg;
    smote_cfg.method = Method::smote;
    smote_cfg.seed = 500;
    SamplerConfig random_cfg;
    random_cfg.method = Method::random;
    random_cfg.seed = 500;

    // observer: test rows never overlap synthetic parents' world; the batch
    // only references training rows
    std::vector<std::vector<std::size_t>> test_sets_baseline;
    std::vector<std::vector<std::size_t>> test_sets_smote;
    auto observer = [&](const std::string& method, std::size_t repeat, const Split& split,
                        const SyntheticBatch* batch) {
        (void)repeat;
        std::set<std::size_t> train(split.train.begin(), split.train.end());
        for (std::size_t row : split.test) CHECK(train.count(row) == 0);
        if (batch != nullptr) {
            for (const auto& prov : batch->provenance) {
                CHECK(prov.parent_row < split.train.size());
            }
        }
        if (method == "none") test_sets_baseline.push_back(split.test);
        if (method == "smote") test_sets_smote.push_back(split.test);
    };

    const auto report = run_experiment(t, spec, {smote_cfg, random_cfg}, forest, observer);

    REQUIRE(report.methods.size() == 3);
    CHECK(report.methods[0].name == "none");
    CHECK(report.methods[1].name == "smote");
    CHECK(report.methods[2].name == "random");
    CHECK(report.majority_class == 2);
    CHECK(report.classes == std::vector<int>{1, 2, 3});

    // identical test partitions across methods for the same seed
    CHECK(test_sets_baseline == test_sets_smote);

    for (const auto& method : report.methods) {
        REQUIRE(method.repeats.size() == 3);
        for (const auto& record : method.repeats) {
            // accuracy equals trace / test size
            const double expected = 100.0 * static_cast<double>(record.confusion.trace()) /
                                    static_cast<double>(record.confusion.total());
            CHECK(std::abs(record.accuracy - expected) < 1e-9);
            // confusion row sums equal per-class test counts: totals add up
            CHECK(record.confusion.total() ==
                  test_sets_baseline[0].size());
            for (const auto& [cls, value] : record.sensitivity) {
                CHECK(value >= 0.0);
                CHECK(value <= 100.0);
            }
        }
        CHECK(method.mean_accuracy >= 0.0);
        CHECK(method.mean_accuracy <= 100.0);
    }

    // avg increase column covers each class and counted only smote (the one
    // synthetic method here)
    REQUIRE(report.avg_increase.size() == 3);
    const auto* baseline = report.find("none");
    const auto* smote_result = report.find("smote");
    REQUIRE(baseline != nullptr);
    REQUIRE(smote_result != nullptr);
    for (int cls : report.classes) {
        const double expected =
            smote_result->mean_sensitivity.at(cls) - baseline->mean_sensitivity.at(cls);
        CHECK(report.avg_increase.at(cls) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("run_experiment is reproducible end to end") {
    const auto t = testsupport::make_line_blobs({10, 25}, 2, 1.5, 1.0, 77);
    SplitSpec spec;
    spec.repeats = 2;
    spec.seed = 9;
    ForestParams forest;
    forest.n_trees = 5;
    SamplerConfig cfg;
    cfg.method = Method::adasyn;
    cfg.seed = 9;
    const auto a = run_experiment(t, spec, {cfg}, forest);
    const auto b = run_experiment(t, spec, {cfg}, forest);
    CHECK(a.to_json() == b.to_json());
    CHECK(a.to_csv() == b.to_csv());
}

TEST_CASE("baseline-only report has no increase column") {
    const auto t = testsupport::make_line_blobs({8, 20}, 2, 2.0, 1.0, 13);
    SplitSpec spec;
    spec.repeats = 1;
    spec.seed = 3;
    const auto report = run_experiment(t, spec, {}, ForestParams{.n_trees = 3});
    CHECK(report.methods.size() == 1);
    CHECK(report.avg_increase.empty());
    // single repeat: means equal the repeat values
    const auto& method = report.methods[0];
    CHECK(method.mean_accuracy == method.repeats[0].accuracy);
    for (const auto& [cls, value] : method.repeats[0].sensitivity) {
        CHECK(method.mean_sensitivity.at(cls) == value);
    }
}
