#include "imbtk/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imbtk/csv.hpp"
#include "imbtk/neighbors.hpp"
#include "imbtk/rng.hpp"
#include "json.hpp"

namespace imbtk {

Split stratified_split(const FeatureTable& table, const SplitSpec& spec,
                       std::size_t repeat_index) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0) {
        throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
    }
    const ClassPartition part = partition(table);
    Rng rng(derive_seed(spec.seed, repeat_index));
    Split split;
    for (int cls = 1; cls <= part.num_classes(); ++cls) {
        auto members = part.members(cls);
        if (members.empty()) continue;
        if (members.size() < 2) {
            throw std::runtime_error("class " + std::to_string(cls) +
                                     " has fewer than 2 members; cannot split");
        }
        const auto n = members.size();
        std::size_t n_train = static_cast<std::size_t>(
            std::llround(spec.train_fraction * static_cast<double>(n)));
        n_train = std::clamp<std::size_t>(n_train, 1, n - 1);
        // Fisher-Yates, then the first n_train go to the training side.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t j = i + rng.uniform_below(n - i);
            std::swap(members[i], members[j]);
        }
        split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
        split.test.insert(split.test.end(), members.begin() + n_train, members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

std::size_t ConfusionMatrix::row_total(int cls) const {
    std::size_t sum = 0;
    for (int p = 1; p <= num_classes; ++p) sum += at(cls, p);
    return sum;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t sum = 0;
    for (int c = 1; c <= num_classes; ++c) sum += at(c, c);
    return sum;
}

std::size_t ConfusionMatrix::total() const {
    std::size_t sum = 0;
    for (std::size_t v : cells) sum += v;
    return sum;
}

double sensitivity(const ConfusionMatrix& confusion, int cls) {
    const std::size_t count = confusion.row_total(cls);
    if (count == 0) {
        throw std::invalid_argument("class " + std::to_string(cls) + " absent from the test set");
    }
    return 100.0 * static_cast<double>(confusion.at(cls, cls)) / static_cast<double>(count);
}

MethodResult run_single(const FeatureTable& table, const SplitSpec& spec,
                        const std::optional<SamplerConfig>& sampler, const ForestParams& forest,
                        const RepeatObserver& observer) {
    MethodResult result;
    result.name = sampler ? method_name(sampler->method) : "none";
    result.sampler = sampler;

    std::map<int, double> sensitivity_sums;
    double accuracy_sum = 0.0;
    for (std::size_t repeat = 0; repeat < spec.repeats; ++repeat) {
        const Split split = stratified_split(table, spec, repeat);
        const FeatureTable train = subset(table, split.train);

        FeatureTable fit_table = train;
        SyntheticBatch batch;
        if (sampler) {
            const ClassPartition train_part = partition(train);
            const BalancePlan plan = plan_balance(train_part);
            const NeighborIndex idx(train, /*scale=*/true);
            SamplerConfig cfg = *sampler;
            cfg.seed = derive_seed(sampler->seed, repeat);
            batch = oversample(train, plan, cfg, idx);
            fit_table = append_batch(train, batch);
        }
        if (observer) observer(result.name, repeat, split, sampler ? &batch : nullptr);

        // The forest seed depends only on (seed, repeat) so methods are
        // compared on identical forests modulo their training data.
        const RandomForest model =
            RandomForest::train(fit_table, forest, derive_seed(spec.seed, 0x9e37, repeat));

        RepeatRecord record;
        record.confusion = ConfusionMatrix(table.num_classes);
        for (std::size_t row : split.test) {
            const int predicted = model.predict(table.row(row));
            ++record.confusion.at(table.labels[row], predicted);
        }
        record.accuracy = 100.0 * static_cast<double>(record.confusion.trace()) /
                          static_cast<double>(split.test.size());
        for (int cls = 1; cls <= table.num_classes; ++cls) {
            if (record.confusion.row_total(cls) == 0) continue;
            const double s = sensitivity(record.confusion, cls);
            record.sensitivity[cls] = s;
            sensitivity_sums[cls] += s;
        }
        accuracy_sum += record.accuracy;
        result.repeats.push_back(std::move(record));
    }

    const double denom = static_cast<double>(spec.repeats);
    for (const auto& [cls, sum] : sensitivity_sums) {
        result.mean_sensitivity[cls] = sum / denom;
    }
    result.mean_accuracy = accuracy_sum / denom;
    return result;
}

ExperimentReport run_experiment(const FeatureTable& table, const SplitSpec& spec,
                                const std::vector<SamplerConfig>& samplers,
                                const ForestParams& forest, const RepeatObserver& observer) {
    if (spec.repeats == 0) {
        throw std::invalid_argument("need at least one repeat");
    }
    ExperimentReport report;
    report.split = spec;
    report.forest = forest;
    const ClassPartition part = partition(table);
    for (int cls = 1; cls <= part.num_classes(); ++cls) {
        if (!part.members(cls).empty()) report.classes.push_back(cls);
    }
    report.majority_class = part.majority_class;

    report.methods.push_back(run_single(table, spec, std::nullopt, forest, observer));
    for (const auto& cfg : samplers) {
        report.methods.push_back(run_single(table, spec, cfg, forest, observer));
    }

    // Mean lift of each minority-class sensitivity, synthetic methods only.
    const MethodResult& baseline = report.methods.front();
    std::map<int, double> sums;
    std::size_t synthetic_count = 0;
    for (const auto& method : report.methods) {
        if (!method.sampler || method.sampler->method == Method::random) continue;
        ++synthetic_count;
        for (const auto& [cls, mean] : method.mean_sensitivity) {
            sums[cls] += mean - baseline.mean_sensitivity.at(cls);
        }
    }
    if (synthetic_count > 0) {
        for (const auto& [cls, sum] : sums) {
            report.avg_increase[cls] = sum / static_cast<double>(synthetic_count);
        }
    }
    return report;
}

const MethodResult* ExperimentReport::find(const std::string& name) const {
    for (const auto& method : methods) {
        if (method.name == name) return &method;
    }
    return nullptr;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "record,method,class,repeat,true_class,predicted_class,value\n";
    auto line = [&out](const std::string& record, const std::string& method,
                       const std::string& cls, const std::string& repeat,
                       const std::string& true_cls, const std::string& predicted_cls,
                       double value) {
        out += record + ',' + method + ',' + cls + ',' + repeat + ',' + true_cls + ',' +
               predicted_cls + ',' + csv::format_double(value) + '\n';
    };
    for (const auto& method : methods) {
        for (const auto& [cls, mean] : method.mean_sensitivity) {
            line("mean_sensitivity", method.name, std::to_string(cls), "", "", "", mean);
        }
        line("mean_accuracy", method.name, "", "", "", "", method.mean_accuracy);
    }
    for (const auto& [cls, value] : avg_increase) {
        line("avg_increase", "", std::to_string(cls), "", "", "", value);
    }
    for (const auto& method : methods) {
        for (std::size_t r = 0; r < method.repeats.size(); ++r) {
            const auto& record = method.repeats[r];
            for (const auto& [cls, value] : record.sensitivity) {
                line("sensitivity", method.name, std::to_string(cls), std::to_string(r), "", "",
                     value);
            }
            line("accuracy", method.name, "", std::to_string(r), "", "", record.accuracy);
            for (int t = 1; t <= record.confusion.num_classes; ++t) {
                for (int p = 1; p <= record.confusion.num_classes; ++p) {
                    const std::size_t count = record.confusion.at(t, p);
                    if (count == 0) continue;
                    line("confusion", method.name, "", std::to_string(r), std::to_string(t),
                         std::to_string(p), static_cast<double>(count));
                }
            }
        }
    }
    return out;
}

std::string ExperimentReport::to_json() const {
    nlohmann::ordered_json root;
    root["config"] = {
        {"train_fraction", split.train_fraction},
        {"repeats", split.repeats},
        {"seed", split.seed},
        {"forest",
         {{"n_trees", forest.n_trees},
          {"mtry", forest.mtry},
          {"min_samples_leaf", forest.min_samples_leaf},
          {"max_depth", forest.max_depth},
          {"bootstrap", forest.bootstrap}}},
    };
    root["classes"] = classes;
    root["majority_class"] = majority_class;
    nlohmann::ordered_json methods_json = nlohmann::ordered_json::array();
    for (const auto& method : methods) {
        nlohmann::ordered_json m;
        m["name"] = method.name;
        if (method.sampler) {
            m["sampler"] = {{"k", method.sampler->k},
                            {"seed", method.sampler->seed},
                            {"lambda_mode",
                             method.sampler->lambda_mode == LambdaMode::per_feature
                                 ? "per_feature"
                                 : "per_sample"},
                            {"b2_out_of_class_lambda_max",
                             method.sampler->b2_out_of_class_lambda_max}};
        }
        nlohmann::ordered_json sens = nlohmann::ordered_json::object();
        for (const auto& [cls, mean] : method.mean_sensitivity) {
            sens[std::to_string(cls)] = mean;
        }
        m["mean_sensitivity"] = std::move(sens);
        m["mean_accuracy"] = method.mean_accuracy;
        nlohmann::ordered_json repeats_json = nlohmann::ordered_json::array();
        for (std::size_t r = 0; r < method.repeats.size(); ++r) {
            const auto& record = method.repeats[r];
            nlohmann::ordered_json rj;
            rj["repeat"] = r;
            rj["accuracy"] = record.accuracy;
            nlohmann::ordered_json rs = nlohmann::ordered_json::object();
            for (const auto& [cls, value] : record.sensitivity) {
                rs[std::to_string(cls)] = value;
            }
            rj["sensitivity"] = std::move(rs);
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (int t = 1; t <= record.confusion.num_classes; ++t) {
                nlohmann::ordered_json row = nlohmann::ordered_json::array();
                for (int p = 1; p <= record.confusion.num_classes; ++p) {
                    row.push_back(record.confusion.at(t, p));
                }
                rows.push_back(std::move(row));
            }
            rj["confusion"] = std::move(rows);
            repeats_json.push_back(std::move(rj));
        }
        m["repeats"] = std::move(repeats_json);
        methods_json.push_back(std::move(m));
    }
    root["methods"] = std::move(methods_json);
    nlohmann::ordered_json increase = nlohmann::ordered_json::object();
    for (const auto& [cls, value] : avg_increase) {
        increase[std::to_string(cls)] = value;
    }
    root["avg_increase"] = std::move(increase);
    return root.dump(2) + "\n";
}

}  // namespace imbtk
