#include "imbtk/commands.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include "imbtk/csv.hpp"
#include "imbtk/divergence.hpp"
#include "imbtk/evaluation.hpp"
#include "imbtk/feature_table.hpp"
#include "imbtk/neighbors.hpp"
#include "imbtk/oversample.hpp"

namespace imbtk::cli {

namespace {

bool wants_json(const std::string& path) {
    return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file: " + path);
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing output file: " + path);
    }
}

LambdaMode parse_lambda_mode(const std::string& mode) {
    if (mode == "per_feature") return LambdaMode::per_feature;
    if (mode == "per_sample") return LambdaMode::per_sample;
    throw std::invalid_argument("unknown lambda mode: " + mode);
}

}  // namespace

void cmd_aggregate(const AggregateOptions& opt) {
    csv::Table table = csv::read_file(opt.input);
    if (table.rows.empty()) {
        throw std::runtime_error("no data rows to aggregate in " + opt.input);
    }
    std::array<std::size_t, 4> rater_cols{};
    for (int i = 0; i < 4; ++i) {
        const std::string name = "r" + std::to_string(i + 1);
        const auto idx = table.find_column(name);
        if (!idx) {
            throw std::runtime_error("rater column '" + name + "' not found in " + opt.input);
        }
        rater_cols[i] = *idx;
    }
    table.header.push_back("label");
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        RatingSet ratings{};
        for (int i = 0; i < 4; ++i) {
            const auto value = csv::parse_double(table.rows[r][rater_cols[i]]);
            if (!value || *value != static_cast<int>(*value) || *value < 1 || *value > 5) {
                throw std::runtime_error("rating at row " + std::to_string(r + 1) +
                                         ", column 'r" + std::to_string(i + 1) +
                                         "' is not an integer in 1..5");
            }
            ratings.ratings[i] = static_cast<int>(*value);
        }
        table.rows[r].push_back(std::to_string(aggregate_rating(ratings)));
    }
    csv::write_file(opt.out, table);
}

void cmd_resample(const ResampleOptions& opt) {
    const auto method = method_from_name(opt.method);
    if (!method) {
        throw std::invalid_argument("unknown method: " + opt.method);
    }
    const FeatureTable table = load_csv(opt.input, opt.label_column, opt.num_classes);
    const ClassPartition part = partition(table);
    const BalancePlan plan = plan_balance(part);
    const NeighborIndex idx(table, !opt.no_scale);

    SamplerConfig cfg;
    cfg.method = *method;
    cfg.k = opt.k;
    cfg.seed = opt.seed;
    cfg.lambda_mode = parse_lambda_mode(opt.lambda_mode);
    cfg.b2_out_of_class_lambda_max = opt.b2_lambda_max;
    const SyntheticBatch batch = oversample(table, plan, cfg, idx);

    csv::Table out;
    out.header = table.feature_names;
    out.header.push_back(opt.label_column);
    for (const auto& name : kProvenanceColumns) out.header.push_back(name);
    out.rows.reserve(table.rows() + batch.rows());
    for (std::size_t i = 0; i < table.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(out.header.size());
        for (double v : table.row(i)) row.push_back(csv::format_double(v));
        row.push_back(std::to_string(table.labels[i]));
        row.push_back("0");
        row.emplace_back();
        row.emplace_back();
        out.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < batch.rows(); ++i) {
        std::vector<std::string> row;
        row.reserve(out.header.size());
        for (double v : batch.row(i)) row.push_back(csv::format_double(v));
        row.push_back(std::to_string(batch.labels[i]));
        row.push_back("1");
        row.push_back(method_name(batch.provenance[i].method));
        row.push_back(std::to_string(batch.provenance[i].parent_row));
        out.rows.push_back(std::move(row));
    }
    csv::write_file(opt.out, out);
}

void cmd_audit(const AuditOptions& opt) {
    const FeatureTable original =
        load_csv(opt.original, opt.label_column, opt.num_classes, kProvenanceColumns);
    const FeatureTable resampled =
        load_csv(opt.resampled, opt.label_column, opt.num_classes, kProvenanceColumns);
    const bool keep_histograms = !opt.histograms_out.empty();
    const DivergenceReport report = audit(original, resampled, opt.bins, keep_histograms);
    write_text(opt.out, wants_json(opt.out) ? report.to_json() : report.to_csv());
    if (keep_histograms) {
        write_text(opt.histograms_out, report.histograms_to_json());
    }
}

void cmd_evaluate(const EvaluateOptions& opt) {
    const FeatureTable table = load_csv(opt.input, opt.label_column, opt.num_classes);

    std::vector<SamplerConfig> samplers;
    for (const auto& name : opt.methods) {
        if (name == "none") continue;  // the baseline always runs
        const auto method = method_from_name(name);
        if (!method) {
            throw std::invalid_argument("unknown method: " + name);
        }
        SamplerConfig cfg;
        cfg.method = *method;
        cfg.k = opt.k;
        cfg.seed = opt.seed;
        cfg.lambda_mode = parse_lambda_mode(opt.lambda_mode);
        cfg.b2_out_of_class_lambda_max = opt.b2_lambda_max;
        samplers.push_back(cfg);
    }

    SplitSpec spec;
    spec.train_fraction = opt.train_fraction;
    spec.repeats = opt.repeats;
    spec.seed = opt.seed;

    ForestParams forest;
    forest.n_trees = opt.trees;
    forest.mtry = opt.mtry;

    const ExperimentReport report = run_experiment(table, spec, samplers, forest);
    write_text(opt.out, wants_json(opt.out) ? report.to_json() : report.to_csv());
}

}  // namespace imbtk::cli
