#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace imbtk::cli {

// Column names appended by the resample command. The audit loader strips
// them so resample output can be fed straight back in.
inline const std::vector<std::string> kProvenanceColumns = {"synthetic", "method", "parent_row"};

struct AggregateOptions {
    std::string input;
    std::string out;
};

struct ResampleOptions {
    std::string input;
    std::string label_column = "label";
    std::string method = "smote";
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::string out;
    std::string lambda_mode = "per_feature";
    double b2_lambda_max = 0.5;
    int num_classes = 0;  // 0 = infer from labels
    bool no_scale = false;
};

struct AuditOptions {
    std::string original;
    std::string resampled;
    std::string label_column = "label";
    std::size_t bins = 50;
    std::string out;
    std::string histograms_out;  // optional JSON dump path
    int num_classes = 0;
};

struct EvaluateOptions {
    std::string input;
    std::string label_column = "label";
    std::vector<std::string> methods;  // subset of none|random|smote|b1|b2|adasyn
    std::size_t repeats = 30;
    double train_fraction = 0.7;
    std::size_t trees = 100;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t k = 5;
    std::size_t mtry = 0;
    std::string lambda_mode = "per_feature";
    double b2_lambda_max = 0.5;
    int num_classes = 0;
};

// Each command throws std::runtime_error / std::invalid_argument on failure;
// the CLI maps that to a nonzero exit status.
void cmd_aggregate(const AggregateOptions& opt);
void cmd_resample(const ResampleOptions& opt);
void cmd_audit(const AuditOptions& opt);
void cmd_evaluate(const EvaluateOptions& opt);

}  // namespace imbtk::cli
