#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "imbtk/commands.hpp"

namespace {

const std::vector<std::string> kMethods = {"none", "random", "smote", "b1", "b2", "adasyn"};
const std::vector<std::string> kLambdaModes = {"per_feature", "per_sample"};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-class oversampling toolkit: synthetic minority oversampling, "
                 "distribution audits, and a random-forest evaluation harness"};
    app.require_subcommand(1);

    imbtk::cli::AggregateOptions aggregate;
    auto* cmd_aggregate = app.add_subcommand(
        "aggregate", "Collapse four rater columns (r1..r4) into one label column");
    cmd_aggregate->add_option("--input", aggregate.input, "Input CSV with columns r1..r4")
        ->required();
    cmd_aggregate->add_option("--out", aggregate.out, "Output CSV path")->required();

    imbtk::cli::ResampleOptions resample;
    auto* cmd_resample = app.add_subcommand(
        "resample", "Oversample every minority class up to the majority count");
    cmd_resample->add_option("--input", resample.input, "Input CSV")->required();
    cmd_resample->add_option("--label-col", resample.label_column, "Label column name")
        ->capture_default_str();
    cmd_resample->add_option("--method", resample.method, "Oversampling method")
        ->check(CLI::IsMember({"random", "smote", "b1", "b2", "adasyn"}))
        ->capture_default_str();
    cmd_resample->add_option("--k", resample.k, "Neighbor count")->capture_default_str();
    cmd_resample->add_option("--seed", resample.seed, "RNG seed (required for reproducibility)")
        ->required();
    cmd_resample->add_option("--out", resample.out, "Output CSV path")->required();
    cmd_resample->add_option("--lambda-mode", resample.lambda_mode, "Interpolation draw policy")
        ->check(CLI::IsMember(kLambdaModes))
        ->capture_default_str();
    cmd_resample
        ->add_option("--b2-lambda-max", resample.b2_lambda_max,
                     "Lambda cap for out-of-class neighbors in b2")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_resample->add_option("--num-classes", resample.num_classes,
                             "Declared class count (default: max label)");
    cmd_resample->add_flag("--no-scale", resample.no_scale,
                           "Disable min-max scaling of the neighbor distance space");

    imbtk::cli::AuditOptions audit;
    auto* cmd_audit = app.add_subcommand(
        "audit", "Score per-class feature distribution drift between two datasets");
    cmd_audit->add_option("--original", audit.original, "Original CSV")->required();
    cmd_audit->add_option("--resampled", audit.resampled, "Resampled CSV")->required();
    cmd_audit->add_option("--label-col", audit.label_column, "Label column name")
        ->capture_default_str();
    cmd_audit->add_option("--bins", audit.bins, "Histogram bin count")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
        ->capture_default_str();
    cmd_audit->add_option("--out", audit.out, "Report path (.csv or .json)")->required();
    cmd_audit->add_option("--histograms", audit.histograms_out,
                          "Optional JSON dump of every histogram pair");
    cmd_audit->add_option("--num-classes", audit.num_classes,
                          "Declared class count (default: max label)");

    imbtk::cli::EvaluateOptions evaluate;
    auto* cmd_evaluate = app.add_subcommand(
        "evaluate", "Stratified repeated hold-out evaluation of oversampling methods");
    cmd_evaluate->add_option("--input", evaluate.input, "Input CSV")->required();
    cmd_evaluate->add_option("--label-col", evaluate.label_column, "Label column name")
        ->capture_default_str();
    cmd_evaluate
        ->add_option("--methods", evaluate.methods,
                     "Comma-separated methods (none|random|smote|b1|b2|adasyn); the "
                     "no-oversampling baseline always runs")
        ->delimiter(',')
        ->check(CLI::IsMember(kMethods))
        ->required();
    cmd_evaluate->add_option("--repeats", evaluate.repeats, "Hold-out repeats")
        ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
        ->capture_default_str();
    cmd_evaluate->add_option("--train-frac", evaluate.train_fraction, "Training fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_evaluate->add_option("--trees", evaluate.trees, "Trees per forest")
        ->capture_default_str();
    cmd_evaluate->add_option("--seed", evaluate.seed, "RNG seed (required for reproducibility)")
        ->required();
    cmd_evaluate->add_option("--out", evaluate.out, "Report path (.csv or .json)")->required();
    cmd_evaluate->add_option("--k", evaluate.k, "Neighbor count for the samplers")
        ->capture_default_str();
    cmd_evaluate->add_option("--mtry", evaluate.mtry,
                             "Features per split (default: ceil(sqrt(p)))");
    cmd_evaluate->add_option("--lambda-mode", evaluate.lambda_mode, "Interpolation draw policy")
        ->check(CLI::IsMember(kLambdaModes))
        ->capture_default_str();
    cmd_evaluate
        ->add_option("--b2-lambda-max", evaluate.b2_lambda_max,
                     "Lambda cap for out-of-class neighbors in b2")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd_evaluate->add_option("--num-classes", evaluate.num_classes,
                             "Declared class count (default: max label)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_aggregate->parsed()) imbtk::cli::cmd_aggregate(aggregate);
        if (cmd_resample->parsed()) imbtk::cli::cmd_resample(resample);
        if (cmd_audit->parsed()) imbtk::cli::cmd_audit(audit);
        if (cmd_evaluate->parsed()) imbtk::cli::cmd_evaluate(evaluate);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
