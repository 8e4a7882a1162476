#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qtl/commands.hpp"

int main(int argc, char** argv) {
    using namespace qtl::cli;

    CLI::App app{"Hybrid quantum transfer-learning experiments"};
    app.require_subcommand(1);

    TrainArgs train_args;
    std::string train_config;
    std::string train_out = ".";
    std::optional<std::string> train_data;
    std::optional<std::uint64_t> train_seed;
    auto* train = app.add_subcommand("train", "Train a classifier head and write metrics, checkpoint and manifest");
    train->add_option("--config", train_config, "key = value config file (defaults used when omitted)");
    train->add_option("--data", train_data, "Feature CSV, PGM directory, or 'synthetic' (overrides config)");
    train->add_option("--out", train_out, "Output directory");
    train->add_option("--seed", train_seed, "Run seed (overrides config)");

    EvaluateArgs eval_args;
    std::string eval_checkpoint;
    std::string eval_manifest;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a checkpoint on a dataset");
    evaluate->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
    evaluate->add_option("--data", eval_args.data, "Feature CSV or PGM directory")->required();
    evaluate->add_option("--manifest", eval_manifest, "Run manifest (default: next to the checkpoint)");

    std::string demo_input;
    std::string demo_scheme = "frqi";
    auto* demo = app.add_subcommand("encode-demo", "Encode an image or feature file and report the round trip");
    demo->add_option("--data", demo_input, "PGM image, feature CSV, or number list")->required();
    demo->add_option("--scheme", demo_scheme, "frqi, neqr or amplitude")
        ->check(CLI::IsMember({"frqi", "neqr", "amplitude"}));

    GradCheckArgs grad_args;
    std::string grad_config;
    std::optional<std::uint64_t> grad_seed;
    auto* grad = app.add_subcommand("grad-check", "Compare analytic and finite-difference gradients");
    grad->add_option("--config", grad_config, "key = value config file (defaults used when omitted)");
    grad->add_option("--seed", grad_seed, "Seed (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*train) {
        train_args.config = train_config;
        train_args.out = train_out;
        train_args.data = train_data;
        train_args.seed = train_seed;
        return cmd_train(train_args, std::cout, std::cerr);
    }
    if (*evaluate) {
        eval_args.checkpoint = eval_checkpoint;
        if (!eval_manifest.empty()) eval_args.manifest = eval_manifest;
        return cmd_evaluate(eval_args, std::cout, std::cerr);
    }
    if (*demo) return cmd_encode_demo(demo_input, demo_scheme, std::cout, std::cerr);
    if (*grad) {
        if (!grad_config.empty()) grad_args.config = grad_config;
        grad_args.seed = grad_seed;
        return cmd_grad_check(grad_args, std::cout, std::cerr);
    }
    return kExitConfig;
}
