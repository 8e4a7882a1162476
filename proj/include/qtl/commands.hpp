#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "qtl/config.hpp"
#include "qtl/dataset.hpp"
#include "qtl/model.hpp"
#include "qtl/vqc.hpp"

namespace qtl::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitConfig = 2,
    kExitData = 3,
    kExitNumerical = 4,
    kExitFormat = 5,
};

inline constexpr const char* kMetricsFile = "metrics.csv";
inline constexpr const char* kCheckpointFile = "checkpoint.bin";
inline constexpr const char* kManifestFile = "manifest.txt";

struct TrainArgs {
    std::filesystem::path config;  // empty: all defaults
    std::optional<std::string> data{};
    std::filesystem::path out = ".";
    std::optional<std::uint64_t> seed{};
};

/// Writes metrics.csv, checkpoint.bin and manifest.txt into args.out, plus
/// train/val/test CSVs when export_splits is set.
int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err);

struct EvaluateArgs {
    std::filesystem::path checkpoint;
    std::string data;
    /// Defaults to manifest.txt beside the checkpoint, when present.
    std::optional<std::filesystem::path> manifest{};
};

int cmd_evaluate(const EvaluateArgs& args, std::ostream& out, std::ostream& err);

/// scheme: frqi, neqr (PGM input) or amplitude (PGM, feature CSV, or a plain
/// list of numbers).
int cmd_encode_demo(const std::filesystem::path& input, const std::string& scheme, std::ostream& out,
                    std::ostream& err);

struct GradCheckArgs {
    std::optional<std::filesystem::path> config{};
    std::optional<std::uint64_t> seed{};
    double shift = kParamShift;  // overridable so a broken rule can be demonstrated
    double threshold = 1e-4;
    double step = 1e-5;
};

int cmd_grad_check(const GradCheckArgs& args, std::ostream& out, std::ostream& err);

/// |a - n| / max(|a|, |n|, 1e-3): relative error, with an absolute floor of
/// threshold * 1e-3 for near-zero gradients.
double gradient_discrepancy(double analytic, double numeric) noexcept;

struct GradCheckReport {
    std::size_t n_params = 0;
    std::size_t worst_index = 0;
    double max_discrepancy = 0.0;
};

/// Compares model_backward against central finite differences of the loss.
GradCheckReport gradient_check(const HybridModel& model, std::span<const double> features,
                               std::size_t label, double shift = kParamShift, double step = 1e-5);

/// Resolves the dataset named by config.data (synthetic, PGM directory or CSV).
Dataset load_training_data(const TrainConfig& config);

/// Fresh model for a resolved config and feature width.
HybridModel build_model(const TrainConfig& config, std::size_t feature_dim, std::size_t n_classes);

}  // namespace qtl::cli
