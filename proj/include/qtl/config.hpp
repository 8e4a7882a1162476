#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "qtl/model.hpp"
#include "qtl/train.hpp"

namespace qtl {

/// Complete experiment description. Defaults reproduce the reference protocol:
/// batch 8, lr 1e-4, weight decay 0.01, 70/15/15 group-aware balanced split.
struct TrainConfig {
    HeadMode mode = HeadMode::DressedCircuit;
    std::optional<EmbeddingKind> embedding;  // unset: angle for dqc, amplitude for purevqc
    std::size_t n_qubits = 0;                // 0: 4 for dqc, derived from input width for purevqc
    std::size_t depth = 1;
    RotationAxis rotation = RotationAxis::Y;
    AngleAxis angle_axis = AngleAxis::Y;
    std::size_t n_classes = 0;  // 0: taken from the data
    std::size_t epochs = 25;
    std::size_t batch_size = 8;
    double lr = 1e-4;
    double weight_decay = 0.01;
    OptimizerKind optimizer = OptimizerKind::Adam;
    bool full_batch = false;
    std::uint64_t seed = 0;

    /// Feature CSV, PGM directory, or "synthetic".
    std::string data = "synthetic";
    std::array<double, 3> split{0.7, 0.15, 0.15};
    bool balance = true;
    bool export_splits = false;

    std::size_t synth_n_per_class = 100;
    std::size_t synth_classes = 2;
    std::size_t synth_dim = 512;
    double synth_separation = 10.0;
    std::size_t synth_group_size = 1;

    /// Feature width when no data is involved (grad-check).
    std::size_t input_dim = 512;

    EmbeddingKind resolved_embedding() const noexcept;
    std::size_t resolved_qubits(std::size_t feature_dim) const;

    /// Cross-key rules; ConfigError names the offending keys.
    void validate() const;
};

/// Ordered `key = value` pairs; '#' starts a comment. Throws ConfigError.
std::map<std::string, std::string> parse_key_values(std::string_view text);

/// Keys named `code_version` or starting with `result.` are informational and
/// ignored, so a run manifest is itself a loadable config.
TrainConfig parse_config(std::string_view text);
TrainConfig load_config(const std::filesystem::path& path);

/// Every key with its resolved value, one per line, in a fixed order.
std::string render_config(const TrainConfig& config);

TrainOptions train_options(const TrainConfig& config);

std::string_view to_string(HeadMode mode) noexcept;
std::string_view to_string(EmbeddingKind kind) noexcept;

}  // namespace qtl
