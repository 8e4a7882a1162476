#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace qtl {

enum class SplitKind { Train, Val, Test };

std::string_view split_name(SplitKind split) noexcept;

/// Rows are true classes, columns predicted classes.
using ConfusionMatrix = std::vector<std::vector<std::size_t>>;

struct MetricRecord {
    SplitKind split = SplitKind::Test;
    std::size_t epoch = 0;
    double loss = 0.0;
    double accuracy = 0.0;
    double auroc = 0.0;
    ConfusionMatrix confusion;
};

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth);

ConfusionMatrix confusion_matrix(std::span<const std::size_t> predicted,
                                 std::span<const std::size_t> truth, std::size_t n_classes);

/// Mann-Whitney AUROC with midranks for ties (O(n log n)). labels are 0/1.
/// Throws std::invalid_argument unless both classes are present.
double auroc_binary(std::span<const double> scores, std::span<const int> labels);

/// Unweighted mean of one-vs-rest AUROCs, scoring class c by column c of probs.
/// Throws std::invalid_argument if any class is absent from labels.
double auroc_macro_ovr(const std::vector<std::vector<double>>& probs,
                       std::span<const std::size_t> labels);

}  // namespace qtl
