#include "qtl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qtl {

std::string_view split_name(SplitKind split) noexcept {
    switch (split) {
        case SplitKind::Train: return "train";
        case SplitKind::Val: return "val";
        case SplitKind::Test: return "test";
    }
    return "test";
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> truth) {
    if (predicted.size() != truth.size() || truth.empty()) {
        throw std::invalid_argument("accuracy: need equal, non-zero lengths (got " +
                                    std::to_string(predicted.size()) + " and " +
                                    std::to_string(truth.size()) + ")");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ConfusionMatrix confusion_matrix(std::span<const std::size_t> predicted,
                                 std::span<const std::size_t> truth, std::size_t n_classes) {
    if (predicted.size() != truth.size()) throw std::invalid_argument("confusion_matrix: length mismatch");
    ConfusionMatrix cm(n_classes, std::vector<std::size_t>(n_classes, 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= n_classes || predicted[i] >= n_classes) {
            throw std::out_of_range("confusion_matrix: class index out of range");
        }
        ++cm[truth[i]][predicted[i]];
    }
    return cm;
}

double auroc_binary(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) throw std::invalid_argument("auroc_binary: length mismatch");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Sum of midranks (1-based) of the positives.
    double rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            const int y = labels[order[k]];
            if (y != 0 && y != 1) throw std::invalid_argument("auroc_binary: labels must be 0 or 1");
            if (y == 1) {
                rank_sum += midrank;
                ++n_pos;
            }
        }
        i = j;
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("auroc_binary: undefined without both positive and negative samples");
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

double auroc_macro_ovr(const std::vector<std::vector<double>>& probs,
                       std::span<const std::size_t> labels) {
    if (probs.size() != labels.size() || probs.empty()) {
        throw std::invalid_argument("auroc_macro_ovr: need one probability row per label");
    }
    const std::size_t n_classes = probs.front().size();
    if (n_classes < 2) throw std::invalid_argument("auroc_macro_ovr: need at least two classes");
    std::vector<double> column(labels.size());
    std::vector<int> onehot(labels.size());
    double total = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (probs[i].size() != n_classes) throw std::invalid_argument("auroc_macro_ovr: ragged rows");
            column[i] = probs[i][c];
            onehot[i] = labels[i] == c ? 1 : 0;
        }
        if (std::find(onehot.begin(), onehot.end(), 1) == onehot.end()) {
            throw std::invalid_argument("auroc_macro_ovr: class " + std::to_string(c) + " is absent");
        }
        total += auroc_binary(column, onehot);
    }
    return total / static_cast<double>(n_classes);
}

}  // namespace qtl
