#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "qtl/dataset.hpp"

namespace qtl {

struct SplitSpec {
    std::array<double, 3> ratios{0.7, 0.15, 0.15};  // train, val, test
    std::uint64_t seed = 0;
    bool balance = true;

    void validate() const;
};

struct DatasetSplits {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Per-class image targets for the three subsets: ratios applied to `total`
/// with largest-remainder rounding, so the targets sum to `total`.
std::array<std::size_t, 3> split_targets(const std::array<double, 3>& ratios, std::size_t total);

/// Group-atomic split. Groups are taken largest first (seeded tie-break) and
/// each goes to the subset with the largest remaining per-class deficit.
///
/// With balance = true the targets come from the smallest class, groups that
/// would only land in saturated subsets are left out, and every subset is then
/// trimmed (seeded) to equal per-class counts. With balance = false each class
/// is split by its own size and every group is used.
///
/// Throws DataError when some subset would lack a class.
DatasetSplits balanced_group_split(const Dataset& dataset, const SplitSpec& settings);

/// Seeded shuffle of [0, n) cut into contiguous chunks; the last chunk may be short.
std::vector<std::vector<std::size_t>> batches(std::size_t n_samples, std::size_t batch_size,
                                              std::uint64_t epoch_seed);
std::vector<std::vector<std::size_t>> batches(const Dataset& dataset, std::size_t batch_size,
                                              std::uint64_t epoch_seed);

}  // namespace qtl
