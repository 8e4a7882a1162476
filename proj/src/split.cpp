#include "qtl/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "qtl/errors.hpp"
#include "qtl/rng.hpp"

namespace qtl {

namespace {

struct Group {
    std::vector<std::size_t> members;
    std::vector<std::size_t> per_class;
};

constexpr std::array<const char*, 3> kSubsetNames{"train", "val", "test"};

}  // namespace

void SplitSpec::validate() const {
    double total = 0.0;
    for (double r : ratios) {
        if (!(r > 0.0)) throw std::invalid_argument("SplitSpec: ratios must be positive");
        total += r;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("SplitSpec: ratios must sum to 1, got " + std::to_string(total));
    }
}

std::array<std::size_t, 3> split_targets(const std::array<double, 3>& ratios, std::size_t total) {
    std::array<std::size_t, 3> out{};
    std::array<double, 3> rem{};
    std::size_t assigned = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        const double exact = ratios[s] * static_cast<double>(total);
        out[s] = static_cast<std::size_t>(std::floor(exact));
        rem[s] = exact - static_cast<double>(out[s]);
        assigned += out[s];
    }
    std::array<std::size_t, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return rem[a] > rem[b]; });
    for (std::size_t k = 0; assigned < total; ++k, ++assigned) ++out[order[k % 3]];
    return out;
}

DatasetSplits balanced_group_split(const Dataset& dataset, const SplitSpec& settings) {
    settings.validate();
    if (dataset.empty()) throw DataError("split: dataset is empty");
    const std::size_t n_classes = dataset.n_classes();
    const auto counts = dataset.class_counts();
    for (std::size_t c = 0; c < n_classes; ++c) {
        if (counts[c] == 0) throw DataError("split: class '" + dataset.class_names[c] + "' has no samples");
    }

    std::vector<Group> groups;
    std::unordered_map<std::string, std::size_t> group_of;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const Sample& s = dataset.samples[i];
        if (s.group_id.empty()) throw DataError("split: sample " + std::to_string(i) + " has no group_id");
        auto [it, inserted] = group_of.try_emplace(s.group_id, groups.size());
        if (inserted) groups.push_back(Group{{}, std::vector<std::size_t>(n_classes, 0)});
        Group& g = groups[it->second];
        g.members.push_back(i);
        ++g.per_class[s.label];
    }

    // targets[subset][class]
    std::array<std::vector<double>, 3> targets;
    const std::size_t smallest = *std::min_element(counts.begin(), counts.end());
    for (std::size_t c = 0; c < n_classes; ++c) {
        const auto t = split_targets(settings.ratios, settings.balance ? smallest : counts[c]);
        for (std::size_t s = 0; s < 3; ++s) targets[s].push_back(static_cast<double>(t[s]));
    }

    Rng rng(derive_seed(settings.seed, "split"));
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return groups[a].members.size() > groups[b].members.size();
    });

    std::array<std::vector<double>, 3> assigned;
    for (auto& a : assigned) a.assign(n_classes, 0.0);
    std::array<std::vector<std::size_t>, 3> chosen;
    for (std::size_t gi : order) {
        const Group& g = groups[gi];
        const double size = static_cast<double>(g.members.size());
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_subset = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            double deficit = 0.0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                deficit += static_cast<double>(g.per_class[c]) * (targets[s][c] - assigned[s][c]);
            }
            deficit /= size;
            if (deficit > best) {
                best = deficit;
                best_subset = s;
            }
        }
        if (settings.balance && best <= 0.0) continue;  // surplus of an over-represented class
        for (std::size_t c = 0; c < n_classes; ++c) assigned[best_subset][c] += static_cast<double>(g.per_class[c]);
        chosen[best_subset].insert(chosen[best_subset].end(), g.members.begin(), g.members.end());
    }

    std::array<Dataset, 3> subsets;
    for (std::size_t s = 0; s < 3; ++s) {
        std::vector<std::vector<std::size_t>> by_class(n_classes);
        for (std::size_t i : chosen[s]) by_class[dataset.samples[i].label].push_back(i);
        for (std::size_t c = 0; c < n_classes; ++c) {
            if (by_class[c].empty()) {
                throw DataError(std::string("split: ") + kSubsetNames[s] + " subset would contain no samples of class '" +
                                dataset.class_names[c] + "'; the group structure is too coarse for these ratios");
            }
        }
        std::vector<std::size_t> keep;
        if (settings.balance) {
            std::size_t k = by_class.front().size();
            for (const auto& v : by_class) k = std::min(k, v.size());
            Rng trim(derive_seed(settings.seed, "split-trim", s));
            for (auto& v : by_class) {
                std::sort(v.begin(), v.end());
                trim.shuffle(v);
                keep.insert(keep.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k));
            }
        } else {
            keep = chosen[s];
        }
        std::sort(keep.begin(), keep.end());
        subsets[s] = dataset.subset(keep);
    }
    return DatasetSplits{std::move(subsets[0]), std::move(subsets[1]), std::move(subsets[2])};
}

std::vector<std::vector<std::size_t>> batches(std::size_t n_samples, std::size_t batch_size,
                                              std::uint64_t epoch_seed) {
    if (batch_size == 0) throw std::invalid_argument("batches: batch_size must be >= 1");
    if (n_samples == 0) throw DataError("batches: dataset is empty");
    std::vector<std::size_t> order(n_samples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(epoch_seed);
    rng.shuffle(order);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n_samples; start += batch_size) {
        const std::size_t end = std::min(n_samples, start + batch_size);
        out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                         order.begin() + static_cast<std::ptrdiff_t>(end));
    }
    return out;
}

std::vector<std::vector<std::size_t>> batches(const Dataset& dataset, std::size_t batch_size,
                                              std::uint64_t epoch_seed) {
    return batches(dataset.size(), batch_size, epoch_seed);
}

}  // namespace qtl
