#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qtl/embeddings.hpp"

namespace qtl {

/// One labelled input: a feature vector or a grayscale image, plus the group
/// (patient) it belongs to.
struct Sample {
    std::variant<FeatureVector, GrayImage> input;
    std::size_t label = 0;
    std::string group_id;

    bool has_features() const noexcept { return std::holds_alternative<FeatureVector>(input); }
    const FeatureVector& features() const { return std::get<FeatureVector>(input); }
    const GrayImage& image() const { return std::get<GrayImage>(input); }
};

struct Dataset {
    std::vector<Sample> samples;
    std::vector<std::string> class_names;

    std::size_t size() const noexcept { return samples.size(); }
    bool empty() const noexcept { return samples.empty(); }
    std::size_t n_classes() const noexcept { return class_names.size(); }

    /// Feature width shared by all samples; throws DataError if absent or ragged.
    std::size_t feature_dim() const;
    std::vector<std::size_t> class_counts() const;

    /// Samples at `indices`, in that order; class names are kept.
    Dataset subset(std::span<const std::size_t> indices) const;
};

struct CsvOptions {
    /// When non-empty, labels are mapped onto these names in this order.
    std::vector<std::string> known_classes;
    /// With known_classes set, reject labels outside it instead of appending them.
    bool strict = false;
    /// Required feature width; taken from the header when unset.
    std::size_t expected_dim = 0;
};

/// Reads `group_id,label,f0,...,f{d-1}`. Labels are class names mapped to
/// indices in first-appearance order. Parsing is locale-independent.
/// Throws DataError naming the offending line.
Dataset load_feature_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_feature_csv(std::string_view text, const CsvOptions& options = {});

/// Shortest round-trip decimal representation of every value.
void write_feature_csv(const std::filesystem::path& path, const Dataset& dataset);
std::string format_feature_csv(const Dataset& dataset);

struct SynthSpec {
    std::size_t n_per_class = 100;
    std::size_t n_classes = 2;
    std::size_t dim = 512;
    /// Euclidean distance between every pair of class centers.
    double separation = 10.0;
    std::uint64_t seed = 0;
    /// Consecutive samples of a class share a group id in chunks of this size.
    std::size_t group_size = 1;
};

/// Unit-variance Gaussian clusters centered on mutually orthogonal random
/// directions. Class names are class0, class1, ...
Dataset synth_dataset(const SynthSpec& settings);

/// Loads `<root>/<class_name>/<group_id>__<slice>.pgm`; class directories are
/// taken in lexicographic order. Images are center-cropped to a power of two.
Dataset load_pgm_directory(const std::filesystem::path& root);

/// Replaces image samples by their pixels scaled to [0, 1].
Dataset flatten_images(const Dataset& dataset);

}  // namespace qtl
