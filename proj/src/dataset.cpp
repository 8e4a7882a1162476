#include "qtl/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "qtl/errors.hpp"
#include "qtl/pgm.hpp"
#include "qtl/rng.hpp"

namespace qtl {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::string line_error(std::size_t line_no, const std::string& what) {
    return "line " + std::to_string(line_no) + ": " + what;
}

double parse_double(std::string_view field, std::size_t line_no) {
    field = trim(field);
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || field.empty() || !std::isfinite(v)) {
        throw DataError(line_error(line_no, "invalid number '" + std::string(field) + "'"));
    }
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

std::size_t Dataset::feature_dim() const {
    if (samples.empty()) throw DataError("dataset is empty");
    if (!samples.front().has_features()) throw DataError("dataset holds images, not feature vectors");
    const std::size_t dim = samples.front().features().size();
    for (const Sample& s : samples) {
        if (!s.has_features() || s.features().size() != dim) throw DataError("dataset has ragged feature vectors");
    }
    return dim;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(n_classes(), 0);
    for (const Sample& s : samples) ++counts.at(s.label);
    return counts;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.class_names = class_names;
    out.samples.reserve(indices.size());
    for (std::size_t i : indices) out.samples.push_back(samples.at(i));
    return out;
}

Dataset parse_feature_csv(std::string_view text, const CsvOptions& options) {
    Dataset ds;
    ds.class_names = options.known_classes;
    std::size_t dim = options.expected_dim;
    std::size_t line_no = 0;
    bool seen_header = false;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (!seen_header) {
            seen_header = true;
            if (fields.size() < 3 || trim(fields[0]) != "group_id" || trim(fields[1]) != "label") {
                throw DataError(line_error(line_no, "header must start with group_id,label,f0"));
            }
            const std::size_t header_dim = fields.size() - 2;
            for (std::size_t k = 0; k < header_dim; ++k) {
                if (trim(fields[k + 2]) != "f" + std::to_string(k)) {
                    throw DataError(line_error(line_no, "header column " + std::to_string(k + 2) +
                                                            " should be f" + std::to_string(k)));
                }
            }
            if (dim != 0 && header_dim != dim) {
                throw DataError(line_error(line_no, "expected " + std::to_string(dim) + " feature columns, header has " +
                                                        std::to_string(header_dim)));
            }
            dim = header_dim;
            continue;
        }
        if (fields.size() != dim + 2) {
            throw DataError(line_error(line_no, "expected " + std::to_string(dim) + " features, got " +
                                                    std::to_string(fields.size() < 2 ? 0 : fields.size() - 2)));
        }
        Sample s;
        s.group_id = std::string(trim(fields[0]));
        if (s.group_id.empty()) throw DataError(line_error(line_no, "empty group_id"));
        const std::string label(trim(fields[1]));
        auto it = std::find(ds.class_names.begin(), ds.class_names.end(), label);
        if (it == ds.class_names.end()) {
            if (options.strict && !options.known_classes.empty()) {
                throw DataError(line_error(line_no, "unknown label '" + label + "'"));
            }
            ds.class_names.push_back(label);
            it = ds.class_names.end() - 1;
        }
        s.label = static_cast<std::size_t>(it - ds.class_names.begin());
        FeatureVector f;
        f.reserve(dim);
        for (std::size_t k = 0; k < dim; ++k) f.push_back(parse_double(fields[k + 2], line_no));
        s.input = std::move(f);
        ds.samples.push_back(std::move(s));
    }
    if (!seen_header) throw DataError("feature CSV is empty");
    return ds;
}

Dataset load_feature_csv(const std::filesystem::path& path, const CsvOptions& options) {
    const std::string text = read_file(path);
    try {
        return parse_feature_csv(text, options);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string format_feature_csv(const Dataset& dataset) {
    const std::size_t dim = dataset.feature_dim();
    std::string out = "group_id,label";
    for (std::size_t k = 0; k < dim; ++k) out += ",f" + std::to_string(k);
    out += '\n';
    for (const Sample& s : dataset.samples) {
        out += s.group_id;
        out += ',';
        out += dataset.class_names.at(s.label);
        for (double v : s.features()) {
            out += ',';
            append_double(out, v);
        }
        out += '\n';
    }
    return out;
}

void write_feature_csv(const std::filesystem::path& path, const Dataset& dataset) {
    const std::string text = format_feature_csv(dataset);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

Dataset synth_dataset(const SynthSpec& settings) {
    if (settings.n_per_class == 0 || settings.n_classes == 0 || settings.dim == 0 || settings.group_size == 0) {
        throw std::invalid_argument("synth_dataset: sizes must be positive");
    }
    if (settings.dim < settings.n_classes) throw std::invalid_argument("synth_dataset: dim must be >= n_classes");
    Rng rng(derive_seed(settings.seed, "synth"));

    // Gram-Schmidt on Gaussian draws gives orthonormal class directions.
    std::vector<std::vector<double>> dirs;
    while (dirs.size() < settings.n_classes) {
        std::vector<double> v(settings.dim);
        for (double& x : v) x = rng.normal();
        for (const auto& u : dirs) {
            double dot = 0.0;
            for (std::size_t k = 0; k < settings.dim; ++k) dot += v[k] * u[k];
            for (std::size_t k = 0; k < settings.dim; ++k) v[k] -= dot * u[k];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (double& x : v) x /= norm;
        dirs.push_back(std::move(v));
    }

    // Orthonormal centers scaled by s/sqrt(2) are pairwise s apart.
    const double radius = settings.separation / std::sqrt(2.0);
    Dataset ds;
    for (std::size_t c = 0; c < settings.n_classes; ++c) ds.class_names.push_back("class" + std::to_string(c));
    for (std::size_t c = 0; c < settings.n_classes; ++c) {
        for (std::size_t i = 0; i < settings.n_per_class; ++i) {
            FeatureVector f(settings.dim);
            for (std::size_t k = 0; k < settings.dim; ++k) f[k] = radius * dirs[c][k] + rng.normal();
            Sample s;
            s.input = std::move(f);
            s.label = c;
            s.group_id = "c" + std::to_string(c) + "_g" + std::to_string(i / settings.group_size);
            ds.samples.push_back(std::move(s));
        }
    }
    return ds;
}

Dataset load_pgm_directory(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) throw DataError("not a directory: " + root.string());
    std::vector<fs::path> class_dirs;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (entry.is_directory()) class_dirs.push_back(entry.path());
    }
    std::sort(class_dirs.begin(), class_dirs.end());
    Dataset ds;
    for (const fs::path& dir : class_dirs) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".pgm") files.push_back(entry.path());
        }
        if (files.empty()) continue;
        std::sort(files.begin(), files.end());
        const std::size_t label = ds.class_names.size();
        ds.class_names.push_back(dir.filename().string());
        for (const fs::path& file : files) {
            const std::string stem = file.stem().string();
            const std::size_t sep = stem.find("__");
            if (sep == std::string::npos || sep == 0) {
                throw DataError(file.string() + ": file name must be <group_id>__<slice>.pgm");
            }
            Sample s;
            s.input = load_pgm_image(file);
            s.label = label;
            s.group_id = stem.substr(0, sep);
            ds.samples.push_back(std::move(s));
        }
    }
    if (ds.samples.empty()) throw DataError("no .pgm images under " + root.string());
    return ds;
}

Dataset flatten_images(const Dataset& dataset) {
    Dataset out;
    out.class_names = dataset.class_names;
    out.samples.reserve(dataset.size());
    for (const Sample& s : dataset.samples) {
        Sample t;
        t.label = s.label;
        t.group_id = s.group_id;
        if (s.has_features()) {
            t.input = s.features();
        } else {
            FeatureVector f;
            f.reserve(s.image().size());
            for (std::uint8_t p : s.image().pixels()) f.push_back(static_cast<double>(p) / 255.0);
            t.input = std::move(f);
        }
        out.samples.push_back(std::move(t));
    }
    return out;
}

}  // namespace qtl
