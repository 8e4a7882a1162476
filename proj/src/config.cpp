#include "qtl/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* expected) {
    throw ConfigError("config key '" + key + "': invalid value '" + value + "' (expected " + expected + ")");
}

std::size_t to_size(const std::string& key, const std::string& v) {
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "a non-negative integer");
    return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, v, "a non-negative integer");
    return out;
}

double to_double(const std::string& key, std::string_view v) {
    v = trim(v);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) bad_value(key, std::string(v), "a number");
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    bad_value(key, v, "true or false");
}

std::string_view axis_name(RotationAxis a) {
    switch (a) {
        case RotationAxis::X: return "x";
        case RotationAxis::Z: return "z";
        case RotationAxis::Y: break;
    }
    return "y";
}

}  // namespace

std::string_view to_string(HeadMode mode) noexcept {
    return mode == HeadMode::DressedCircuit ? "dqc" : "purevqc";
}

std::string_view to_string(EmbeddingKind kind) noexcept {
    switch (kind) {
        case EmbeddingKind::Angle: return "angle";
        case EmbeddingKind::DenseAngle: return "dense_angle";
        case EmbeddingKind::Amplitude: return "amplitude";
    }
    return "angle";
}

EmbeddingKind TrainConfig::resolved_embedding() const noexcept {
    if (embedding) return *embedding;
    return mode == HeadMode::PureVqc ? EmbeddingKind::Amplitude : EmbeddingKind::Angle;
}

std::size_t TrainConfig::resolved_qubits(std::size_t feature_dim) const {
    if (mode == HeadMode::PureVqc) {
        const std::size_t need = amplitude_qubits(feature_dim);
        if (n_qubits != 0 && n_qubits != need) {
            throw ConfigError("config keys 'mode', 'n_qubits': purevqc on " + std::to_string(feature_dim) +
                              " features uses " + std::to_string(need) + " qubits, not " + std::to_string(n_qubits));
        }
        return need;
    }
    return n_qubits == 0 ? 4 : n_qubits;
}

void TrainConfig::validate() const {
    const EmbeddingKind emb = resolved_embedding();
    if (mode == HeadMode::PureVqc && emb != EmbeddingKind::Amplitude) {
        throw ConfigError("config keys 'mode', 'embedding': purevqc requires embedding = amplitude, got " +
                          std::string(to_string(emb)));
    }
    if (mode == HeadMode::DressedCircuit && emb == EmbeddingKind::Amplitude) {
        throw ConfigError("config keys 'mode', 'embedding': dqc supports angle or dense_angle, got amplitude");
    }
    if (depth < 1) throw ConfigError("config key 'depth': must be >= 1");
    if (batch_size < 1) throw ConfigError("config key 'batch_size': must be >= 1");
    if (!(lr > 0.0)) throw ConfigError("config key 'lr': must be positive");
    if (!(weight_decay >= 0.0)) throw ConfigError("config key 'weight_decay': must be non-negative");
    if (n_classes == 1) throw ConfigError("config key 'n_classes': need at least 2");
    double total = 0.0;
    for (double r : split) {
        if (!(r > 0.0)) throw ConfigError("config key 'split': ratios must be positive");
        total += r;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("config key 'split': ratios must sum to 1");
    if (synth_n_per_class == 0 || synth_classes < 2 || synth_dim == 0 || synth_group_size == 0) {
        throw ConfigError("config keys 'synth_*': sizes must be positive and synth_classes >= 2");
    }
    if (input_dim == 0) throw ConfigError("config key 'input_dim': must be positive");
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        if (!out.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }
    return out;
}

TrainConfig parse_config(std::string_view text) {
    TrainConfig c;
    for (const auto& [key, v] : parse_key_values(text)) {
        if (key == "code_version" || key.starts_with("result.")) continue;
        if (key == "mode") {
            if (v == "dqc") c.mode = HeadMode::DressedCircuit;
            else if (v == "purevqc") c.mode = HeadMode::PureVqc;
            else bad_value(key, v, "dqc or purevqc");
        } else if (key == "embedding") {
            if (v == "angle") c.embedding = EmbeddingKind::Angle;
            else if (v == "dense_angle") c.embedding = EmbeddingKind::DenseAngle;
            else if (v == "amplitude") c.embedding = EmbeddingKind::Amplitude;
            else bad_value(key, v, "angle, dense_angle or amplitude");
        } else if (key == "n_qubits") {
            c.n_qubits = to_size(key, v);
        } else if (key == "depth") {
            c.depth = to_size(key, v);
        } else if (key == "rotation") {
            if (v == "x") c.rotation = RotationAxis::X;
            else if (v == "y") c.rotation = RotationAxis::Y;
            else if (v == "z") c.rotation = RotationAxis::Z;
            else bad_value(key, v, "x, y or z");
        } else if (key == "angle_axis") {
            if (v == "x") c.angle_axis = AngleAxis::X;
            else if (v == "y") c.angle_axis = AngleAxis::Y;
            else bad_value(key, v, "x or y");
        } else if (key == "n_classes") {
            c.n_classes = to_size(key, v);
        } else if (key == "epochs") {
            c.epochs = to_size(key, v);
        } else if (key == "batch_size") {
            c.batch_size = to_size(key, v);
        } else if (key == "lr") {
            c.lr = to_double(key, v);
        } else if (key == "weight_decay") {
            c.weight_decay = to_double(key, v);
        } else if (key == "optimizer") {
            if (v == "adam") c.optimizer = OptimizerKind::Adam;
            else if (v == "gd") c.optimizer = OptimizerKind::GradientDescent;
            else bad_value(key, v, "adam or gd");
        } else if (key == "full_batch") {
            c.full_batch = to_bool(key, v);
        } else if (key == "seed") {
            c.seed = to_u64(key, v);
        } else if (key == "data") {
            if (v.empty()) bad_value(key, v, "a path or 'synthetic'");
            c.data = v;
        } else if (key == "split") {
            std::vector<std::string_view> parts;
            std::string_view rest = v;
            while (true) {
                const auto comma = rest.find(',');
                parts.push_back(rest.substr(0, comma));
                if (comma == std::string_view::npos) break;
                rest.remove_prefix(comma + 1);
            }
            if (parts.size() != 3) bad_value(key, v, "three comma-separated ratios");
            for (std::size_t i = 0; i < 3; ++i) c.split[i] = to_double(key, parts[i]);
        } else if (key == "balance") {
            c.balance = to_bool(key, v);
        } else if (key == "export_splits") {
            c.export_splits = to_bool(key, v);
        } else if (key == "synth_n_per_class") {
            c.synth_n_per_class = to_size(key, v);
        } else if (key == "synth_classes") {
            c.synth_classes = to_size(key, v);
        } else if (key == "synth_dim") {
            c.synth_dim = to_size(key, v);
        } else if (key == "synth_separation") {
            c.synth_separation = to_double(key, v);
        } else if (key == "synth_group_size") {
            c.synth_group_size = to_size(key, v);
        } else if (key == "input_dim") {
            c.input_dim = to_size(key, v);
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

TrainConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config " + path.string());
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string render_config(const TrainConfig& c) {
    std::ostringstream o;
    const auto b = [](bool v) { return v ? "true" : "false"; };
    o << "mode = " << to_string(c.mode) << '\n'
      << "embedding = " << to_string(c.resolved_embedding()) << '\n'
      << "n_qubits = " << c.n_qubits << '\n'
      << "depth = " << c.depth << '\n'
      << "rotation = " << axis_name(c.rotation) << '\n'
      << "angle_axis = " << (c.angle_axis == AngleAxis::X ? "x" : "y") << '\n'
      << "n_classes = " << c.n_classes << '\n'
      << "epochs = " << c.epochs << '\n'
      << "batch_size = " << c.batch_size << '\n'
      << "lr = " << format_number(c.lr) << '\n'
      << "weight_decay = " << format_number(c.weight_decay) << '\n'
      << "optimizer = " << (c.optimizer == OptimizerKind::Adam ? "adam" : "gd") << '\n'
      << "full_batch = " << b(c.full_batch) << '\n'
      << "seed = " << c.seed << '\n'
      << "data = " << c.data << '\n'
      << "split = " << format_number(c.split[0]) << ',' << format_number(c.split[1]) << ','
      << format_number(c.split[2]) << '\n'
      << "balance = " << b(c.balance) << '\n'
      << "export_splits = " << b(c.export_splits) << '\n'
      << "synth_n_per_class = " << c.synth_n_per_class << '\n'
      << "synth_classes = " << c.synth_classes << '\n'
      << "synth_dim = " << c.synth_dim << '\n'
      << "synth_separation = " << format_number(c.synth_separation) << '\n'
      << "synth_group_size = " << c.synth_group_size << '\n'
      << "input_dim = " << c.input_dim << '\n';
    return o.str();
}

TrainOptions train_options(const TrainConfig& c) {
    TrainOptions t;
    t.epochs = c.epochs;
    t.batch_size = c.batch_size;
    t.adam.lr = c.lr;
    t.adam.weight_decay = c.weight_decay;
    t.optimizer = c.optimizer;
    t.full_batch = c.full_batch;
    t.seed = c.seed;
    return t;
}

}  // namespace qtl
