#include "qtl/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <vector>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

template <typename U>
void put_le(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_array(std::string& out, const std::vector<double>& values) {
    put_le<std::uint64_t>(out, values.size());
    for (double v : values) put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
  public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <typename U>
    U get() {
        if (pos_ + sizeof(U) > bytes_.size()) throw FormatError("checkpoint: truncated");
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i) {
            v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        }
        pos_ += sizeof(U);
        return v;
    }

    std::vector<double> get_array(std::size_t expected, const char* what) {
        const auto count = get<std::uint64_t>();
        if (count != expected) {
            throw FormatError(std::string("checkpoint: ") + what + " has " + std::to_string(count) +
                              " values, expected " + std::to_string(expected));
        }
        std::vector<double> out(count);
        for (double& v : out) v = std::bit_cast<double>(get<std::uint64_t>());
        return out;
    }

    bool done() const { return pos_ == bytes_.size(); }

  private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_checkpoint(const HybridModel& model) {
    model.validate();
    std::string out(kCheckpointMagic);
    out.push_back(static_cast<char>(model.mode == HeadMode::DressedCircuit ? 0 : 1));
    out.push_back(static_cast<char>(model.embedding));
    out.push_back(static_cast<char>(model.vqc.axis));
    out.push_back(static_cast<char>(model.angle_axis));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.input_dim));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.vqc.n_qubits));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.vqc.depth));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.n_classes));
    const std::vector<double> none;
    put_array(out, model.pre ? model.pre->weights() : none);
    put_array(out, model.pre ? model.pre->bias() : none);
    put_array(out, model.qparams);
    put_array(out, model.post ? model.post->weights() : none);
    put_array(out, model.post ? model.post->bias() : none);
    return out;
}

HybridModel decode_checkpoint(std::string_view bytes) {
    if (bytes.size() < kCheckpointMagic.size() || bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
        throw FormatError("checkpoint: bad magic (expected " + std::string(kCheckpointMagic) + ")");
    }
    Reader r(bytes.substr(kCheckpointMagic.size()));
    const auto mode = r.get<std::uint8_t>();
    const auto embedding = r.get<std::uint8_t>();
    const auto axis = r.get<std::uint8_t>();
    const auto angle_axis = r.get<std::uint8_t>();
    if (mode > 1 || embedding > 2 || axis > 2 || angle_axis > 1) throw FormatError("checkpoint: bad enum tag");

    HybridModel m;
    m.mode = mode == 0 ? HeadMode::DressedCircuit : HeadMode::PureVqc;
    m.embedding = static_cast<EmbeddingKind>(embedding);
    m.vqc.axis = static_cast<RotationAxis>(axis);
    m.angle_axis = static_cast<AngleAxis>(angle_axis);
    m.input_dim = r.get<std::uint32_t>();
    m.vqc.n_qubits = r.get<std::uint32_t>();
    m.vqc.depth = r.get<std::uint32_t>();
    m.n_classes = r.get<std::uint32_t>();
    if (m.input_dim == 0 || m.vqc.n_qubits == 0 || m.vqc.n_qubits > 30 || m.vqc.depth == 0 || m.n_classes == 0) {
        throw FormatError("checkpoint: invalid dimensions");
    }

    try {
        const bool dressed = m.mode == HeadMode::DressedCircuit;
        const std::size_t width = dressed ? dqc_embedding_width(m.embedding, m.vqc.n_qubits) : 0;
        auto pre_w = r.get_array(dressed ? width * m.input_dim : 0, "pre weights");
        auto pre_b = r.get_array(width, "pre bias");
        m.qparams = r.get_array(m.vqc.n_params(), "quantum parameters");
        auto post_w = r.get_array(dressed ? m.n_classes * m.vqc.n_qubits : 0, "post weights");
        auto post_b = r.get_array(dressed ? m.n_classes : 0, "post bias");
        if (!r.done()) throw FormatError("checkpoint: trailing bytes");
        if (dressed) {
            m.pre = DenseLayer(m.input_dim, width, std::move(pre_w), std::move(pre_b));
            m.post = DenseLayer(m.vqc.n_qubits, m.n_classes, std::move(post_w), std::move(post_b));
        }
        m.validate();
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("checkpoint: ") + e.what());
    }
    return m;
}

void save_checkpoint(const std::filesystem::path& path, const HybridModel& model) {
    const std::string bytes = encode_checkpoint(model);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

HybridModel load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open checkpoint " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_checkpoint(bytes);
}

}  // namespace qtl
