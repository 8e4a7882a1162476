#include "qtl/embeddings.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qtl {

namespace {

void check_length(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(want) +
                                    " features, got " + std::to_string(got));
    }
}

// A branch with |a|^2 below this is treated as absent when decoding.
constexpr double kZeroMass = 1e-20;

}  // namespace

GrayImage::GrayImage(std::size_t side, std::vector<std::uint8_t> pixels)
    : side_(side), half_bits_(0), pixels_(std::move(pixels)) {
    if (side < 2 || !std::has_single_bit(side)) {
        throw std::invalid_argument("GrayImage: side must be a power of two >= 2, got " +
                                    std::to_string(side));
    }
    if (pixels_.size() != side * side) {
        throw std::invalid_argument("GrayImage: expected " + std::to_string(side * side) +
                                    " pixels, got " + std::to_string(pixels_.size()));
    }
    half_bits_ = static_cast<std::size_t>(std::countr_zero(side));
}

Circuit angle_embed(std::span<const double> features, std::size_t n_qubits, AngleAxis axis) {
    check_length(features.size(), n_qubits, "angle_embed");
    Circuit c(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        c.add(axis == AngleAxis::X ? GateOp::rx(q, features[q]) : GateOp::ry(q, features[q]));
    }
    return c;
}

Circuit dense_angle_embed(std::span<const double> features, std::size_t n_qubits) {
    check_length(features.size(), 2 * n_qubits, "dense_angle_embed");
    Circuit c(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        c.add(GateOp::rx(q, features[2 * q]));
        c.add(GateOp::ry(q, features[2 * q + 1]));
    }
    return c;
}

Circuit angle_embed_template(std::size_t n_qubits, AngleAxis axis) {
    Circuit c(n_qubits);
    const GateKind kind = axis == AngleAxis::X ? GateKind::RX : GateKind::RY;
    for (std::size_t q = 0; q < n_qubits; ++q) c.add(GateOp::rotation(kind, q, Trainable{q}));
    return c;
}

Circuit dense_angle_embed_template(std::size_t n_qubits) {
    Circuit c(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        c.add(GateOp::rotation(GateKind::RX, q, Trainable{2 * q}));
        c.add(GateOp::rotation(GateKind::RY, q, Trainable{2 * q + 1}));
    }
    return c;
}

std::size_t amplitude_qubits(std::size_t n_features) {
    if (n_features == 0) throw std::invalid_argument("amplitude_qubits: no features");
    const std::size_t padded = std::max<std::size_t>(2, std::bit_ceil(n_features));
    return static_cast<std::size_t>(std::countr_zero(padded));
}

StateVector amplitude_embed(std::span<const double> features) {
    const std::size_t n_qubits = amplitude_qubits(features.size());
    double norm2 = 0.0;
    for (double x : features) {
        if (!std::isfinite(x)) throw std::invalid_argument("amplitude_embed: non-finite feature");
        norm2 += x * x;
    }
    if (norm2 == 0.0) throw std::invalid_argument("amplitude_embed: all-zero feature vector");
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    for (std::size_t k = 0; k < features.size(); ++k) amps[k] = features[k] * inv;
    return StateVector::from_amplitudes(std::move(amps));
}

double pixel_angle(std::uint8_t pixel) noexcept {
    return (static_cast<double>(pixel) / 255.0) * (std::numbers::pi / 2.0);
}

StateVector frqi_encode(const GrayImage& image) {
    const std::size_t n_pos = image.size();
    const double prefactor = 1.0 / static_cast<double>(image.side());  // 1 / 2^n
    std::vector<Complex> amps(2 * n_pos, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n_pos; ++i) {
        const double theta = pixel_angle(image[i]);
        amps[i] = prefactor * std::cos(theta);
        amps[n_pos + i] = prefactor * std::sin(theta);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

std::vector<double> frqi_decode(const StateVector& state, std::size_t half_bits) {
    const std::size_t pos_qubits = 2 * half_bits;
    if (state.n_qubits() != pos_qubits + 1) {
        throw std::invalid_argument("frqi_decode: expected " + std::to_string(pos_qubits + 1) +
                                    " qubits, got " + std::to_string(state.n_qubits()));
    }
    const std::size_t n_pos = std::size_t{1} << pos_qubits;
    std::vector<double> thetas(n_pos);
    for (std::size_t i = 0; i < n_pos; ++i) {
        const double p0 = std::norm(state[i]);
        const double p1 = std::norm(state[n_pos + i]);
        if (p0 + p1 < kZeroMass) {
            throw std::invalid_argument("frqi_decode: position " + std::to_string(i) +
                                        " has zero probability; not an FRQI state");
        }
        thetas[i] = std::atan2(std::sqrt(p1), std::sqrt(p0));
    }
    return thetas;
}

StateVector neqr_encode(const GrayImage& image, std::size_t color_bits) {
    if (color_bits == 0 || color_bits > 8) {
        throw std::invalid_argument("neqr_encode: color_bits must be in [1, 8]");
    }
    const std::size_t pos_qubits = 2 * image.half_bits();
    const std::size_t n_pos = image.size();
    const std::size_t n_colors = std::size_t{1} << color_bits;
    const double amp = 1.0 / static_cast<double>(image.side());
    std::vector<Complex> amps(n_colors * n_pos, Complex{0.0, 0.0});
    for (std::size_t i = 0; i < n_pos; ++i) {
        const std::size_t color = image[i];
        if (color >= n_colors) {
            throw std::invalid_argument("neqr_encode: pixel " + std::to_string(i) + " value " +
                                        std::to_string(color) + " does not fit " +
                                        std::to_string(color_bits) + " color bits");
        }
        amps[(color << pos_qubits) | i] = amp;
    }
    return StateVector::from_amplitudes(std::move(amps));
}

GrayImage neqr_decode(const StateVector& state, std::size_t half_bits, std::size_t color_bits) {
    const std::size_t pos_qubits = 2 * half_bits;
    if (state.n_qubits() != color_bits + pos_qubits) {
        throw std::invalid_argument("neqr_decode: expected " + std::to_string(color_bits + pos_qubits) +
                                    " qubits, got " + std::to_string(state.n_qubits()));
    }
    if (color_bits > 8) throw std::invalid_argument("neqr_decode: color_bits must be <= 8");
    const std::size_t n_pos = std::size_t{1} << pos_qubits;
    const std::size_t n_colors = std::size_t{1} << color_bits;
    std::vector<std::uint8_t> pixels(n_pos);
    for (std::size_t i = 0; i < n_pos; ++i) {
        std::size_t found = 0;
        std::size_t color = 0;
        for (std::size_t c = 0; c < n_colors; ++c) {
            if (std::norm(state[(c << pos_qubits) | i]) > kZeroMass) {
                ++found;
                color = c;
            }
        }
        if (found != 1) {
            throw std::invalid_argument("neqr_decode: position " + std::to_string(i) + " has " +
                                        std::to_string(found) + " nonzero color branches");
        }
        pixels[i] = static_cast<std::uint8_t>(color);
    }
    return GrayImage(std::size_t{1} << half_bits, std::move(pixels));
}

}  // namespace qtl
