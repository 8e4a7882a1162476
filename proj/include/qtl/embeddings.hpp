#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qtl/circuit.hpp"
#include "qtl/state_vector.hpp"

namespace qtl {

using FeatureVector = std::vector<double>;

/// Square grayscale image with power-of-two side, stored row-major so that
/// pixel index i is the value of the position register.
class GrayImage {
  public:
    GrayImage(std::size_t side, std::vector<std::uint8_t> pixels);

    std::size_t side() const noexcept { return side_; }
    /// log2(side); the position register holds 2 * half_bits() qubits.
    std::size_t half_bits() const noexcept { return half_bits_; }
    std::size_t size() const noexcept { return pixels_.size(); }
    const std::vector<std::uint8_t>& pixels() const noexcept { return pixels_; }
    std::uint8_t operator[](std::size_t i) const { return pixels_[i]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

  private:
    std::size_t side_;
    std::size_t half_bits_;
    std::vector<std::uint8_t> pixels_;
};

enum class AngleAxis { X, Y };

/// One constant RX or RY per qubit; features are used as final angles.
Circuit angle_embed(std::span<const double> features, std::size_t n_qubits, AngleAxis axis);

/// RX(features[2q]) then RY(features[2q + 1]) on every qubit q.
Circuit dense_angle_embed(std::span<const double> features, std::size_t n_qubits);

// Parameterised forms of the two angle embeddings: the gate angles are
// Trainable(0..k) in feature order, so gradients with respect to the embedded
// values can be taken alongside the variational parameters.
Circuit angle_embed_template(std::size_t n_qubits, AngleAxis axis);
Circuit dense_angle_embed_template(std::size_t n_qubits);

/// Qubits needed to amplitude-embed `n_features` values: ceil(log2 n), at least 1.
std::size_t amplitude_qubits(std::size_t n_features);

/// Zero-pads to the next power of two, then L2-normalizes into the amplitudes.
/// Throws std::invalid_argument for all-zero or non-finite input.
StateVector amplitude_embed(std::span<const double> features);

/// Grayscale-to-angle map: 0 (black) -> 0, 255 (white) -> pi/2.
double pixel_angle(std::uint8_t pixel) noexcept;

/// FRQI state on 2n + 1 qubits; qubit 0 is the color qubit, qubits 1..2n the position.
StateVector frqi_encode(const GrayImage& image);

/// Recovers per-position angles theta_i in [0, pi/2] from an FRQI state with
/// half_bits = n. Throws std::invalid_argument if some position has zero mass.
std::vector<double> frqi_decode(const StateVector& state, std::size_t half_bits);

/// NEQR state on color_bits + 2n qubits; the color register occupies the
/// leading (most significant) qubits.
StateVector neqr_encode(const GrayImage& image, std::size_t color_bits = 8);

/// Exact pixel recovery. Throws std::invalid_argument unless each position has
/// exactly one nonzero color branch.
GrayImage neqr_decode(const StateVector& state, std::size_t half_bits, std::size_t color_bits = 8);

}  // namespace qtl
