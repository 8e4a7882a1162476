#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "qtl/circuit.hpp"
#include "qtl/state_vector.hpp"

namespace qtl {

enum class RotationAxis { X, Y, Z };

/// Layered ansatz: per layer one trainable rotation on every qubit, then a CNOT
/// ring (q, q+1) for q = 0..n-2 followed by (n-1, 0). Repeated `depth` times.
struct VqcTemplate {
    std::size_t n_qubits = 4;
    std::size_t depth = 1;
    RotationAxis axis = RotationAxis::Y;

    std::size_t n_params() const noexcept { return n_qubits * depth; }
};

/// Parameter for layer l, qubit q lives at index l * n_qubits + q.
Circuit build_layers(const VqcTemplate& tmpl);

inline constexpr double kParamShift = std::numbers::pi / 2.0;

/// <Z> of each listed qubit, in list order.
std::vector<double> measure_z(const StateVector& state, std::span<const std::size_t> qubits);

std::vector<double> circuit_expectations(const StateVector& initial, const Circuit& circuit,
                                         std::span<const double> params,
                                         std::span<const std::size_t> measured);

/// Vector-Jacobian product sum_j upstream[j] * d<Z_j>/d params via
/// (f(t + shift) - f(t - shift)) / 2 for every Trainable occurrence. Exact
/// for RX/RY/RZ at the default shift of pi/2. Each occurrence costs two
/// forward passes; the state before the shifted gate is reused.
std::vector<double> param_shift_gradient(const StateVector& initial, const Circuit& circuit,
                                         std::span<const double> params,
                                         std::span<const std::size_t> measured,
                                         std::span<const double> upstream,
                                         double shift = kParamShift);

std::vector<double> vqc_forward(const StateVector& initial, const VqcTemplate& tmpl,
                                std::span<const double> params,
                                std::span<const std::size_t> measured);

/// Runs the (parameter-free) embedding circuit on |0...0> first.
std::vector<double> vqc_forward(const Circuit& embedding, const VqcTemplate& tmpl,
                                std::span<const double> params,
                                std::span<const std::size_t> measured);

std::vector<double> param_shift_grad(const StateVector& initial, const VqcTemplate& tmpl,
                                     std::span<const double> params,
                                     std::span<const std::size_t> measured,
                                     std::span<const double> upstream,
                                     double shift = kParamShift);

std::vector<double> param_shift_grad(const Circuit& embedding, const VqcTemplate& tmpl,
                                     std::span<const double> params,
                                     std::span<const std::size_t> measured,
                                     std::span<const double> upstream,
                                     double shift = kParamShift);

}  // namespace qtl
