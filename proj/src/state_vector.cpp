#include "qtl/state_vector.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtl {

namespace {

// 2^n must fit comfortably in memory; 30 qubits is already 16 GiB.
constexpr std::size_t kMaxQubits = 30;

void check_qubit_count(std::size_t n_qubits) {
    if (n_qubits == 0 || n_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: qubit count must be in [1, " +
                                    std::to_string(kMaxQubits) + "], got " +
                                    std::to_string(n_qubits));
    }
}

}  // namespace

StateVector::StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
    check_qubit_count(n_qubits);
    amplitudes_.assign(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::size_t index) {
    StateVector s(n_qubits);
    if (index >= s.dim()) {
        throw std::out_of_range("StateVector::basis: index " + std::to_string(index) +
                                " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    s.amplitudes_[0] = 0.0;
    s.amplitudes_[index] = 1.0;
    return s;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two >= 2, got " +
                                    std::to_string(dim));
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(dim));
    check_qubit_count(n);
    double norm = 0.0;
    for (const Complex& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("StateVector: non-finite amplitude");
        }
        norm += std::norm(a);
    }
    if (std::abs(norm - 1.0) > kNormTolerance) {
        throw std::invalid_argument("StateVector: amplitudes not normalized (sum |a|^2 = " +
                                    std::to_string(norm) + ")");
    }
    return StateVector(n, std::move(amplitudes));
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const Complex& a : amplitudes_) total += std::norm(a);
    return total;
}

}  // namespace qtl
