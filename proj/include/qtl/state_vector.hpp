#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qtl {

using Complex = std::complex<double>;

/// Tolerance on sum |a_k|^2 = 1 enforced when a state is built from raw amplitudes.
inline constexpr double kNormTolerance = 1e-10;

/// Pure n-qubit state over 2^n computational basis states.
///
/// Bit ordering is big-endian: qubit 0 is the most significant bit of the
/// basis index, so for n = 3 the index of |q0 q1 q2> is 4*q0 + 2*q1 + q2.
class StateVector {
  public:
    /// |0...0> on n_qubits (n_qubits >= 1).
    explicit StateVector(std::size_t n_qubits);

    static StateVector basis(std::size_t n_qubits, std::size_t index);

    /// Takes ownership of amplitudes; length must be a power of two >= 2 and the
    /// vector normalized within kNormTolerance.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t dim() const noexcept { return amplitudes_.size(); }

    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t k) const { return amplitudes_[k]; }

    double norm_squared() const noexcept;

    /// Raw access for in-place gate kernels. Callers must keep the state normalized.
    std::span<Complex> mutable_amplitudes() noexcept { return amplitudes_; }

  private:
    StateVector(std::size_t n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    std::size_t n_qubits_;
    std::vector<Complex> amplitudes_;
};

/// Bit mask of a qubit within a basis index under the big-endian convention.
constexpr std::size_t qubit_mask(std::size_t n_qubits, std::size_t qubit) noexcept {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

}  // namespace qtl
