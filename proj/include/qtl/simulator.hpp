#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtl/circuit.hpp"
#include "qtl/state_vector.hpp"

namespace qtl {

// Gate conventions (angles in radians):
//   RX(t) = [[c, -i s], [-i s, c]]   RY(t) = [[c, -s], [s, c]]
//   RZ(t) = diag(e^{-i t/2}, e^{i t/2})   with c = cos(t/2), s = sin(t/2).
// Hence <Z> after RY(t)|0> equals cos t.

/// Angle of a rotation op: its constant, or params[index] for a Trainable binding.
/// Throws std::out_of_range when the index is not covered by params.
double resolve_angle(const GateOp& op, std::span<const double> params);

/// Applies a single-qubit rotation in place by stride iteration over amplitude pairs.
void apply_rotation_inplace(StateVector& state, GateKind kind, std::size_t target, double angle);

void apply_gate_inplace(StateVector& state, const GateOp& op, std::span<const double> params);

/// Value-semantics gate application; `state` is left untouched.
StateVector apply_gate(const StateVector& state, const GateOp& op, std::span<const double> params);

/// Requires circuit.n_qubits() == initial.n_qubits() and params.size() == circuit.n_params().
StateVector run_circuit(const StateVector& initial, const Circuit& circuit,
                        std::span<const double> params);

std::vector<double> probabilities(const StateVector& state);

/// <Z> on `qubit` = P(qubit = 0) - P(qubit = 1).
double expectation_z(const StateVector& state, std::size_t qubit);

double marginal_prob_one(const StateVector& state, std::size_t qubit);

}  // namespace qtl
