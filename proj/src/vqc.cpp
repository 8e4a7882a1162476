#include "qtl/vqc.hpp"

#include <stdexcept>
#include <string>

#include "qtl/simulator.hpp"

namespace qtl {

namespace {

GateKind axis_gate(RotationAxis axis) {
    switch (axis) {
        case RotationAxis::X: return GateKind::RX;
        case RotationAxis::Z: return GateKind::RZ;
        case RotationAxis::Y: break;
    }
    return GateKind::RY;
}

void check_measured(std::size_t n_qubits, std::span<const std::size_t> measured) {
    for (std::size_t q : measured) {
        if (q >= n_qubits) {
            throw std::out_of_range("measured qubit " + std::to_string(q) + " out of range for " +
                                    std::to_string(n_qubits) + " qubits");
        }
    }
}

void apply_resolved(StateVector& state, const GateOp& op, double angle) {
    if (is_rotation(op.kind)) {
        apply_rotation_inplace(state, op.kind, op.target, angle);
    } else {
        apply_gate_inplace(state, op, {});
    }
}

StateVector embed_on_zero(const Circuit& embedding) {
    if (embedding.n_params() != 0) {
        throw std::invalid_argument("embedding circuit must not have trainable parameters");
    }
    return run_circuit(StateVector(embedding.n_qubits()), embedding, {});
}

Circuit checked_layers(const VqcTemplate& tmpl, std::size_t n_state_qubits) {
    if (tmpl.n_qubits != n_state_qubits) {
        throw std::invalid_argument("VQC template has " + std::to_string(tmpl.n_qubits) +
                                    " qubits, embedded state has " + std::to_string(n_state_qubits));
    }
    return build_layers(tmpl);
}

}  // namespace

Circuit build_layers(const VqcTemplate& tmpl) {
    if (tmpl.depth < 1) throw std::invalid_argument("build_layers: depth must be >= 1");
    const std::size_t n = tmpl.n_qubits;
    const GateKind rot = axis_gate(tmpl.axis);
    Circuit c(n);
    for (std::size_t layer = 0; layer < tmpl.depth; ++layer) {
        for (std::size_t q = 0; q < n; ++q) c.add(GateOp::rotation(rot, q, Trainable{layer * n + q}));
        if (n >= 2) {
            for (std::size_t q = 0; q + 1 < n; ++q) c.add(GateOp::cnot(q, q + 1));
            // For two qubits the wraparound pair is (1, 0), a distinct gate from (0, 1).
            c.add(GateOp::cnot(n - 1, 0));
        }
    }
    return c;
}

std::vector<double> measure_z(const StateVector& state, std::span<const std::size_t> qubits) {
    std::vector<double> z;
    z.reserve(qubits.size());
    for (std::size_t q : qubits) z.push_back(expectation_z(state, q));
    return z;
}

std::vector<double> circuit_expectations(const StateVector& initial, const Circuit& circuit,
                                         std::span<const double> params,
                                         std::span<const std::size_t> measured) {
    check_measured(circuit.n_qubits(), measured);
    return measure_z(run_circuit(initial, circuit, params), measured);
}

std::vector<double> param_shift_gradient(const StateVector& initial, const Circuit& circuit,
                                         std::span<const double> params,
                                         std::span<const std::size_t> measured,
                                         std::span<const double> upstream, double shift) {
    if (circuit.n_qubits() != initial.n_qubits()) {
        throw std::invalid_argument("param_shift_gradient: circuit/state qubit mismatch");
    }
    if (params.size() != circuit.n_params()) {
        throw std::invalid_argument("param_shift_gradient: expected " +
                                    std::to_string(circuit.n_params()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    if (upstream.size() != measured.size()) {
        throw std::invalid_argument("param_shift_gradient: upstream has " +
                                    std::to_string(upstream.size()) + " entries for " +
                                    std::to_string(measured.size()) + " measured qubits");
    }
    check_measured(circuit.n_qubits(), measured);

    const auto& ops = circuit.ops();
    std::vector<double> angles(ops.size(), 0.0);
    for (std::size_t j = 0; j < ops.size(); ++j) {
        if (is_rotation(ops[j].kind)) angles[j] = resolve_angle(ops[j], params);
    }

    auto finish_from = [&](StateVector state, std::size_t j, double angle) {
        apply_resolved(state, ops[j], angle);
        for (std::size_t k = j + 1; k < ops.size(); ++k) apply_resolved(state, ops[k], angles[k]);
        double acc = 0.0;
        for (std::size_t m = 0; m < measured.size(); ++m) {
            acc += upstream[m] * expectation_z(state, measured[m]);
        }
        return acc;
    };

    std::vector<double> grad(params.size(), 0.0);
    StateVector prefix = initial;
    for (std::size_t j = 0; j < ops.size(); ++j) {
        if (auto idx = ops[j].param_index()) {
            const double plus = finish_from(prefix, j, angles[j] + shift);
            const double minus = finish_from(prefix, j, angles[j] - shift);
            grad[*idx] += 0.5 * (plus - minus);
        }
        apply_resolved(prefix, ops[j], angles[j]);
    }
    return grad;
}

std::vector<double> vqc_forward(const StateVector& initial, const VqcTemplate& tmpl,
                                std::span<const double> params,
                                std::span<const std::size_t> measured) {
    return circuit_expectations(initial, checked_layers(tmpl, initial.n_qubits()), params, measured);
}

std::vector<double> vqc_forward(const Circuit& embedding, const VqcTemplate& tmpl,
                                std::span<const double> params,
                                std::span<const std::size_t> measured) {
    return vqc_forward(embed_on_zero(embedding), tmpl, params, measured);
}

std::vector<double> param_shift_grad(const StateVector& initial, const VqcTemplate& tmpl,
                                     std::span<const double> params,
                                     std::span<const std::size_t> measured,
                                     std::span<const double> upstream, double shift) {
    return param_shift_gradient(initial, checked_layers(tmpl, initial.n_qubits()), params, measured,
                                upstream, shift);
}

std::vector<double> param_shift_grad(const Circuit& embedding, const VqcTemplate& tmpl,
                                     std::span<const double> params,
                                     std::span<const std::size_t> measured,
                                     std::span<const double> upstream, double shift) {
    return param_shift_grad(embed_on_zero(embedding), tmpl, params, measured, upstream, shift);
}

}  // namespace qtl
