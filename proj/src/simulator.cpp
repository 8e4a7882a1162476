#include "qtl/simulator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace qtl {

namespace {

void check_qubit(const StateVector& state, std::size_t qubit, const char* what) {
    if (qubit >= state.n_qubits()) {
        throw std::out_of_range(std::string(what) + ": qubit " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.n_qubits()) +
                                " qubits");
    }
}

// Generic 2x2 kernel: for every index pair (k, k | mask) with the target bit clear.
template <typename Kernel>
void for_each_pair(std::span<Complex> amps, std::size_t mask, Kernel&& kernel) {
    const std::size_t dim = amps.size();
    for (std::size_t block = 0; block < dim; block += 2 * mask) {
        for (std::size_t k = block; k < block + mask; ++k) {
            kernel(amps[k], amps[k + mask]);
        }
    }
}

}  // namespace

double resolve_angle(const GateOp& op, std::span<const double> params) {
    if (const auto* c = std::get_if<Constant>(&op.param)) return c->angle;
    if (const auto* t = std::get_if<Trainable>(&op.param)) {
        if (t->index >= params.size()) {
            throw std::out_of_range("unbound parameter index " + std::to_string(t->index) +
                                    " (have " + std::to_string(params.size()) + " parameters)");
        }
        return params[t->index];
    }
    throw std::invalid_argument("resolve_angle: gate has no angle");
}

void apply_rotation_inplace(StateVector& state, GateKind kind, std::size_t target, double angle) {
    check_qubit(state, target, "apply_rotation");
    const std::size_t mask = qubit_mask(state.n_qubits(), target);
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    auto amps = state.mutable_amplitudes();
    switch (kind) {
        case GateKind::RX: {
            const Complex mis{0.0, -s};
            for_each_pair(amps, mask, [&](Complex& a0, Complex& a1) {
                const Complex b0 = c * a0 + mis * a1;
                const Complex b1 = mis * a0 + c * a1;
                a0 = b0;
                a1 = b1;
            });
            break;
        }
        case GateKind::RY:
            for_each_pair(amps, mask, [&](Complex& a0, Complex& a1) {
                const Complex b0 = c * a0 - s * a1;
                const Complex b1 = s * a0 + c * a1;
                a0 = b0;
                a1 = b1;
            });
            break;
        case GateKind::RZ: {
            const Complex phase0{c, -s};
            const Complex phase1{c, s};
            for_each_pair(amps, mask, [&](Complex& a0, Complex& a1) {
                a0 *= phase0;
                a1 *= phase1;
            });
            break;
        }
        default:
            throw std::invalid_argument("apply_rotation: not a rotation gate");
    }
}

void apply_gate_inplace(StateVector& state, const GateOp& op, std::span<const double> params) {
    check_qubit(state, op.target, "apply_gate");
    if (is_rotation(op.kind)) {
        apply_rotation_inplace(state, op.kind, op.target, resolve_angle(op, params));
        return;
    }
    const std::size_t n = state.n_qubits();
    const std::size_t tmask = qubit_mask(n, op.target);
    auto amps = state.mutable_amplitudes();
    switch (op.kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            for_each_pair(amps, tmask, [&](Complex& a0, Complex& a1) {
                const Complex b0 = r * (a0 + a1);
                const Complex b1 = r * (a0 - a1);
                a0 = b0;
                a1 = b1;
            });
            break;
        }
        case GateKind::X:
            for_each_pair(amps, tmask, [](Complex& a0, Complex& a1) { std::swap(a0, a1); });
            break;
        case GateKind::CNOT: {
            if (!op.control) throw std::invalid_argument("apply_gate: CNOT without control");
            check_qubit(state, *op.control, "apply_gate");
            if (*op.control == op.target) {
                throw std::invalid_argument("apply_gate: CNOT control equals target");
            }
            const std::size_t cmask = qubit_mask(n, *op.control);
            const std::size_t dim = amps.size();
            for (std::size_t k = 0; k < dim; ++k) {
                if ((k & cmask) && !(k & tmask)) std::swap(amps[k], amps[k | tmask]);
            }
            break;
        }
        default:
            break;
    }
}

StateVector apply_gate(const StateVector& state, const GateOp& op, std::span<const double> params) {
    StateVector out = state;
    apply_gate_inplace(out, op, params);
    return out;
}

StateVector run_circuit(const StateVector& initial, const Circuit& circuit,
                        std::span<const double> params) {
    if (circuit.n_qubits() != initial.n_qubits()) {
        throw std::invalid_argument("run_circuit: circuit has " + std::to_string(circuit.n_qubits()) +
                                    " qubits, state has " + std::to_string(initial.n_qubits()));
    }
    if (params.size() != circuit.n_params()) {
        throw std::invalid_argument("run_circuit: expected " + std::to_string(circuit.n_params()) +
                                    " parameters, got " + std::to_string(params.size()));
    }
    StateVector state = initial;
    for (const GateOp& op : circuit.ops()) apply_gate_inplace(state, op, params);
    return state;
}

std::vector<double> probabilities(const StateVector& state) {
    std::vector<double> p;
    p.reserve(state.dim());
    for (const Complex& a : state.amplitudes()) p.push_back(std::norm(a));
    return p;
}

double marginal_prob_one(const StateVector& state, std::size_t qubit) {
    check_qubit(state, qubit, "marginal_prob_one");
    const std::size_t mask = qubit_mask(state.n_qubits(), qubit);
    const auto amps = state.amplitudes();
    double p1 = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        if (k & mask) p1 += std::norm(amps[k]);
    }
    return p1;
}

double expectation_z(const StateVector& state, std::size_t qubit) {
    check_qubit(state, qubit, "expectation_z");
    const std::size_t mask = qubit_mask(state.n_qubits(), qubit);
    const auto amps = state.amplitudes();
    double z = 0.0;
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const double p = std::norm(amps[k]);
        z += (k & mask) ? -p : p;
    }
    return z;
}

}  // namespace qtl
