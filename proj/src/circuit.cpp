#include "qtl/circuit.hpp"

#include <stdexcept>
#include <string>

namespace qtl {

GateOp GateOp::rotation(GateKind kind, std::size_t target, ParamBinding param) {
    if (!is_rotation(kind)) {
        throw std::invalid_argument("GateOp::rotation: kind is not RX, RY or RZ");
    }
    if (std::holds_alternative<std::monostate>(param)) {
        throw std::invalid_argument("GateOp::rotation: rotation requires an angle binding");
    }
    return {kind, target, std::nullopt, param};
}

Circuit::Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits == 0) throw std::invalid_argument("Circuit: needs at least one qubit");
}

Circuit& Circuit::add(GateOp op) {
    if (op.target >= n_qubits_) {
        throw std::out_of_range("Circuit::add: target " + std::to_string(op.target) +
                                " out of range for " + std::to_string(n_qubits_) + " qubits");
    }
    if (op.kind == GateKind::CNOT) {
        if (!op.control) throw std::invalid_argument("Circuit::add: CNOT without control");
        if (*op.control >= n_qubits_) {
            throw std::out_of_range("Circuit::add: control " + std::to_string(*op.control) +
                                    " out of range for " + std::to_string(n_qubits_) + " qubits");
        }
        if (*op.control == op.target) {
            throw std::invalid_argument("Circuit::add: CNOT control equals target");
        }
    } else if (op.control) {
        throw std::invalid_argument("Circuit::add: only CNOT takes a control qubit");
    }
    if (is_rotation(op.kind)) {
        if (std::holds_alternative<std::monostate>(op.param)) {
            throw std::invalid_argument("Circuit::add: rotation without angle binding");
        }
    } else if (!std::holds_alternative<std::monostate>(op.param)) {
        throw std::invalid_argument("Circuit::add: only RX, RY and RZ take an angle");
    }
    if (auto idx = op.param_index()) {
        n_params_ = std::max(n_params_, *idx + 1);
    }
    ops_.push_back(op);
    return *this;
}

Circuit& Circuit::append(const Circuit& other, std::size_t param_offset) {
    if (other.n_qubits_ != n_qubits_) {
        throw std::invalid_argument("Circuit::append: register width mismatch (" +
                                    std::to_string(n_qubits_) + " vs " +
                                    std::to_string(other.n_qubits_) + ")");
    }
    for (GateOp op : other.ops_) {
        if (auto* t = std::get_if<Trainable>(&op.param)) t->index += param_offset;
        add(op);
    }
    return *this;
}

void Circuit::validate() const {
    std::vector<bool> seen(n_params_, false);
    for (const GateOp& op : ops_) {
        if (auto idx = op.param_index()) seen[*idx] = true;
    }
    for (std::size_t i = 0; i < n_params_; ++i) {
        if (!seen[i]) {
            throw std::invalid_argument("Circuit: parameter index " + std::to_string(i) +
                                        " is never referenced");
        }
    }
}

}  // namespace qtl
