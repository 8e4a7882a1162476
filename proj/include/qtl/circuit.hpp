#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

namespace qtl {

enum class GateKind { RX, RY, RZ, H, X, CNOT };

constexpr bool is_rotation(GateKind k) noexcept {
    return k == GateKind::RX || k == GateKind::RY || k == GateKind::RZ;
}

/// Fixed rotation angle in radians.
struct Constant {
    double angle;
};

/// Angle read from the circuit parameter vector at `index`.
struct Trainable {
    std::size_t index;
};

/// Non-rotation gates carry std::monostate.
using ParamBinding = std::variant<std::monostate, Constant, Trainable>;

struct GateOp {
    GateKind kind;
    std::size_t target;
    std::optional<std::size_t> control;
    ParamBinding param;

    static GateOp rotation(GateKind kind, std::size_t target, ParamBinding param);
    static GateOp rx(std::size_t target, double angle) { return rotation(GateKind::RX, target, Constant{angle}); }
    static GateOp ry(std::size_t target, double angle) { return rotation(GateKind::RY, target, Constant{angle}); }
    static GateOp rz(std::size_t target, double angle) { return rotation(GateKind::RZ, target, Constant{angle}); }
    static GateOp h(std::size_t target) { return {GateKind::H, target, std::nullopt, std::monostate{}}; }
    static GateOp x(std::size_t target) { return {GateKind::X, target, std::nullopt, std::monostate{}}; }
    static GateOp cnot(std::size_t control, std::size_t target) {
        return {GateKind::CNOT, target, control, std::monostate{}};
    }

    std::optional<std::size_t> param_index() const noexcept {
        if (const auto* t = std::get_if<Trainable>(&param)) return t->index;
        return std::nullopt;
    }
};

/// Ordered gate program on a fixed register. n_params is one past the largest
/// Trainable index seen; validate() additionally requires every index in
/// [0, n_params) to be referenced.
class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits);

    /// Throws std::out_of_range for a bad target/control and
    /// std::invalid_argument for a malformed op.
    Circuit& add(GateOp op);

    /// Appends `other` (same register width), shifting its Trainable indices by param_offset.
    Circuit& append(const Circuit& other, std::size_t param_offset = 0);

    void validate() const;

    std::size_t n_qubits() const noexcept { return n_qubits_; }
    std::size_t n_params() const noexcept { return n_params_; }
    const std::vector<GateOp>& ops() const noexcept { return ops_; }
    bool empty() const noexcept { return ops_.empty(); }

  private:
    std::size_t n_qubits_;
    std::size_t n_params_ = 0;
    std::vector<GateOp> ops_;
};

}  // namespace qtl
