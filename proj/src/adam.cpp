#include "qtl/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

AdamState::AdamState(std::size_t n_params, AdamHyper h) : m(n_params, 0.0), v(n_params, 0.0), hyper(h) {}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads) {
    if (params.size() != state.m.size() || grads.size() != state.m.size()) {
        throw std::invalid_argument("adam_step: state has " + std::to_string(state.m.size()) +
                                    " slots, params " + std::to_string(params.size()) + ", grads " +
                                    std::to_string(grads.size()));
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            throw NumericalError("adam_step: non-finite gradient at index " + std::to_string(i));
        }
    }
    const AdamHyper& h = state.hyper;
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(h.beta1, t);
    const double c2 = 1.0 - std::pow(h.beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i] + h.weight_decay * params[i];
        state.m[i] = h.beta1 * state.m[i] + (1.0 - h.beta1) * g;
        state.v[i] = h.beta2 * state.v[i] + (1.0 - h.beta2) * g * g;
        const double m_hat = state.m[i] / c1;
        const double v_hat = state.v[i] / c2;
        params[i] -= h.lr * m_hat / (std::sqrt(v_hat) + h.eps);
    }
}

}  // namespace qtl
