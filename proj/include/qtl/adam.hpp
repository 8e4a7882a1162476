#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qtl {

struct AdamHyper {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 0.01;  // coupled L2: added to the gradient before the moments
};

struct AdamState {
    AdamState(std::size_t n_params, AdamHyper hyper);

    std::size_t step = 0;
    std::vector<double> m;
    std::vector<double> v;
    AdamHyper hyper;
};

/// One bias-corrected Adam update of `params` in place. Throws
/// std::invalid_argument on shape mismatch and NumericalError on non-finite gradients.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads);

}  // namespace qtl
