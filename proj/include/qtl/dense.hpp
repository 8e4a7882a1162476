#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtl/rng.hpp"

namespace qtl {

/// Fully connected affine map y = W x + b with W stored row-major (out_dim x in_dim).
class DenseLayer {
  public:
    DenseLayer(std::size_t in_dim, std::size_t out_dim);
    DenseLayer(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights,
               std::vector<double> bias);

    /// Weights and bias uniform in +-1/sqrt(in_dim).
    static DenseLayer uniform_init(std::size_t in_dim, std::size_t out_dim, Rng& rng);

    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t out_dim() const noexcept { return out_dim_; }
    std::size_t param_count() const noexcept { return weights_.size() + bias_.size(); }

    const std::vector<double>& weights() const noexcept { return weights_; }
    const std::vector<double>& bias() const noexcept { return bias_; }
    std::vector<double>& weights() noexcept { return weights_; }
    std::vector<double>& bias() noexcept { return bias_; }

    double weight(std::size_t row, std::size_t col) const { return weights_[row * in_dim_ + col]; }

    std::vector<double> forward(std::span<const double> x) const;

    /// W^T dy.
    std::vector<double> backward_input(std::span<const double> dy) const;

  private:
    std::size_t in_dim_;
    std::size_t out_dim_;
    std::vector<double> weights_;
    std::vector<double> bias_;
};

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x);

/// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

inline constexpr double kProbClamp = 1e-12;

/// -ln(max(probs[label], 1e-12)). Throws std::out_of_range for a bad label.
double cross_entropy(std::span<const double> probs, std::size_t label);

/// d cross_entropy(softmax(z), label) / dz = probs - onehot(label).
std::vector<double> softmax_cross_entropy_grad(std::span<const double> probs, std::size_t label);

}  // namespace qtl
