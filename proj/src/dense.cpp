#include "qtl/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtl {

namespace {

void check_dim(std::size_t got, std::size_t want, const char* what) {
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) +
                                    ", got " + std::to_string(got));
    }
}

}  // namespace

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim)
    : DenseLayer(in_dim, out_dim, std::vector<double>(in_dim * out_dim, 0.0),
                 std::vector<double>(out_dim, 0.0)) {}

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights,
                       std::vector<double> bias)
    : in_dim_(in_dim), out_dim_(out_dim), weights_(std::move(weights)), bias_(std::move(bias)) {
    if (in_dim == 0 || out_dim == 0) throw std::invalid_argument("DenseLayer: zero dimension");
    check_dim(weights_.size(), in_dim * out_dim, "DenseLayer weights");
    check_dim(bias_.size(), out_dim, "DenseLayer bias");
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(weights_.begin(), weights_.end(), finite) ||
        !std::all_of(bias_.begin(), bias_.end(), finite)) {
        throw std::invalid_argument("DenseLayer: non-finite parameter");
    }
}

DenseLayer DenseLayer::uniform_init(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
    DenseLayer layer(in_dim, out_dim);
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    for (double& w : layer.weights_) w = rng.uniform(-bound, bound);
    for (double& b : layer.bias_) b = rng.uniform(-bound, bound);
    return layer;
}

std::vector<double> DenseLayer::forward(std::span<const double> x) const {
    check_dim(x.size(), in_dim_, "DenseLayer::forward");
    std::vector<double> y(bias_);
    for (std::size_t r = 0; r < out_dim_; ++r) {
        const double* row = weights_.data() + r * in_dim_;
        double acc = 0.0;
        for (std::size_t c = 0; c < in_dim_; ++c) acc += row[c] * x[c];
        y[r] += acc;
    }
    return y;
}

std::vector<double> DenseLayer::backward_input(std::span<const double> dy) const {
    check_dim(dy.size(), out_dim_, "DenseLayer::backward_input");
    std::vector<double> dx(in_dim_, 0.0);
    for (std::size_t r = 0; r < out_dim_; ++r) {
        const double* row = weights_.data() + r * in_dim_;
        for (std::size_t c = 0; c < in_dim_; ++c) dx[c] += row[c] * dy[r];
    }
    return dx;
}

std::vector<double> dense_forward(const DenseLayer& layer, std::span<const double> x) {
    return layer.forward(x);
}

std::vector<double> softmax(std::span<const double> logits) {
    if (logits.empty()) throw std::invalid_argument("softmax: empty logits");
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double total = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        total += p[i];
    }
    for (double& v : p) v /= total;
    return p;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) {
        throw std::out_of_range("cross_entropy: label " + std::to_string(label) + " out of range for " +
                                std::to_string(probs.size()) + " classes");
    }
    return -std::log(std::max(probs[label], kProbClamp));
}

std::vector<double> softmax_cross_entropy_grad(std::span<const double> probs, std::size_t label) {
    if (label >= probs.size()) throw std::out_of_range("softmax_cross_entropy_grad: bad label");
    std::vector<double> g(probs.begin(), probs.end());
    g[label] -= 1.0;
    return g;
}

}  // namespace qtl
