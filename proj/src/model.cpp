#include "qtl/model.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "qtl/simulator.hpp"

namespace qtl {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void fail(const std::string& msg) { throw std::invalid_argument("HybridModel: " + msg); }

void check_features(const HybridModel& m, std::span<const double> features) {
    if (features.size() != m.input_dim) {
        throw std::invalid_argument("model: expected " + std::to_string(m.input_dim) +
                                    " features, got " + std::to_string(features.size()));
    }
}

std::vector<std::size_t> first_qubits(std::size_t count) {
    std::vector<std::size_t> q(count);
    std::iota(q.begin(), q.end(), std::size_t{0});
    return q;
}

void append(std::vector<double>& out, const std::vector<double>& v) {
    out.insert(out.end(), v.begin(), v.end());
}

// Forward intermediates a dressed-circuit backward pass needs.
struct DqcTrace {
    std::vector<double> pre_out;
    std::vector<double> circuit_params;  // angles followed by qparams
    std::vector<double> expvals;
    std::vector<double> probs;
};

DqcTrace dqc_trace(const HybridModel& m, const Circuit& circuit, std::span<const double> features) {
    DqcTrace t;
    t.pre_out = m.pre->forward(features);
    t.circuit_params.reserve(t.pre_out.size() + m.qparams.size());
    for (double z : t.pre_out) t.circuit_params.push_back(std::tanh(z) * kHalfPi);
    append(t.circuit_params, m.qparams);
    const auto all = first_qubits(m.vqc.n_qubits);
    t.expvals = circuit_expectations(StateVector(m.vqc.n_qubits), circuit, t.circuit_params, all);
    t.probs = softmax(m.post->forward(t.expvals));
    return t;
}

}  // namespace

std::size_t dqc_embedding_width(EmbeddingKind embedding, std::size_t n_qubits) {
    switch (embedding) {
        case EmbeddingKind::Angle: return n_qubits;
        case EmbeddingKind::DenseAngle: return 2 * n_qubits;
        case EmbeddingKind::Amplitude: break;
    }
    throw std::invalid_argument("dressed circuits support angle and dense-angle embeddings only");
}

void HybridModel::validate() const {
    if (vqc.n_qubits == 0 || vqc.depth == 0) fail("VQC needs at least one qubit and one layer");
    if (qparams.size() != vqc.n_params()) {
        fail("expected " + std::to_string(vqc.n_params()) + " quantum parameters, got " +
             std::to_string(qparams.size()));
    }
    if (n_classes < 2) fail("need at least two classes");
    if (mode == HeadMode::DressedCircuit) {
        if (embedding == EmbeddingKind::Amplitude) fail("dressed circuit cannot use amplitude embedding");
        if (!pre || !post) fail("dressed circuit requires pre and post layers");
        const std::size_t width = dqc_embedding_width(embedding, vqc.n_qubits);
        if (pre->in_dim() != input_dim || pre->out_dim() != width) {
            fail("pre-layer must map " + std::to_string(input_dim) + " -> " + std::to_string(width));
        }
        if (post->in_dim() != vqc.n_qubits || post->out_dim() != n_classes) {
            fail("post-layer must map " + std::to_string(vqc.n_qubits) + " -> " +
                 std::to_string(n_classes));
        }
    } else {
        if (embedding != EmbeddingKind::Amplitude) fail("pure VQC requires amplitude embedding");
        if (pre || post) fail("pure VQC has no classical layers");
        if (vqc.n_qubits != amplitude_qubits(input_dim)) {
            fail("pure VQC on " + std::to_string(input_dim) + " features needs " +
                 std::to_string(amplitude_qubits(input_dim)) + " qubits");
        }
        if (n_classes > vqc.n_qubits) fail("pure VQC measures one qubit per class; too many classes");
    }
    for (double p : qparams) {
        if (!std::isfinite(p)) fail("non-finite quantum parameter");
    }
}

std::size_t HybridModel::classical_param_count() const noexcept {
    std::size_t n = 0;
    if (pre) n += pre->param_count();
    if (post) n += post->param_count();
    return n;
}

std::vector<double> HybridModel::flatten() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    if (pre) {
        append(flat, pre->weights());
        append(flat, pre->bias());
    }
    append(flat, qparams);
    if (post) {
        append(flat, post->weights());
        append(flat, post->bias());
    }
    return flat;
}

void HybridModel::assign(std::span<const double> flat) {
    if (flat.size() != param_count()) {
        throw std::invalid_argument("HybridModel::assign: expected " + std::to_string(param_count()) +
                                    " values, got " + std::to_string(flat.size()));
    }
    auto it = flat.begin();
    auto take = [&](std::vector<double>& dst) {
        std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
        it += static_cast<std::ptrdiff_t>(dst.size());
    };
    if (pre) {
        take(pre->weights());
        take(pre->bias());
    }
    take(qparams);
    if (post) {
        take(post->weights());
        take(post->bias());
    }
}

HybridModel make_dqc(const DqcShape& shape, Rng& rng) {
    HybridModel m;
    m.mode = HeadMode::DressedCircuit;
    m.embedding = shape.embedding;
    m.angle_axis = shape.angle_axis;
    m.vqc = VqcTemplate{shape.n_qubits, shape.depth, shape.rotation};
    m.input_dim = shape.input_dim;
    m.n_classes = shape.n_classes;
    m.pre = DenseLayer::uniform_init(shape.input_dim, dqc_embedding_width(shape.embedding, shape.n_qubits), rng);
    m.qparams.resize(m.vqc.n_params());
    for (double& p : m.qparams) p = rng.uniform(-0.1, 0.1);
    m.post = DenseLayer::uniform_init(shape.n_qubits, shape.n_classes, rng);
    m.validate();
    return m;
}

HybridModel make_pure_vqc(std::size_t input_dim, std::size_t depth, std::size_t n_classes,
                          RotationAxis rotation, Rng& rng) {
    HybridModel m;
    m.mode = HeadMode::PureVqc;
    m.embedding = EmbeddingKind::Amplitude;
    m.vqc = VqcTemplate{amplitude_qubits(input_dim), depth, rotation};
    m.input_dim = input_dim;
    m.n_classes = n_classes;
    m.qparams.resize(m.vqc.n_params());
    for (double& p : m.qparams) p = rng.uniform(-0.1, 0.1);
    m.validate();
    return m;
}

Circuit dqc_circuit(const HybridModel& model) {
    if (model.mode != HeadMode::DressedCircuit) {
        throw std::invalid_argument("dqc_circuit: not a dressed-circuit model");
    }
    const std::size_t n = model.vqc.n_qubits;
    Circuit c = model.embedding == EmbeddingKind::DenseAngle ? dense_angle_embed_template(n)
                                                             : angle_embed_template(n, model.angle_axis);
    const std::size_t offset = c.n_params();
    c.append(build_layers(model.vqc), offset);
    return c;
}

std::vector<double> model_forward(const HybridModel& model, std::span<const double> features) {
    check_features(model, features);
    if (model.mode == HeadMode::DressedCircuit) {
        return dqc_trace(model, dqc_circuit(model), features).probs;
    }
    const auto measured = first_qubits(model.n_classes);
    return softmax(vqc_forward(amplitude_embed(features), model.vqc, model.qparams, measured));
}

std::vector<double> ModelGradient::flatten() const {
    std::vector<double> flat;
    for (const auto* part : {&pre_weights, &pre_bias, &qparams, &post_weights, &post_bias}) append(flat, *part);
    return flat;
}

ModelGradient model_backward(const HybridModel& model, std::span<const double> features,
                             std::size_t label, double shift) {
    check_features(model, features);
    if (label >= model.n_classes) {
        throw std::out_of_range("model_backward: label " + std::to_string(label) + " out of range");
    }
    ModelGradient g;

    if (model.mode == HeadMode::PureVqc) {
        const auto measured = first_qubits(model.n_classes);
        const StateVector embedded = amplitude_embed(features);
        const auto probs = softmax(vqc_forward(embedded, model.vqc, model.qparams, measured));
        g.loss = cross_entropy(probs, label);
        const auto dlogits = softmax_cross_entropy_grad(probs, label);
        g.qparams = param_shift_grad(embedded, model.vqc, model.qparams, measured, dlogits, shift);
        return g;
    }

    const Circuit circuit = dqc_circuit(model);
    const DqcTrace t = dqc_trace(model, circuit, features);
    g.loss = cross_entropy(t.probs, label);
    const auto dlogits = softmax_cross_entropy_grad(t.probs, label);

    const DenseLayer& post = *model.post;
    g.post_weights.resize(post.out_dim() * post.in_dim());
    for (std::size_t r = 0; r < post.out_dim(); ++r) {
        for (std::size_t c = 0; c < post.in_dim(); ++c) g.post_weights[r * post.in_dim() + c] = dlogits[r] * t.expvals[c];
    }
    g.post_bias = dlogits;
    const auto dexp = post.backward_input(dlogits);

    const auto all = first_qubits(model.vqc.n_qubits);
    const auto dcircuit = param_shift_gradient(StateVector(model.vqc.n_qubits), circuit, t.circuit_params,
                                               all, dexp, shift);
    const std::size_t width = t.pre_out.size();
    g.qparams.assign(dcircuit.begin() + static_cast<std::ptrdiff_t>(width), dcircuit.end());

    std::vector<double> dz(width);
    for (std::size_t i = 0; i < width; ++i) {
        const double th = std::tanh(t.pre_out[i]);
        dz[i] = dcircuit[i] * kHalfPi * (1.0 - th * th);
    }
    const DenseLayer& pre = *model.pre;
    g.pre_weights.resize(pre.out_dim() * pre.in_dim());
    for (std::size_t r = 0; r < pre.out_dim(); ++r) {
        double* row = g.pre_weights.data() + r * pre.in_dim();
        for (std::size_t c = 0; c < pre.in_dim(); ++c) row[c] = dz[r] * features[c];
    }
    g.pre_bias = dz;
    return g;
}

}  // namespace qtl
