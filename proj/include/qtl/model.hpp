#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qtl/circuit.hpp"
#include "qtl/dense.hpp"
#include "qtl/embeddings.hpp"
#include "qtl/rng.hpp"
#include "qtl/vqc.hpp"

namespace qtl {

enum class HeadMode {
    DressedCircuit,  // dense pre-layer -> angle embedding -> VQC -> dense post-layer
    PureVqc,         // amplitude embedding -> VQC, one measured qubit per class
};

enum class EmbeddingKind { Angle, DenseAngle, Amplitude };

/// Classifier head on top of a frozen feature extractor.
///
/// Dressed circuits map the pre-layer output z to rotation angles
/// tanh(z) * pi/2, feed all n_qubits <Z> values to the post-layer, and apply
/// softmax. Pure-VQC heads use the raw <Z> of qubits 0..n_classes-1 as logits.
struct HybridModel {
    HeadMode mode = HeadMode::DressedCircuit;
    EmbeddingKind embedding = EmbeddingKind::Angle;
    AngleAxis angle_axis = AngleAxis::Y;
    VqcTemplate vqc;
    std::size_t input_dim = 512;
    std::size_t n_classes = 2;
    std::optional<DenseLayer> pre;
    std::optional<DenseLayer> post;
    std::vector<double> qparams;

    /// Throws std::invalid_argument when the mode/embedding/layer shapes disagree.
    void validate() const;

    std::size_t classical_param_count() const noexcept;
    std::size_t quantum_param_count() const noexcept { return qparams.size(); }
    std::size_t param_count() const noexcept { return classical_param_count() + quantum_param_count(); }

    /// Flat order: pre W, pre b, qparams, post W, post b (absent layers skipped).
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);
};

struct DqcShape {
    std::size_t input_dim = 512;
    std::size_t n_qubits = 4;
    std::size_t depth = 1;
    std::size_t n_classes = 2;
    EmbeddingKind embedding = EmbeddingKind::Angle;
    RotationAxis rotation = RotationAxis::Y;
    AngleAxis angle_axis = AngleAxis::Y;
};

/// Dense layers uniform in +-1/sqrt(in_dim); quantum parameters uniform in [-0.1, 0.1].
HybridModel make_dqc(const DqcShape& shape, Rng& rng);

/// Uses amplitude_qubits(input_dim) qubits (9 for 512 features).
HybridModel make_pure_vqc(std::size_t input_dim, std::size_t depth, std::size_t n_classes,
                          RotationAxis rotation, Rng& rng);

/// Width of the pre-layer output for a dressed circuit.
std::size_t dqc_embedding_width(EmbeddingKind embedding, std::size_t n_qubits);

/// Embedding gates (parameters 0..k-1) followed by the VQC layers (parameters k..).
/// Dressed circuits only.
Circuit dqc_circuit(const HybridModel& model);

std::vector<double> model_forward(const HybridModel& model, std::span<const double> features);

struct ModelGradient {
    std::vector<double> pre_weights;
    std::vector<double> pre_bias;
    std::vector<double> qparams;
    std::vector<double> post_weights;
    std::vector<double> post_bias;
    double loss = 0.0;

    /// Same order as HybridModel::flatten().
    std::vector<double> flatten() const;
};

/// Cross-entropy gradient of one labelled sample. Classical layers use
/// analytic backprop; quantum parameters and the embedded angles use the
/// parameter-shift rule with the given shift.
ModelGradient model_backward(const HybridModel& model, std::span<const double> features,
                             std::size_t label, double shift = kParamShift);

}  // namespace qtl
