#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle.hpp"
#include "qtl/adam.hpp"
#include "qtl/dataset.hpp"
#include "qtl/dense.hpp"
#include "qtl/errors.hpp"
#include "qtl/model.hpp"
#include "qtl/rng.hpp"
#include "qtl/train.hpp"

using namespace qtl;

namespace {

double sample_loss(const HybridModel& m, const std::vector<double>& x, std::size_t label) {
    return cross_entropy(model_forward(m, x), label);
}

std::vector<double> random_features(std::size_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    std::vector<double> x(n);
    for (double& v : x) v = nd(gen);
    return x;
}

bool close_rel(double a, double n) {
    return std::abs(a - n) <= std::max(1e-5 * std::max(std::abs(a), std::abs(n)), 1e-7);
}

void expect_fd_match(HybridModel model, const std::vector<double>& x, std::size_t label) {
    const auto grad = model_backward(model, x, label).flatten();
    const auto f = [&](const std::vector<double>& flat) {
        HybridModel m = model;
        m.assign(flat);
        return sample_loss(m, x, label);
    };
    const auto fd = oracle::finite_diff(f, model.flatten(), 1e-5);
    ASSERT_EQ(grad.size(), fd.size());
    for (std::size_t k = 0; k < fd.size(); ++k) EXPECT_TRUE(close_rel(grad[k], fd[k])) << k << ": " << grad[k] << " vs " << fd[k];
}

// Constant-output model: zero pre-layer, zero qparams, post-layer fixed to `bias`.
HybridModel constant_dqc(std::size_t input_dim, std::vector<double> bias) {
    Rng rng(1);
    HybridModel m = make_dqc({input_dim, 2, 1, bias.size()}, rng);
    std::fill(m.pre->weights().begin(), m.pre->weights().end(), 0.0);
    std::fill(m.pre->bias().begin(), m.pre->bias().end(), 0.0);
    std::fill(m.qparams.begin(), m.qparams.end(), 0.0);
    std::fill(m.post->weights().begin(), m.post->weights().end(), 0.0);
    m.post->bias() = std::move(bias);
    return m;
}

Dataset tiny_dataset(const std::vector<std::vector<double>>& xs, const std::vector<std::size_t>& labels) {
    Dataset d;
    d.class_names = {"a", "b"};
    for (std::size_t i = 0; i < xs.size(); ++i) d.samples.push_back({xs[i], labels[i], "g" + std::to_string(i)});
    return d;
}

}  // namespace

TEST(Dense, Examples) {
    const DenseLayer id(2, 2, {1, 0, 0, 1}, {0, 0});
    const std::vector<double> x2{3.5, -2.0};
    EXPECT_EQ(dense_forward(id, x2), x2);
    const DenseLayer zero(2, 2, {0, 0, 0, 0}, {4, 5});
    EXPECT_EQ(dense_forward(zero, x2), (std::vector<double>{4, 5}));
    const DenseLayer l(3, 2, {1, 0, 2, 0, 1, 0}, {1, -1});
    const std::vector<double> x{1, 2, 3};
    EXPECT_EQ(dense_forward(l, x), (std::vector<double>{8, 1}));
    EXPECT_THROW(dense_forward(l, x2), std::invalid_argument);
    EXPECT_THROW(DenseLayer(3, 2, {1, 2}, {0, 0}), std::invalid_argument);
}

TEST(Dense, BackwardIsTranspose) {
    const DenseLayer l(3, 2, {1, 0, 2, 0, 1, 0}, {1, -1});
    const std::vector<double> dy{1, 10};
    EXPECT_EQ(l.backward_input(dy), (std::vector<double>{1, 10, 2}));
}

TEST(Dense, UniformInitBounds) {
    Rng rng(4);
    const auto l = DenseLayer::uniform_init(512, 8, rng);
    const double bound = 1.0 / std::sqrt(512.0);
    for (double w : l.weights()) EXPECT_LE(std::abs(w), bound);
    for (double b : l.bias()) EXPECT_LE(std::abs(b), bound);
    EXPECT_EQ(l.param_count(), 512u * 8 + 8);
}

TEST(Softmax, Examples) {
    const auto a = softmax(std::vector<double>{0, 0});
    EXPECT_DOUBLE_EQ(a[0], 0.5);
    const auto b = softmax(std::vector<double>{std::log(2.0), 0});
    EXPECT_NEAR(b[0], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(b[1], 1.0 / 3.0, 1e-12);
    const auto c = softmax(std::vector<double>{1000, 0});
    EXPECT_TRUE(std::isfinite(c[0]) && std::isfinite(c[1]));
    EXPECT_NEAR(c[0], 1.0, 1e-15);
    EXPECT_NEAR(c[1], 0.0, 1e-15);
    std::mt19937_64 gen(2);
    for (int t = 0; t < 20; ++t) {
        const auto p = softmax(random_features(5, gen));
        double s = 0.0;
        for (double v : p) {
            EXPECT_GT(v, 0.0);
            s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(CrossEntropy, Examples) {
    EXPECT_NEAR(cross_entropy(std::vector<double>{1, 0}, 0), 0.0, 1e-9);
    EXPECT_NEAR(cross_entropy(std::vector<double>{0.5, 0.5}, 1), 0.693147, 1e-6);
    EXPECT_NEAR(cross_entropy(std::vector<double>{1, 0}, 1), -std::log(kProbClamp), 1e-9);
    EXPECT_THROW(cross_entropy(std::vector<double>{0.5, 0.5}, 2), std::out_of_range);
}

TEST(CrossEntropy, LogitGradientMatchesFiniteDifferences) {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 20; ++t) {
        const auto z = random_features(4, gen);
        const std::size_t label = static_cast<std::size_t>(t % 4);
        const auto g = softmax_cross_entropy_grad(softmax(z), label);
        const auto fd = oracle::finite_diff([&](const std::vector<double>& v) { return cross_entropy(softmax(v), label); }, z, 1e-5);
        for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(g[k], fd[k], 1e-7);
    }
}

TEST(Model, ShapesAndCounts) {
    Rng rng(3);
    for (std::size_t depth : {1u, 2u, 4u}) {
        const auto m = make_dqc({512, 8, depth, 3}, rng);
        EXPECT_EQ(m.classical_param_count(), 512u * 8 + 8 + 8 * 3 + 3);
        EXPECT_EQ(m.classical_param_count(), 4131u);
        EXPECT_EQ(m.quantum_param_count(), 8 * depth);
        EXPECT_GT(m.classical_param_count(), m.quantum_param_count());
        for (std::size_t n : {4u, 8u}) {
            for (std::size_t c : {2u, 3u}) {
                for (EmbeddingKind e : {EmbeddingKind::Angle, EmbeddingKind::DenseAngle}) {
                    DqcShape s{512, n, depth, c, e};
                    const auto d = make_dqc(s, rng);
                    const std::size_t w = e == EmbeddingKind::Angle ? n : 2 * n;
                    EXPECT_EQ(d.pre->out_dim(), w);
                    EXPECT_EQ(d.post->in_dim(), n);
                    EXPECT_EQ(d.classical_param_count(), 512 * w + w + n * c + c);
                    EXPECT_GT(d.classical_param_count(), d.quantum_param_count());
                }
            }
        }
        const auto p = make_pure_vqc(512, depth, 3, RotationAxis::Y, rng);
        EXPECT_EQ(p.vqc.n_qubits, 9u);
        EXPECT_EQ(p.quantum_param_count(), 9 * depth);
        EXPECT_EQ(p.classical_param_count(), 0u);
        EXPECT_FALSE(p.pre.has_value());
    }
}

TEST(Model, QuantumInitNearIdentity) {
    Rng rng(11);
    const auto m = make_dqc({512, 4, 4, 2}, rng);
    for (double q : m.qparams) EXPECT_LE(std::abs(q), 0.1);
}

TEST(Model, ValidateRejectsMismatch) {
    Rng rng(1);
    auto m = make_dqc({16, 4, 1, 2}, rng);
    m.post = DenseLayer(3, 2);
    EXPECT_THROW(m.validate(), std::invalid_argument);
    EXPECT_THROW(make_pure_vqc(512, 1, 10, RotationAxis::Y, rng), std::invalid_argument);
    const auto good = make_dqc({16, 4, 1, 2}, rng);
    EXPECT_THROW(model_forward(good, std::vector<double>(15, 0.0)), std::invalid_argument);
}

TEST(Model, FlattenAssignRoundTrip) {
    Rng rng(5);
    auto m = make_dqc({8, 2, 2, 3, EmbeddingKind::DenseAngle}, rng);
    auto flat = m.flatten();
    ASSERT_EQ(flat.size(), m.param_count());
    EXPECT_EQ(flat.front(), m.pre->weights().front());
    EXPECT_EQ(flat[8 * 4 + 4], m.qparams[0]);
    for (double& v : flat) v += 1.0;
    m.assign(flat);
    EXPECT_EQ(m.flatten(), flat);
    EXPECT_THROW(m.assign(std::vector<double>(3)), std::invalid_argument);
}

TEST(Model, PureVqcUniformFeaturesGiveUniformOutput) {
    Rng rng(1);
    auto m = make_pure_vqc(512, 2, 3, RotationAxis::Y, rng);
    std::fill(m.qparams.begin(), m.qparams.end(), 0.0);
    const auto p = model_forward(m, std::vector<double>(512, 1.0));
    // Uniform amplitudes are a product of |+> states: every <Z> is 0.
    for (double v : p) EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);
}

TEST(Model, ZeroDqcIsHandCheckable) {
    Rng rng(2);
    auto m = make_dqc({16, 4, 1, 2}, rng);
    std::fill(m.pre->weights().begin(), m.pre->weights().end(), 0.0);
    std::fill(m.pre->bias().begin(), m.pre->bias().end(), 0.0);
    std::fill(m.qparams.begin(), m.qparams.end(), 0.0);
    const auto x = std::vector<double>(16, 0.3);
    const auto p = model_forward(m, x);
    double z[2] = {m.post->bias()[0], m.post->bias()[1]};
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t q = 0; q < 4; ++q) z[c] += m.post->weight(c, q);
    const double e0 = std::exp(z[0]), e1 = std::exp(z[1]);
    EXPECT_NEAR(p[0], e0 / (e0 + e1), 1e-12);
    EXPECT_NEAR(p[1], e1 / (e0 + e1), 1e-12);
}

TEST(Model, OutputsAreDistributions) {
    Rng rng(6);
    std::mt19937_64 gen(6);
    for (int t = 0; t < 20; ++t) {
        const auto m = t % 2 ? make_dqc({32, 3, 2, 3, EmbeddingKind::DenseAngle}, rng)
                             : make_pure_vqc(32, 2, 3, RotationAxis::X, rng);
        const auto p = model_forward(m, random_features(32, gen));
        double s = 0.0;
        for (double v : p) {
            EXPECT_GE(v, 0.0);
            s += v;
        }
        EXPECT_NEAR(s, 1.0, 1e-10);
    }
}

TEST(ModelBackward, DqcMatchesFiniteDifferences) {
    Rng rng(21);
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (EmbeddingKind e : {EmbeddingKind::Angle, EmbeddingKind::DenseAngle}) {
        for (RotationAxis a : {RotationAxis::X, RotationAxis::Y, RotationAxis::Z}) {
            auto m = make_dqc({24, 4, 1, 2, e, a}, rng);
            for (double& q : m.qparams) q = u(gen);
            expect_fd_match(m, random_features(24, gen), gen() % 2);
        }
    }
    auto deep = make_dqc({24, 3, 3, 3, EmbeddingKind::Angle, RotationAxis::Y, AngleAxis::X}, rng);
    for (double& q : deep.qparams) q = u(gen);
    expect_fd_match(deep, random_features(24, gen), 2);
}

TEST(ModelBackward, FullWidthDqcMatchesFiniteDifferences) {
    Rng rng(22);
    std::mt19937_64 gen(22);
    auto m = make_dqc({512, 4, 1, 2}, rng);
    expect_fd_match(m, random_features(512, gen), 1);
}

TEST(ModelBackward, PureVqcOnlyQuantum) {
    Rng rng(31);
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto m = make_pure_vqc(16, 2, 3, RotationAxis::Y, rng);
    for (double& q : m.qparams) q = u(gen);
    const auto x = random_features(16, gen);
    const auto g = model_backward(m, x, 1);
    EXPECT_TRUE(g.pre_weights.empty() && g.pre_bias.empty());
    EXPECT_TRUE(g.post_weights.empty() && g.post_bias.empty());
    EXPECT_EQ(g.qparams.size(), m.qparams.size());
    double mag = 0.0;
    for (double v : g.qparams) mag += std::abs(v);
    EXPECT_GT(mag, 0.0);
    expect_fd_match(m, x, 1);
}

TEST(ModelBackward, ConfidentCorrectGivesZeroGradient) {
    // Huge post bias saturates softmax exactly to one-hot on the label.
    auto m = constant_dqc(8, {0.0, 2000.0});
    const auto g = model_backward(m, std::vector<double>(8, 0.5), 1);
    EXPECT_NEAR(g.loss, 0.0, 1e-12);
    for (double v : g.flatten()) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Adam, ZeroGradientNoDecayIsIdentity) {
    AdamState s(3, {1e-3, 0.9, 0.999, 1e-8, 0.0});
    std::vector<double> p{1, -2, 3};
    const std::vector<double> g(3, 0.0);
    for (int i = 0; i < 5; ++i) adam_step(s, p, g);
    EXPECT_EQ(p, (std::vector<double>{1, -2, 3}));
    EXPECT_EQ(s.step, 5u);
}

TEST(Adam, FirstStepIsLearningRate) {
    AdamState s(4, {1e-4, 0.9, 0.999, 1e-8, 0.0});
    std::vector<double> p{0.0, 1.0, -1.0, 5.0};
    const auto before = p;
    adam_step(s, p, std::vector<double>(4, 1.0));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(before[k] - p[k], 1e-4, 1e-6);
}

TEST(Adam, ThreeStepScalarOracle) {
    const AdamHyper h{1e-2, 0.9, 0.999, 1e-8, 0.01};
    AdamState s(1, h);
    std::vector<double> p{0.5};
    double x = 0.5, m = 0.0, v = 0.0;
    for (int t = 1; t <= 3; ++t) {
        adam_step(s, p, std::vector<double>{1.0});
        const double g = 1.0 + h.weight_decay * x;
        m = h.beta1 * m + (1 - h.beta1) * g;
        v = h.beta2 * v + (1 - h.beta2) * g * g;
        const double mh = m / (1 - std::pow(h.beta1, t));
        const double vh = v / (1 - std::pow(h.beta2, t));
        x -= h.lr * mh / (std::sqrt(vh) + h.eps);
        EXPECT_NEAR(p[0], x, 1e-12);
    }
}

TEST(Adam, Errors) {
    AdamState s(2, {});
    std::vector<double> p{0, 0};
    EXPECT_THROW(adam_step(s, p, std::vector<double>{1.0}), std::invalid_argument);
    EXPECT_THROW(adam_step(s, p, std::vector<double>{1.0, std::nan("")}), NumericalError);
    EXPECT_THROW(adam_step(s, p, std::vector<double>{INFINITY, 0.0}), NumericalError);
}

TEST(Adam, DefaultHyperparameters) {
    const AdamHyper h;
    EXPECT_DOUBLE_EQ(h.lr, 1e-4);
    EXPECT_DOUBLE_EQ(h.weight_decay, 0.01);
    EXPECT_DOUBLE_EQ(h.beta1, 0.9);
    EXPECT_DOUBLE_EQ(h.beta2, 0.999);
    const TrainOptions o;
    EXPECT_EQ(o.batch_size, 8u);
    EXPECT_EQ(o.epochs, 25u);
}

TEST(Evaluate, PerfectModel) {
    Rng rng(1);
    auto m = make_dqc({2, 2, 1, 2}, rng);
    // x0 = 0 leaves |00> (<Z_1> = 1); x0 = 1 puts RY(pi/2) on qubit 0 and the
    // CNOT ring leaves qubit 1 in |+> (<Z_1> = 0).
    std::fill(m.pre->weights().begin(), m.pre->weights().end(), 0.0);
    std::fill(m.pre->bias().begin(), m.pre->bias().end(), 0.0);
    std::fill(m.qparams.begin(), m.qparams.end(), 0.0);
    m.pre->weights()[0] = 100.0;
    std::fill(m.post->weights().begin(), m.post->weights().end(), 0.0);
    m.post->weights()[1] = 2000.0;
    m.post->weights()[3] = -2000.0;
    m.post->bias() = {0.0, 2000.0};
    const Dataset d = tiny_dataset({{0, 0}, {0, 0}, {1, 0}, {1, 0}}, {0, 0, 1, 1});
    const auto r = evaluate(m, d, SplitKind::Val, 3);
    EXPECT_EQ(r.split, SplitKind::Val);
    EXPECT_EQ(r.epoch, 3u);
    EXPECT_DOUBLE_EQ(r.accuracy, 1.0);
    EXPECT_DOUBLE_EQ(r.auroc, 1.0);
    EXPECT_NEAR(r.loss, 0.0, 1e-9);
}

TEST(Evaluate, UniformModel) {
    const auto m = constant_dqc(2, {0.0, 0.0});
    const Dataset d = tiny_dataset({{1, 0}, {2, 0}, {3, 0}, {4, 0}, {5, 0}, {6, 0}}, {0, 1, 0, 1, 0, 1});
    const auto r = evaluate(m, d);
    EXPECT_DOUBLE_EQ(r.auroc, 0.5);
    EXPECT_DOUBLE_EQ(r.accuracy, 0.5);  // argmax ties resolve to class 0
    EXPECT_NEAR(r.loss, std::log(2.0), 1e-12);
}

TEST(Evaluate, HandBuiltConfusion) {
    const auto m = constant_dqc(2, {0.0, 1.0});  // always predicts class 1
    const Dataset d = tiny_dataset({{1, 0}, {2, 0}, {3, 0}, {4, 0}}, {0, 1, 1, 1});
    const auto r = evaluate(m, d);
    EXPECT_EQ(r.confusion, (ConfusionMatrix{{0, 1}, {0, 3}}));
    EXPECT_DOUBLE_EQ(r.accuracy, 0.75);
    EXPECT_THROW(evaluate(m, Dataset{{}, {"a", "b"}}), DataError);
}

TEST(Train, SeparableReachesHighAccuracy) {
    // One draw so both parts share class centers; each class is a contiguous block.
    const Dataset all = synth_dataset({125, 2, 512, 10.0, 7});
    std::vector<std::size_t> train_idx, val_idx;
    for (std::size_t i = 0; i < all.size(); ++i) (i % 125 < 100 ? train_idx : val_idx).push_back(i);
    const Dataset data = all.subset(train_idx);
    const Dataset val = all.subset(val_idx);
    Rng rng(derive_seed(7, "init", 0));
    const auto model = make_dqc({512, 4, 1, 2}, rng);
    TrainOptions opt;
    opt.seed = 7;
    opt.adam.lr = 1e-3;
    const auto result = train(model, data, val, opt);
    ASSERT_EQ(result.history.size(), 2 * opt.epochs);
    double best_train = 0.0;
    for (const auto& r : result.history)
        if (r.split == SplitKind::Train) best_train = std::max(best_train, r.accuracy);
    EXPECT_GE(best_train, 0.95);
    EXPECT_GE(result.best_val.auroc, 0.95);
}

TEST(Train, DeterministicAndBestByValAuroc) {
    const Dataset data = synth_dataset({12, 2, 32, 3.0, 1});
    const Dataset val = synth_dataset({6, 2, 32, 3.0, 2});
    Rng r1(5), r2(5);
    TrainOptions opt;
    opt.epochs = 4;
    opt.seed = 3;
    std::size_t callbacks = 0;
    opt.on_record = [&](const MetricRecord&) { ++callbacks; };
    const auto a = train(make_dqc({32, 2, 1, 2}, r1), data, val, opt);
    const auto b = train(make_dqc({32, 2, 1, 2}, r2), data, val, opt);
    EXPECT_EQ(callbacks, 16u);
    EXPECT_EQ(format_metrics_csv(a.history), format_metrics_csv(b.history));
    EXPECT_EQ(a.best_model.flatten(), b.best_model.flatten());
    double best = -1.0;
    std::size_t best_epoch = 0;
    for (const auto& r : a.history) {
        if (r.split == SplitKind::Val && r.auroc > best) {
            best = r.auroc;
            best_epoch = r.epoch;
        }
    }
    EXPECT_EQ(a.best_epoch, best_epoch);
    EXPECT_DOUBLE_EQ(evaluate(a.best_model, val, SplitKind::Val).auroc, best);
}

TEST(Train, FullBatchGradientDescentLossNonIncreasing) {
    const Dataset data = synth_dataset({20, 2, 64, 10.0, 4});
    Rng rng(9);
    TrainOptions opt;
    opt.epochs = 12;
    opt.optimizer = OptimizerKind::GradientDescent;
    opt.full_batch = true;
    opt.adam.lr = 0.05;
    opt.adam.weight_decay = 0.0;
    const auto result = train(make_dqc({64, 4, 1, 2}, rng), data, data, opt);
    double prev = INFINITY;
    for (const auto& r : result.history) {
        if (r.split != SplitKind::Train) continue;
        EXPECT_LE(r.loss, prev + 1e-12) << "epoch " << r.epoch;
        prev = r.loss;
    }
}

TEST(Train, BatchGradientIsMean) {
    const Dataset data = synth_dataset({3, 2, 16, 2.0, 4});
    Rng rng(2);
    const auto m = make_dqc({16, 2, 1, 2}, rng);
    const std::vector<std::size_t> idx{0, 3, 5};
    const auto g = batch_gradient(m, data, idx);
    std::vector<double> want(m.param_count(), 0.0);
    for (std::size_t i : idx) {
        const auto gi = model_backward(m, data.samples[i].features(), data.samples[i].label).flatten();
        for (std::size_t k = 0; k < want.size(); ++k) want[k] += gi[k] / 3.0;
    }
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(g[k], want[k], 1e-15);
}

TEST(Train, MetricsCsvFormat) {
    MetricRecord r{SplitKind::Val, 2, 0.5, 0.75, 1.0, {}};
    EXPECT_EQ(format_metrics_csv({r}), "split,epoch,loss,accuracy,auroc\nval,2,0.5,0.75,1\n");
    EXPECT_EQ(format_number(0.1), "0.1");
}
