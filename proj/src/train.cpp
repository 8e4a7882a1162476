#include "qtl/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qtl/errors.hpp"
#include "qtl/rng.hpp"
#include "qtl/split.hpp"

namespace qtl {

namespace {

void check_usable(const HybridModel& model, const Dataset& data, const char* what) {
    if (data.empty()) throw DataError(std::string(what) + " split is empty");
    if (data.feature_dim() != model.input_dim) {
        throw DataError(std::string(what) + " split has " + std::to_string(data.feature_dim()) +
                        " features, model expects " + std::to_string(model.input_dim));
    }
    if (data.n_classes() != model.n_classes) {
        throw DataError(std::string(what) + " split has " + std::to_string(data.n_classes()) +
                        " classes, model expects " + std::to_string(model.n_classes));
    }
}

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

MetricRecord evaluate(const HybridModel& model, const Dataset& data, SplitKind split, std::size_t epoch) {
    check_usable(model, data, split_name(split).data());
    std::vector<std::vector<double>> probs;
    std::vector<std::size_t> truth, predicted;
    probs.reserve(data.size());
    double loss = 0.0;
    for (const Sample& s : data.samples) {
        probs.push_back(model_forward(model, s.features()));
        loss += cross_entropy(probs.back(), s.label);
        truth.push_back(s.label);
        predicted.push_back(argmax(probs.back()));
    }
    MetricRecord r;
    r.split = split;
    r.epoch = epoch;
    r.loss = loss / static_cast<double>(data.size());
    r.accuracy = accuracy(predicted, truth);
    if (model.n_classes == 2) {
        std::vector<double> scores;
        std::vector<int> labels;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            scores.push_back(probs[i][1]);
            labels.push_back(truth[i] == 1 ? 1 : 0);
        }
        r.auroc = auroc_binary(scores, labels);
    } else {
        r.auroc = auroc_macro_ovr(probs, truth);
    }
    r.confusion = confusion_matrix(predicted, truth, model.n_classes);
    return r;
}

std::vector<double> batch_gradient(const HybridModel& model, const Dataset& data,
                                   std::span<const std::size_t> indices, double shift) {
    std::vector<double> total(model.param_count(), 0.0);
    // Fixed summation order keeps results bitwise reproducible.
    for (std::size_t i : indices) {
        const Sample& s = data.samples.at(i);
        const ModelGradient g = model_backward(model, s.features(), s.label, shift);
        if (!std::isfinite(g.loss)) {
            throw NumericalError("non-finite loss on sample " + std::to_string(i) + " (group " + s.group_id + ")");
        }
        const auto flat = g.flatten();
        for (std::size_t k = 0; k < flat.size(); ++k) total[k] += flat[k];
    }
    const double inv = 1.0 / static_cast<double>(indices.size());
    for (double& v : total) v *= inv;
    return total;
}

TrainResult train(HybridModel model, const Dataset& train_set, const Dataset& val_set,
                  const TrainOptions& options) {
    model.validate();
    check_usable(model, train_set, "train");
    check_usable(model, val_set, "val");
    if (options.batch_size == 0) throw std::invalid_argument("train: batch_size must be >= 1");

    std::vector<double> params = model.flatten();
    AdamState adam(params.size(), options.adam);
    TrainResult result;
    result.best_model = model;
    bool have_best = false;

    for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
        const std::size_t chunk = options.full_batch ? train_set.size() : options.batch_size;
        const auto plan = batches(train_set, chunk, derive_seed(options.seed, "shuffle", epoch));
        for (std::size_t b = 0; b < plan.size(); ++b) {
            std::vector<double> grad;
            try {
                grad = batch_gradient(model, train_set, plan[b], options.shift);
            } catch (const NumericalError& e) {
                throw NumericalError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(b) + ": " +
                                     e.what());
            }
            if (options.optimizer == OptimizerKind::Adam) {
                adam_step(adam, params, grad);
            } else {
                for (std::size_t k = 0; k < params.size(); ++k) {
                    params[k] -= options.adam.lr * (grad[k] + options.adam.weight_decay * params[k]);
                    if (!std::isfinite(params[k])) {
                        throw NumericalError("epoch " + std::to_string(epoch) + ", batch " + std::to_string(b) +
                                             ": parameter " + std::to_string(k) + " diverged");
                    }
                }
            }
            model.assign(params);
        }

        MetricRecord tr = evaluate(model, train_set, SplitKind::Train, epoch);
        MetricRecord va = evaluate(model, val_set, SplitKind::Val, epoch);
        if (!std::isfinite(tr.loss) || !std::isfinite(va.loss)) {
            throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite loss");
        }
        if (options.on_record) {
            options.on_record(tr);
            options.on_record(va);
        }
        if (!have_best || va.auroc > result.best_val.auroc) {
            have_best = true;
            result.best_model = model;
            result.best_epoch = epoch;
            result.best_val = va;
        }
        result.history.push_back(std::move(tr));
        result.history.push_back(std::move(va));
    }
    return result;
}

std::string format_metrics_csv(const std::vector<MetricRecord>& records) {
    std::string out = "split,epoch,loss,accuracy,auroc\n";
    for (const MetricRecord& r : records) {
        out += split_name(r.split);
        out += ',' + std::to_string(r.epoch) + ',' + format_number(r.loss) + ',' + format_number(r.accuracy) + ',' +
               format_number(r.auroc) + '\n';
    }
    return out;
}

}  // namespace qtl
