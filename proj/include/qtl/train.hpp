#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtl/adam.hpp"
#include "qtl/dataset.hpp"
#include "qtl/metrics.hpp"
#include "qtl/model.hpp"

namespace qtl {

enum class OptimizerKind {
    Adam,
    GradientDescent,  // plain steps, used for full-batch sanity runs
};

struct TrainOptions {
    std::size_t epochs = 25;
    std::size_t batch_size = 8;
    AdamHyper adam;  // lr 1e-4, weight decay 0.01
    OptimizerKind optimizer = OptimizerKind::Adam;
    bool full_batch = false;  // one step per epoch over the whole train split
    std::uint64_t seed = 0;
    double shift = kParamShift;
    std::function<void(const MetricRecord&)> on_record;
};

struct TrainResult {
    HybridModel best_model;
    std::size_t best_epoch = 0;
    MetricRecord best_val;
    std::vector<MetricRecord> history;  // train then val row per epoch
};

/// Mean cross-entropy, accuracy, AUROC (binary on the class-1 column when
/// there are two classes, macro one-vs-rest otherwise) and confusion matrix.
MetricRecord evaluate(const HybridModel& model, const Dataset& data, SplitKind split = SplitKind::Test,
                      std::size_t epoch = 0);

/// Batch-averaged gradient of the mean cross-entropy, in flatten() order.
std::vector<double> batch_gradient(const HybridModel& model, const Dataset& data,
                                   std::span<const std::size_t> indices, double shift = kParamShift);

/// Seeded minibatch training; keeps the epoch with the highest validation
/// AUROC (earliest on ties). Throws NumericalError on a non-finite loss.
TrainResult train(HybridModel model, const Dataset& train_set, const Dataset& val_set,
                  const TrainOptions& options);

/// `split,epoch,loss,accuracy,auroc` with shortest round-trip number formatting.
std::string format_metrics_csv(const std::vector<MetricRecord>& records);

std::string format_number(double v);

}  // namespace qtl
