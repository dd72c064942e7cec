#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rknet/adjoint.hpp"
#include "rknet/data.hpp"
#include "rknet/network.hpp"

namespace rknet {

// Numerically safe softmax (max subtraction); entries positive, sum 1.
Vector softmax(const Vector& z);

// Argmax of softmax(W y + mu); ties break toward the smaller index.
int classify(const ClassifierHead& head, const Vector& y);

// -sum_k c_k log H_k(W y + mu), probabilities clamped to >= 1e-300.
double cross_entropy(const ClassifierHead& head, const Vector& y, const Vector& c);

struct HeadGrads {
  Matrix dw;
  Vector dmu;
  Vector dy;  // seeds the adjoint terminal condition
};

// With r = softmax(W y + mu) - c: dW = r y^T, dmu = r, dy = W^T r.
HeadGrads head_grads(const ClassifierHead& head, const Vector& y, const Vector& c);

struct AdamState {
  ParamGrads m;  // first moments, shaped like the parameters
  ParamGrads v;  // second moments
  std::int64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState init(const ModelParams& params, double lr, double beta1, double beta2, double eps);
};

// Bias-corrected Adam update over every layer K, b and the head W, mu.
void adam_step(AdamState& state, ModelParams& params, const ParamGrads& grads);

struct EpochMetrics {
  int epoch = 0;
  double train_acc = 0.0;
  double val_acc = 0.0;
  double train_cost = 0.0;
  double val_cost = 0.0;
  double seconds = 0.0;
};
using Metrics = std::vector<EpochMetrics>;

struct EvalResult {
  double accuracy = 0.0;  // percent
  double cost = 0.0;      // mean per-sample cross entropy
};

// Dataset-level accuracy/cost; inputs narrower than the model are
// zero-augmented internally.
EvalResult evaluate(const ModelParams& m, const LabeledDataset& ds);

struct TrainConfig {
  int batch_size = 5;
  int epochs = 40;
  std::uint64_t seed = 1;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  bool early_stopping = false;
  int patience = 5;  // epochs without val-cost improvement
};

/// Mini-batch training. Shuffles per epoch with a seeded generator, runs
/// forward/backward per sample, averages gradients over the batch and
/// applies one Adam step per batch. Metrics start with an epoch-0 row for
/// the untrained model; on_epoch (when set) fires after every recorded row.
/// Throws NumericError if the batch cost turns non-finite.
Metrics train(ModelParams& model, const SplitDataset& data, const TrainConfig& cfg,
              const std::function<void(const EpochMetrics&)>& on_epoch = nullptr);

}  // namespace rknet
