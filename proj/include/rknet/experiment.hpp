#pragma once

#include <string>
#include <vector>

#include "rknet/config.hpp"
#include "rknet/data.hpp"
#include "rknet/network.hpp"
#include "rknet/training.hpp"

namespace rknet {

struct AggregateStat {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation, 0 for a single repetition
  std::vector<double> values;
};

struct ExperimentResult {
  std::string run_dir;
  std::vector<Metrics> rep_metrics;
  AggregateStat train_acc, val_acc, train_cost, val_cost;  // over final epochs
  double total_seconds = 0.0;
};

AggregateStat aggregate(const std::vector<double>& values);

// Dataset named by the config: generated, CSV, or IDX (with optional prefix
// limit applied).
LabeledDataset resolve_dataset(const ExperimentConfig& cfg);

/// Full training run: resolves the dataset, writes the resolved
/// config.json, trains `repetitions` models from independent seeds and
/// writes metrics-rep<k>.csv, model-rep<k>.bin(+manifest), summary.json and
/// the figure set into cfg.out_dir.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Figures for a trained model (used by `train` and `eval --plots`).
void emit_figures(const ModelParams& model, const LabeledDataset& val, const Metrics* metrics,
                  const std::string& dir);

}  // namespace rknet
