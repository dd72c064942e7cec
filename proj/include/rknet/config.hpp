#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rknet/tableau.hpp"

namespace rknet {

/// One experiment = dataset x architecture x training hyperparameters,
/// run `repetitions` times from independent seeds. Every field has a
/// default; the resolved config (defaults materialized) is echoed into the
/// run directory so a run is reproducible from its config.json alone.
struct ExperimentConfig {
  // dataset: a generator name (see point_dataset_names()), a .csv path, or
  // an IDX pair via images/labels
  std::string dataset = "spiral";
  std::string images;
  std::string labels;
  int n = 1500;         // generated sample count
  int limit = 0;        // optional prefix subset of a loaded dataset (0 = all)
  double val_ratio = 0.8;

  std::string arch = "rk4";  // standard | euler | rk4 | custom
  std::optional<ButcherTableau> custom_tableau;
  int width = 16;
  int depth = 20;
  double step = 1.0;  // h
  std::string activation = "tanh";
  bool allow_node = false;  // permit width == data dim for rk architectures

  int batch_size = 5;
  int epochs = 40;
  int repetitions = 1;
  std::uint64_t seed = 1;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::optional<bool> early_stopping;  // unset -> enabled for IDX datasets only
  int patience = 5;

  bool deterministic = true;  // zero wall-time column, bit-reproducible outputs
  bool plots = true;
  std::string out_dir = "run";

  bool uses_idx() const { return !images.empty() || !labels.empty(); }
  bool early_stopping_resolved() const { return early_stopping.value_or(uses_idx()); }
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

// Throws UsageError on out-of-range or inconsistent fields.
void validate_config(const ExperimentConfig& cfg);

// Tableau for a named architecture ("custom" requires the embedded tableau).
ButcherTableau tableau_for(const ExperimentConfig& cfg);

}  // namespace rknet
