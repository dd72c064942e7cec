#include "rknet/config.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "rknet/activation.hpp"
#include "rknet/data.hpp"

namespace rknet {

using nlohmann::json;

namespace {

ButcherTableau tableau_from_json(const json& j) {
  const int s = j.at("s").get<int>();
  Matrix a(s, s);
  const json& rows = j.at("A");
  if (static_cast<int>(rows.size()) != s) throw DataError("config tableau: A has wrong row count");
  for (int i = 0; i < s; ++i) {
    if (static_cast<int>(rows[i].size()) != s)
      throw DataError("config tableau: A has wrong column count");
    for (int jj = 0; jj < s; ++jj) a(i, jj) = rows[i][jj].get<double>();
  }
  return ButcherTableau::create(std::move(a), j.at("beta").get<Vector>(), j.at("c").get<Vector>());
}

json tableau_to_json(const ButcherTableau& t) {
  json a = json::array();
  for (int i = 0; i < t.s; ++i) {
    json row = json::array();
    for (int j = 0; j < t.s; ++j) row.push_back(t.a(i, j));
    a.push_back(row);
  }
  return json{{"s", t.s}, {"A", a}, {"beta", t.beta}, {"c", t.c}};
}

template <typename T>
void maybe(const json& j, const char* key, T& slot) {
  if (j.contains(key)) slot = j.at(key).get<T>();
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("config: ") + e.what());
  }
  ExperimentConfig cfg;
  maybe(j, "dataset", cfg.dataset);
  maybe(j, "images", cfg.images);
  maybe(j, "labels", cfg.labels);
  maybe(j, "n", cfg.n);
  maybe(j, "limit", cfg.limit);
  maybe(j, "val_ratio", cfg.val_ratio);
  maybe(j, "arch", cfg.arch);
  if (j.contains("tableau") && !j.at("tableau").is_null())
    cfg.custom_tableau = tableau_from_json(j.at("tableau"));
  maybe(j, "width", cfg.width);
  maybe(j, "depth", cfg.depth);
  maybe(j, "step", cfg.step);
  maybe(j, "activation", cfg.activation);
  maybe(j, "allow_node", cfg.allow_node);
  maybe(j, "batch_size", cfg.batch_size);
  maybe(j, "epochs", cfg.epochs);
  maybe(j, "repetitions", cfg.repetitions);
  maybe(j, "seed", cfg.seed);
  maybe(j, "lr", cfg.lr);
  maybe(j, "beta1", cfg.beta1);
  maybe(j, "beta2", cfg.beta2);
  maybe(j, "eps", cfg.eps);
  if (j.contains("early_stopping") && !j.at("early_stopping").is_null())
    cfg.early_stopping = j.at("early_stopping").get<bool>();
  maybe(j, "patience", cfg.patience);
  maybe(j, "deterministic", cfg.deterministic);
  maybe(j, "plots", cfg.plots);
  maybe(j, "out_dir", cfg.out_dir);
  return cfg;
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json_text(text);
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j{{"dataset", cfg.dataset},
         {"images", cfg.images},
         {"labels", cfg.labels},
         {"n", cfg.n},
         {"limit", cfg.limit},
         {"val_ratio", cfg.val_ratio},
         {"arch", cfg.arch},
         {"width", cfg.width},
         {"depth", cfg.depth},
         {"step", cfg.step},
         {"activation", cfg.activation},
         {"allow_node", cfg.allow_node},
         {"batch_size", cfg.batch_size},
         {"epochs", cfg.epochs},
         {"repetitions", cfg.repetitions},
         {"seed", cfg.seed},
         {"lr", cfg.lr},
         {"beta1", cfg.beta1},
         {"beta2", cfg.beta2},
         {"eps", cfg.eps},
         {"early_stopping", cfg.early_stopping_resolved()},
         {"patience", cfg.patience},
         {"deterministic", cfg.deterministic},
         {"plots", cfg.plots},
         {"out_dir", cfg.out_dir}};
  j["tableau"] = cfg.custom_tableau ? tableau_to_json(*cfg.custom_tableau) : json(nullptr);
  return j.dump(2) + "\n";
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.batch_size < 1) throw UsageError("batch_size must be >= 1");
  if (cfg.repetitions < 1) throw UsageError("repetitions must be >= 1");
  if (cfg.epochs < 0) throw UsageError("epochs must be >= 0");
  if (cfg.width < 1 || cfg.depth < 1) throw UsageError("width and depth must be >= 1");
  if (cfg.step <= 0.0) throw UsageError("step must be positive");
  if (!(cfg.val_ratio > 0.0 && cfg.val_ratio < 1.0)) throw UsageError("val_ratio must be in (0,1)");
  if (cfg.patience < 1) throw UsageError("patience must be >= 1");
  if (cfg.limit < 0) throw UsageError("limit must be >= 0");

  const bool named = std::find(point_dataset_names().begin(), point_dataset_names().end(),
                               cfg.dataset) != point_dataset_names().end();
  const bool is_csv = cfg.dataset.size() > 4 &&
                      cfg.dataset.compare(cfg.dataset.size() - 4, 4, ".csv") == 0;
  if (cfg.uses_idx()) {
    if (cfg.images.empty() || cfg.labels.empty())
      throw UsageError("IDX datasets need both images and labels paths");
  } else if (!named && !is_csv) {
    throw UsageError("unknown dataset '" + cfg.dataset + "': expected a generator name or a .csv path");
  }
  if (named && cfg.n < 1) throw UsageError("n must be >= 1 for generated datasets");

  if (cfg.arch != "standard" && cfg.arch != "euler" && cfg.arch != "rk4" && cfg.arch != "custom")
    throw UsageError("arch must be one of standard|euler|rk4|custom");
  if (cfg.arch == "custom" && !cfg.custom_tableau)
    throw UsageError("arch 'custom' needs a tableau in the config");

  Activation act;
  try {
    act = activation_from_name(cfg.activation);
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
  if (act == Activation::identity)
    throw UsageError("the identity activation is a test hook and cannot be trained");
}

ButcherTableau tableau_for(const ExperimentConfig& cfg) {
  if (cfg.arch == "euler") return euler_tableau();
  if (cfg.arch == "rk4") return rk4_tableau();
  if (cfg.arch == "custom") {
    if (!cfg.custom_tableau) throw UsageError("arch 'custom' needs a tableau in the config");
    return *cfg.custom_tableau;
  }
  throw UsageError("architecture '" + cfg.arch + "' has no tableau");
}

}  // namespace rknet
