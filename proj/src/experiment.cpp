#include "rknet/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "rknet/analysis.hpp"
#include "rknet/checkpoint.hpp"

namespace rknet {

using nlohmann::json;

AggregateStat aggregate(const std::vector<double>& values) {
  AggregateStat s;
  s.values = values;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= values.size();
  if (values.size() > 1) {
    double acc = 0.0;
    for (double v : values) acc += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(acc / (values.size() - 1));
  }
  return s;
}

LabeledDataset resolve_dataset(const ExperimentConfig& cfg) {
  LabeledDataset ds;
  if (cfg.uses_idx()) {
    ds = load_idx_dataset(cfg.images, cfg.labels);
  } else if (cfg.dataset.size() > 4 && cfg.dataset.compare(cfg.dataset.size() - 4, 4, ".csv") == 0) {
    ds = load_csv(cfg.dataset);
  } else {
    ds = gen_point_dataset(cfg.dataset, cfg.n, cfg.seed);
  }
  if (cfg.limit > 0 && cfg.limit < ds.size()) ds = take_prefix(ds, cfg.limit);
  return ds;
}

namespace {

ModelParams build_model(const ExperimentConfig& cfg, int classes, Rng& rng) {
  const Activation act = activation_from_name(cfg.activation);
  if (cfg.arch == "standard") {
    return init_model(Arch::standard, ButcherTableau{}, cfg.width, cfg.depth, classes, cfg.step,
                      act, rng);
  }
  return init_model(Arch::rk, tableau_for(cfg), cfg.width, cfg.depth, classes, cfg.step, act, rng);
}

void write_metrics_row(std::ofstream& out, const EpochMetrics& em, bool deterministic) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g,%.3f\n", em.epoch, em.train_acc,
                em.val_acc, em.train_cost, em.val_cost, deterministic ? 0.0 : em.seconds);
  out << buf;
  out.flush();  // keep partial output on aborted runs
}

json stat_json(const AggregateStat& s) {
  return json{{"mean", s.mean}, {"std", s.stddev}, {"values", s.values}};
}

}  // namespace

void emit_figures(const ModelParams& model, const LabeledDataset& val, const Metrics* metrics,
                  const std::string& dir) {
  namespace fs = std::filesystem;
  const int d = val.dim;
  const int d_star = model.width - d;
  std::vector<int> labels(val.size());
  for (int i = 0; i < val.size(); ++i) labels[i] = val.label_index(i);

  // dataset scatter
  if (d == 2) {
    emit_scatter2d_svg(val.samples, labels, (fs::path(dir) / "scatter2d-dataset.svg").string());
  } else if (d == 3) {
    emit_scatter3d_svg(val.samples, labels, (fs::path(dir) / "scatter3d-projected-dataset.svg").string());
  } else {
    const PcaModel pm = pca_fit(val.samples, 3);
    std::vector<Vector> proj(val.size());
    for (int i = 0; i < val.size(); ++i) proj[i] = pca_project(pm, val.samples[i]);
    emit_scatter3d_svg(proj, labels, (fs::path(dir) / "scatter3d-projected-dataset.svg").string());
  }

  // prediction background, 2D inputs only
  if (d == 2) {
    const PredictionGrid grid = prediction_grid(model, -1.5, 1.5, -1.5, 1.5, 120, 110);
    emit_prediction_svg(grid, val.samples, labels, (fs::path(dir) / "prediction-val.svg").string());
  }

  // feature transformation in the output layer (PCA fit on validation features)
  std::vector<Vector> feats(val.size());
  Vector y;
  for (int i = 0; i < val.size(); ++i) {
    forward_output_into(model, augment(val.samples[i], d_star), y);
    feats[i] = y;
  }
  if (model.width == 2) {
    emit_scatter2d_svg(feats, labels, (fs::path(dir) / "scatter2d-features.svg").string());
  } else {
    const int k = std::min(3, model.width);
    const PcaModel pm = pca_fit(feats, k);
    std::vector<Vector> proj(feats.size());
    for (size_t i = 0; i < feats.size(); ++i) {
      proj[i] = pca_project(pm, feats[i]);
      proj[i].resize(3, 0.0);
    }
    emit_scatter3d_svg(proj, labels, (fs::path(dir) / "scatter3d-projected-features.svg").string());
  }

  // trajectories of a subsample through the layers
  const int n_traj = std::min(60, val.size());
  std::vector<std::vector<Vector>> trajs(n_traj);
  std::vector<int> traj_labels(n_traj);
  std::vector<Vector> all_states;
  ForwardTrace tr;
  for (int i = 0; i < n_traj; ++i) {
    forward_into(model, augment(val.samples[i], d_star), tr);
    trajs[i] = tr.y;
    traj_labels[i] = labels[i];
    all_states.insert(all_states.end(), tr.y.begin(), tr.y.end());
  }
  if (n_traj > 0) {
    if (model.width > 2) {
      const PcaModel pm = pca_fit(all_states, 2);
      for (auto& t : trajs)
        for (auto& p : t) p = pca_project(pm, p);
    }
    emit_trajectories_svg(trajs, traj_labels, (fs::path(dir) / "trajectories-val.svg").string());
  }

  if (metrics) {
    emit_convergence_svg(*metrics, true, (fs::path(dir) / "convergence-accuracy.svg").string());
    emit_convergence_svg(*metrics, false, (fs::path(dir) / "convergence-cost.svg").string());
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  namespace fs = std::filesystem;
  validate_config(cfg);

  LabeledDataset ds = resolve_dataset(cfg);
  if (ds.dim > cfg.width)
    throw UsageError("width " + std::to_string(cfg.width) + " is below the data dimension " +
                     std::to_string(ds.dim));
  if (cfg.arch != "standard" && cfg.width == ds.dim && !cfg.allow_node)
    throw UsageError("rk architectures expect an augmented width (> data dimension); "
                     "pass allow_node to train the plain neural-ODE baseline");

  const SplitDataset parts = split(ds, cfg.val_ratio, cfg.seed);

  fs::create_directories(cfg.out_dir);
  {
    std::ofstream out(fs::path(cfg.out_dir) / "config.json");
    if (!out) throw DataError("cannot write config.json in " + cfg.out_dir);
    out << config_to_json_text(cfg);
  }

  const auto t0 = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.run_dir = cfg.out_dir;
  std::vector<double> f_train_acc, f_val_acc, f_train_cost, f_val_cost;

  for (int rep = 0; rep < cfg.repetitions; ++rep) {
    Rng init_rng(derive_seed(cfg.seed, 100 + static_cast<std::uint64_t>(rep)));
    ModelParams model = build_model(cfg, ds.classes, init_rng);

    TrainConfig tc;
    tc.batch_size = cfg.batch_size;
    tc.epochs = cfg.epochs;
    tc.seed = derive_seed(cfg.seed, 200 + static_cast<std::uint64_t>(rep));
    tc.lr = cfg.lr;
    tc.beta1 = cfg.beta1;
    tc.beta2 = cfg.beta2;
    tc.eps = cfg.eps;
    tc.early_stopping = cfg.early_stopping_resolved();
    tc.patience = cfg.patience;

    const std::string metrics_path =
        (fs::path(cfg.out_dir) / ("metrics-rep" + std::to_string(rep) + ".csv")).string();
    std::ofstream mout(metrics_path);
    if (!mout) throw DataError("cannot write " + metrics_path);
    mout << "epoch,train_acc,val_acc,train_cost,val_cost,seconds\n";

    Metrics metrics = train(model, parts, tc,
                            [&](const EpochMetrics& em) { write_metrics_row(mout, em, cfg.deterministic); });

    save_model(model, (fs::path(cfg.out_dir) / ("model-rep" + std::to_string(rep) + ".bin")).string());

    const EpochMetrics& last = metrics.back();
    f_train_acc.push_back(last.train_acc);
    f_val_acc.push_back(last.val_acc);
    f_train_cost.push_back(last.train_cost);
    f_val_cost.push_back(last.val_cost);

    if (cfg.plots && rep == 0) emit_figures(model, parts.val, &metrics, cfg.out_dir);
    result.rep_metrics.push_back(std::move(metrics));
  }

  result.train_acc = aggregate(f_train_acc);
  result.val_acc = aggregate(f_val_acc);
  result.train_cost = aggregate(f_train_cost);
  result.val_cost = aggregate(f_val_cost);
  result.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json summary{{"repetitions", cfg.repetitions},
               {"dataset", cfg.dataset},
               {"arch", cfg.arch},
               {"width", cfg.width},
               {"depth", cfg.depth},
               {"final", json{{"train_acc", stat_json(result.train_acc)},
                              {"val_acc", stat_json(result.val_acc)},
                              {"train_cost", stat_json(result.train_cost)},
                              {"val_cost", stat_json(result.val_cost)}}},
               {"total_seconds", result.total_seconds}};
  std::ofstream sout(fs::path(cfg.out_dir) / "summary.json");
  if (!sout) throw DataError("cannot write summary.json in " + cfg.out_dir);
  sout << summary.dump(2) << "\n";
  return result;
}

}  // namespace rknet
