#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rknet/analysis.hpp"
#include "rknet/checkpoint.hpp"
#include "rknet/experiment.hpp"

namespace fs = std::filesystem;
using namespace rknet;

namespace {

struct GenArgs {
  std::string dataset;
  int n = 1500;
  std::uint64_t seed = 1;
  std::string out;
};

struct EvalArgs {
  std::string checkpoint;
  std::string dataset;
  std::string images;
  std::string labels;
  int n = 1500;
  int limit = 0;
  std::uint64_t seed = 1;
  double val_ratio = 0.0;  // 0 evaluates the whole dataset
  bool plots = false;
  std::string out = ".";
};

int run_gen(const GenArgs& a) {
  const auto& names = point_dataset_names();
  if (std::find(names.begin(), names.end(), a.dataset) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw UsageError("unknown dataset '" + a.dataset + "' (known: " + known + ")");
  }
  const LabeledDataset ds = gen_point_dataset(a.dataset, a.n, a.seed);
  save_csv(ds, a.out);
  std::printf("wrote %d samples (dim=%d, classes=%d) to %s\n", ds.size(), ds.dim, ds.classes,
              a.out.c_str());
  return 0;
}

int run_train(const ExperimentConfig& cfg) {
  const ExperimentResult res = run_experiment(cfg);
  std::printf("run dir: %s\n", res.run_dir.c_str());
  std::printf("final val accuracy: mean=%.2f%% std=%.2f over %zu repetition(s)\n",
              res.val_acc.mean, res.val_acc.stddev, res.val_acc.values.size());
  std::printf("final val cost: mean=%.4f\n", res.val_cost.mean);
  return 0;
}

int run_eval(const EvalArgs& a) {
  const ModelParams model = load_model(a.checkpoint);

  ExperimentConfig dcfg;
  dcfg.dataset = a.dataset;
  dcfg.images = a.images;
  dcfg.labels = a.labels;
  dcfg.n = a.n;
  dcfg.limit = a.limit;
  dcfg.seed = a.seed;
  LabeledDataset ds = resolve_dataset(dcfg);
  if (a.val_ratio != 0.0) {
    if (!(a.val_ratio > 0.0 && a.val_ratio < 1.0)) throw UsageError("val-ratio must be in (0,1)");
    ds = split(ds, a.val_ratio, a.seed).val;
  }
  if (ds.dim > model.width)
    throw ShapeError("checkpoint width " + std::to_string(model.width) +
                     " is below the data dimension " + std::to_string(ds.dim));
  if (ds.classes != model.classes())
    throw ShapeError("checkpoint has " + std::to_string(model.classes()) + " classes but dataset has " +
                     std::to_string(ds.classes));

  const EvalResult r = evaluate(model, ds);
  std::printf("accuracy=%.17g cost=%.17g\n", r.accuracy, r.cost);

  if (a.plots) {
    fs::create_directories(a.out);
    std::vector<int> labels(ds.size());
    for (int i = 0; i < ds.size(); ++i) labels[i] = ds.label_index(i);
    if (ds.dim == 2) {
      const PredictionGrid grid = prediction_grid(model, -1.5, 1.5, -1.5, 1.5, 120, 110);
      emit_prediction_svg(grid, ds.samples, labels, (fs::path(a.out) / "prediction-eval.svg").string());
    } else {
      std::vector<Vector> feats(ds.size());
      Vector y;
      const int d_star = model.width - ds.dim;
      for (int i = 0; i < ds.size(); ++i) {
        forward_output_into(model, augment(ds.samples[i], d_star), y);
        feats[i] = y;
      }
      const PcaModel pm = pca_fit(feats, std::min(3, model.width));
      std::vector<Vector> proj(feats.size());
      for (size_t i = 0; i < feats.size(); ++i) {
        proj[i] = pca_project(pm, feats[i]);
        proj[i].resize(3, 0.0);
      }
      emit_scatter3d_svg(proj, labels,
                         (fs::path(a.out) / "scatter3d-projected-features.svg").string());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runge-Kutta networks for point and image classification"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a point dataset and write it as CSV");
  gen->add_option("--dataset", gen_args.dataset, "dataset name")->required();
  gen->add_option("--n", gen_args.n, "sample count");
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--out", gen_args.out, "output CSV path")->required();

  // train options override the (optional) config file field by field
  std::string config_path;
  ExperimentConfig ov;
  CLI::App* train = app.add_subcommand("train", "train one experiment configuration");
  train->add_option("--config", config_path, "JSON config file");
  train->add_option("--dataset", ov.dataset, "generator name or CSV path");
  train->add_option("--images", ov.images, "IDX image file");
  train->add_option("--labels", ov.labels, "IDX label file");
  train->add_option("--n", ov.n, "generated sample count");
  train->add_option("--limit", ov.limit, "use only the first N samples of a loaded dataset");
  train->add_option("--val-ratio", ov.val_ratio, "train fraction of the split");
  train->add_option("--arch", ov.arch, "standard|euler|rk4|custom");
  train->add_option("--width", ov.width, "feature-space width");
  train->add_option("--depth", ov.depth, "layer count");
  train->add_option("--step", ov.step, "step size h");
  train->add_option("--activation", ov.activation, "relu|softplus|sigmoid|tanh");
  train->add_flag("--allow-node", ov.allow_node, "permit width == data dimension for rk nets");
  train->add_option("--batch-size", ov.batch_size, "mini-batch size");
  train->add_option("--epochs", ov.epochs, "training epochs");
  train->add_option("--repetitions", ov.repetitions, "independent repetitions");
  train->add_option("--seed", ov.seed, "master seed");
  train->add_option("--lr", ov.lr, "Adam learning rate");
  bool early_flag = false;
  train->add_flag("--early-stopping,!--no-early-stopping", early_flag, "stop on stalled validation cost");
  train->add_option("--patience", ov.patience, "early-stopping patience in epochs");
  bool plots_flag = true;
  train->add_flag("--plots,!--no-plots", plots_flag, "emit the SVG figure set");
  bool det_flag = true;
  train->add_flag("--deterministic,!--no-deterministic", det_flag, "bit-reproducible outputs");
  train->add_option("--out", ov.out_dir, "run directory");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
  eval->add_option("--checkpoint", eval_args.checkpoint, "model checkpoint path")->required();
  eval->add_option("--dataset", eval_args.dataset, "generator name or CSV path");
  eval->add_option("--images", eval_args.images, "IDX image file");
  eval->add_option("--labels", eval_args.labels, "IDX label file");
  eval->add_option("--n", eval_args.n, "generated sample count");
  eval->add_option("--limit", eval_args.limit, "use only the first N samples");
  eval->add_option("--seed", eval_args.seed, "seed used to regenerate/split the dataset");
  eval->add_option("--val-ratio", eval_args.val_ratio,
                   "evaluate the validation part of this split (0 = whole dataset)");
  eval->add_flag("--plots", eval_args.plots, "emit figures next to the metrics");
  eval->add_option("--out", eval_args.out, "figure directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) return run_gen(gen_args);
    if (train->parsed()) {
      ExperimentConfig cfg =
          config_path.empty() ? ExperimentConfig{} : config_from_json_file(config_path);
      auto touched = [&](const std::string& name) { return train->count(name) > 0; };
      if (touched("--dataset")) cfg.dataset = ov.dataset;
      if (touched("--images")) cfg.images = ov.images;
      if (touched("--labels")) cfg.labels = ov.labels;
      if (touched("--n")) cfg.n = ov.n;
      if (touched("--limit")) cfg.limit = ov.limit;
      if (touched("--val-ratio")) cfg.val_ratio = ov.val_ratio;
      if (touched("--arch")) cfg.arch = ov.arch;
      if (touched("--width")) cfg.width = ov.width;
      if (touched("--depth")) cfg.depth = ov.depth;
      if (touched("--step")) cfg.step = ov.step;
      if (touched("--activation")) cfg.activation = ov.activation;
      if (touched("--allow-node")) cfg.allow_node = ov.allow_node;
      if (touched("--batch-size")) cfg.batch_size = ov.batch_size;
      if (touched("--epochs")) cfg.epochs = ov.epochs;
      if (touched("--repetitions")) cfg.repetitions = ov.repetitions;
      if (touched("--seed")) cfg.seed = ov.seed;
      if (touched("--lr")) cfg.lr = ov.lr;
      if (touched("--early-stopping") || touched("--no-early-stopping"))
        cfg.early_stopping = early_flag;
      if (touched("--patience")) cfg.patience = ov.patience;
      if (touched("--plots") || touched("--no-plots")) cfg.plots = plots_flag;
      if (touched("--deterministic") || touched("--no-deterministic")) cfg.deterministic = det_flag;
      if (touched("--out")) cfg.out_dir = ov.out_dir;
      return run_train(cfg);
    }
    if (eval->parsed()) return run_eval(eval_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
