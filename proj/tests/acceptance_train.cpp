// Acceptance suite, training half: reproduces the point-classification
// experiment bands. Each criterion trains full configurations (4
// repetitions each) and prints one verdict line; expect minutes per
// criterion on one core.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "rknet/experiment.hpp"

using namespace rknet;
namespace fs = std::filesystem;

namespace {

void report(const char* tag, bool pass, const std::string& details) {
  std::printf("%-52s %s  (%s)\n", tag, pass ? "PASS" : "FAIL", details.c_str());
  std::fflush(stdout);
}

fs::path scratch_root() {
  const fs::path p = fs::temp_directory_path() / "rknet_acceptance_train";
  fs::create_directories(p);
  return p;
}

int cell_counter = 0;

ExperimentResult run_cell(const std::string& dataset, const std::string& arch, int width, int depth,
                          bool allow_node = false) {
  ExperimentConfig cfg;
  cfg.dataset = dataset;
  cfg.n = 1500;
  cfg.arch = arch;
  cfg.width = width;
  cfg.depth = depth;
  cfg.activation = "tanh";
  cfg.repetitions = 4;
  cfg.seed = 42;
  cfg.allow_node = allow_node;
  cfg.plots = false;
  cfg.out_dir = (scratch_root() / ("cell" + std::to_string(cell_counter++))).string();
  const ExperimentResult res = run_experiment(cfg);
  std::printf("  %-13s %-8s width=%-3d L=%-3d -> val %.2f +- %.2f (train %.2f)\n", dataset.c_str(),
              arch.c_str(), width, depth, res.val_acc.mean, res.val_acc.stddev, res.train_acc.mean);
  std::fflush(stdout);
  return res;
}

}  // namespace

TEST_CASE("criterion 5: depth sweep on spiral") {
  const ExperimentResult rk20 = run_cell("spiral", "rk4", 16, 20);
  const ExperimentResult rk40 = run_cell("spiral", "rk4", 16, 40);
  const ExperimentResult rk100 = run_cell("spiral", "rk4", 16, 100);
  const ExperimentResult st5 = run_cell("spiral", "standard", 16, 5);
  const ExperimentResult st40 = run_cell("spiral", "standard", 16, 40);
  const ExperimentResult st100 = run_cell("spiral", "standard", 16, 100);

  const bool rk_ok = rk20.val_acc.mean >= 97.0 && rk40.val_acc.mean >= 97.0 &&
                     rk100.val_acc.mean >= 97.0;
  const bool shallow_ok = st5.val_acc.mean >= 90.0;
  const bool degraded = st40.val_acc.mean <= 60.0 && st100.val_acc.mean <= 60.0;
  const bool pass = rk_ok && shallow_ok && degraded;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "rk4: %.1f/%.1f/%.1f >= 97; std L5 %.1f >= 90; std L40/100 %.1f/%.1f <= 60",
                rk20.val_acc.mean, rk40.val_acc.mean, rk100.val_acc.mean, st5.val_acc.mean,
                st40.val_acc.mean, st100.val_acc.mean);
  report("criterion 5 (depth sweep, spiral):", pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 6: augmentation effect on donut_2d") {
  const ExperimentResult anode = run_cell("donut_2d", "rk4", 3, 100);
  const ExperimentResult node = run_cell("donut_2d", "rk4", 2, 100, /*allow_node=*/true);
  const double gap = anode.val_acc.mean - node.val_acc.mean;
  const bool pass = anode.val_acc.mean >= 93.0 && gap >= 5.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "width 3: %.2f (>= 93), width 2: %.2f, gap %.2f (>= 5)",
                anode.val_acc.mean, node.val_acc.mean, gap);
  report("criterion 6 (augmentation effect):", pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 7: donut_1d noise ceiling without overfitting") {
  const ExperimentResult res = run_cell("donut_1d", "rk4", 16, 20);
  const double gap = std::fabs(res.train_acc.mean - res.val_acc.mean);
  const bool pass = res.val_acc.mean >= 85.0 && res.val_acc.mean <= 95.0 && gap <= 4.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "val %.2f in [85, 95], |train - val| = %.2f <= 4",
                res.val_acc.mean, gap);
  report("criterion 7 (donut_1d ceiling):", pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 8: multiclass squares comparison") {
  const ExperimentResult st = run_cell("squares_2d_4c", "standard", 16, 5);
  const ExperimentResult eu = run_cell("squares_2d_4c", "euler", 16, 100);
  const ExperimentResult rk = run_cell("squares_2d_4c", "rk4", 16, 100);
  bool pass = true;
  for (const ExperimentResult* r : {&st, &eu, &rk})
    pass = pass && r->val_acc.mean >= 88.0 && r->val_acc.mean <= 97.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "standard %.2f, euler %.2f, rk4 %.2f, all in [88, 97]",
                st.val_acc.mean, eu.val_acc.mean, rk.val_acc.mean);
  report("criterion 8 (squares 2D&4C comparison):", pass, buf);
  CHECK(pass);
}

TEST_CASE("criterion 9: seed sensitivity on donut 2D&6C") {
  const ExperimentResult res = run_cell("donut_2d_6c", "rk4", 16, 100);
  const bool pass = res.val_acc.stddev <= 2.5;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "std over 4 repetitions %.3f <= 2.5", res.val_acc.stddev);
  report("criterion 9 (repetition sensitivity):", pass, buf);
  CHECK(pass);
}
