// Acceptance criterion 10: MNIST at desk scale. Needs the IDX files
//   $RKNET_MNIST_DIR/train-images-idx3-ubyte
//   $RKNET_MNIST_DIR/train-labels-idx1-ubyte
// and exits 77 (ctest SKIP) when they are absent. Trains RK4 nets of width
// 28^2+4 (augmented) and 28^2 (plain) on a 10k/2k subset; expect a long
// single-core run.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "rknet/data.hpp"
#include "rknet/network.hpp"
#include "rknet/numerics.hpp"
#include "rknet/training.hpp"

using namespace rknet;
namespace fs = std::filesystem;

namespace {

double mean_final_val_acc(const LabeledDataset& train_set, const LabeledDataset& val_set, int width,
                          int reps) {
  double acc = 0.0;
  for (int rep = 0; rep < reps; ++rep) {
    Rng rng(derive_seed(1000 + width, 100 + rep));
    ModelParams model =
        init_model(Arch::rk, rk4_tableau(), width, 20, 10, 0.1, Activation::tanh, rng);
    TrainConfig tc;
    tc.epochs = 6;  // within the <= 10 epoch budget
    tc.seed = derive_seed(1000 + width, 200 + rep);
    const SplitDataset data{train_set, val_set, 10000.0 / 12000.0};
    const Metrics metrics = train(model, data, tc, [&](const EpochMetrics& em) {
      std::printf("  width=%d rep=%d epoch=%d train=%.2f val=%.2f (%.0fs)\n", width, rep, em.epoch,
                  em.train_acc, em.val_acc, em.seconds);
      std::fflush(stdout);
    });
    acc += metrics.back().val_acc;
  }
  return acc / reps;
}

}  // namespace

int main() {
  const char* dir = std::getenv("RKNET_MNIST_DIR");
  if (dir == nullptr) {
    std::printf("criterion 10 (MNIST desk scale): SKIP (set RKNET_MNIST_DIR to the IDX files)\n");
    return 77;
  }
  const fs::path images = fs::path(dir) / "train-images-idx3-ubyte";
  const fs::path labels = fs::path(dir) / "train-labels-idx1-ubyte";
  if (!fs::exists(images) || !fs::exists(labels)) {
    std::printf("criterion 10 (MNIST desk scale): SKIP (%s missing the IDX files)\n", dir);
    return 77;
  }

  LabeledDataset full = load_idx_dataset(images.string(), labels.string());
  if (full.size() < 12000) {
    std::printf("criterion 10 (MNIST desk scale): FAIL (need 12000 images, got %d)\n", full.size());
    return 1;
  }
  const LabeledDataset subset = take_prefix(full, 12000);
  LabeledDataset train_set = take_prefix(subset, 10000);
  LabeledDataset val_set = subset;
  val_set.samples.assign(subset.samples.begin() + 10000, subset.samples.end());
  val_set.labels.assign(subset.labels.begin() + 10000, subset.labels.end());

  const int d = 28 * 28;
  const double augmented = mean_final_val_acc(train_set, val_set, d + 4, 2);
  const double plain = mean_final_val_acc(train_set, val_set, d, 2);
  const double margin = augmented - plain;

  const bool pass = augmented >= 85.0 && margin >= 0.0;
  std::printf("criterion 10 (MNIST desk scale): %s (augmented %.2f >= 85, margin over plain %.2f >= 0)\n",
              pass ? "PASS" : "FAIL", augmented, margin);
  return pass ? 0 : 1;
}
