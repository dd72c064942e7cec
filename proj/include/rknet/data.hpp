#pragma once

#include <string>
#include <vector>

#include "rknet/numerics.hpp"

namespace rknet {

struct LabeledDataset {
  std::string name;
  std::uint64_t seed = 0;
  int dim = 0;
  int classes = 0;
  std::vector<Vector> samples;
  std::vector<Vector> labels;  // one-hot

  int size() const { return static_cast<int>(samples.size()); }
  int label_index(int i) const;
};

struct SplitDataset {
  LabeledDataset train;
  LabeledDataset val;
  double ratio = 0.0;
};

/// Deterministic point-dataset generators. Geometry per generator:
///   donut_1d      two concentric circles r = 0.5 / 1.0, radial noise
///   donut_2d      center blob vs annulus at r = 1.0
///   squares_2d    2x2 checkerboard of [-1,1]^2, 2 classes by parity
///   spiral        two interleaved Archimedean arms
///   donut_2d_6c / donut_3d_{2c,3c,6c}   C rings/shells, radii in [0.3, 1.2]
///   squares_2d_4c / squares_3d_4c       quadrant/octant classes
/// Class counts are balanced within +-1 and all coordinates land in
/// [-1.5, 1.5]^d. Noise overlaps the class boundaries on purpose, which
/// caps the achievable accuracy.
LabeledDataset gen_point_dataset(const std::string& name, int n, std::uint64_t seed);
const std::vector<std::string>& point_dataset_names();

/// IDX image/label pair (big-endian magics 0x803 / 0x801). Pixels are
/// scaled to [0,1] and images flattened row-major; labels one-hot over 10
/// classes.
LabeledDataset load_idx_dataset(const std::string& images_path, const std::string& labels_path);

// Stratified split: per-class seeded shuffle, then ratio-sized prefix into
// train and the remainder into val.
SplitDataset split(const LabeledDataset& ds, double ratio, std::uint64_t seed);

// CSV round trip: header "dim=<d>,classes=<C>", rows "x1,...,xd,label".
// Values are written with full precision so load(save(ds)) == ds.
void save_csv(const LabeledDataset& ds, const std::string& path);
LabeledDataset load_csv(const std::string& path);

LabeledDataset take_prefix(const LabeledDataset& ds, int n);

}  // namespace rknet
