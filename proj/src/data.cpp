#include "rknet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace rknet {

int LabeledDataset::label_index(int i) const {
  const Vector& l = labels[i];
  for (size_t k = 0; k < l.size(); ++k)
    if (l[k] == 1.0) return static_cast<int>(k);
  throw DataError("label " + std::to_string(i) + " is not one-hot");
}

namespace {

constexpr double kBox = 1.5;  // generated samples stay inside [-kBox, kBox]^d

double clampc(double v) { return std::clamp(v, -kBox, kBox); }

Vector one_hot(int c, int classes) {
  Vector l(classes, 0.0);
  l[c] = 1.0;
  return l;
}

// radii equally spaced in [0.3, 1.2]
double ring_radius(int c, int classes) {
  if (classes == 1) return 0.75;
  return 0.3 + 0.9 * static_cast<double>(c) / (classes - 1);
}

Vector sphere_direction(Rng& rng) {
  double x, y, z, n;
  do {
    x = rng.gaussian(0.0, 1.0);
    y = rng.gaussian(0.0, 1.0);
    z = rng.gaussian(0.0, 1.0);
    n = std::sqrt(x * x + y * y + z * z);
  } while (n < 1e-12);
  return {x / n, y / n, z / n};
}

struct GenSpec {
  int dim;
  int classes;
};

const std::vector<std::pair<std::string, GenSpec>>& generator_table() {
  static const std::vector<std::pair<std::string, GenSpec>> table = {
      {"donut_1d", {2, 2}},      {"donut_2d", {2, 2}},      {"squares_2d", {2, 2}},
      {"spiral", {2, 2}},        {"donut_3d_2c", {3, 2}},   {"donut_2d_6c", {2, 6}},
      {"donut_3d_3c", {3, 3}},   {"donut_3d_6c", {3, 6}},   {"squares_2d_4c", {2, 4}},
      {"squares_3d_4c", {3, 4}},
  };
  return table;
}

Vector gen_sample(const std::string& name, int c, int classes, Rng& rng) {
  using std::numbers::pi;
  if (name == "donut_1d") {
    // overlapping radial noise caps accuracy near 90%
    const double base = c == 0 ? 0.5 : 1.0;
    const double theta = rng.uniform(0.0, 2.0 * pi);
    const double r = base + rng.gaussian(0.0, 0.2);
    return {clampc(r * std::cos(theta)), clampc(r * std::sin(theta))};
  }
  if (name == "donut_2d") {
    if (c == 0) return {clampc(rng.gaussian(0.0, 0.22)), clampc(rng.gaussian(0.0, 0.22))};
    const double theta = rng.uniform(0.0, 2.0 * pi);
    const double r = 1.15 + rng.gaussian(0.0, 0.10);
    return {clampc(r * std::cos(theta)), clampc(r * std::sin(theta))};
  }
  if (name == "squares_2d" || name == "squares_2d_4c") {
    // rejection-sample the quadrant matching the requested class, then fuzz
    double x, y;
    int cell;
    do {
      x = rng.uniform(-1.0, 1.0);
      y = rng.uniform(-1.0, 1.0);
      const int q = (x > 0.0 ? 2 : 0) + (y > 0.0 ? 1 : 0);
      cell = name == "squares_2d" ? ((x > 0.0) != (y > 0.0) ? 1 : 0) : q;
    } while (cell != c);
    return {clampc(x + rng.gaussian(0.0, 0.05)), clampc(y + rng.gaussian(0.0, 0.05))};
  }
  if (name == "squares_3d_4c") {
    double x, y;
    int cell;
    do {
      x = rng.uniform(-1.0, 1.0);
      y = rng.uniform(-1.0, 1.0);
      cell = (x > 0.0 ? 2 : 0) + (y > 0.0 ? 1 : 0);
    } while (cell != c);
    const double z = rng.uniform(-1.0, 1.0);
    return {clampc(x + rng.gaussian(0.0, 0.05)), clampc(y + rng.gaussian(0.0, 0.05)),
            clampc(z + rng.gaussian(0.0, 0.05))};
  }
  if (name == "spiral") {
    const double theta = rng.uniform(0.3 * pi, 2.5 * pi);
    const double r = 1.4 * theta / (2.5 * pi);
    double x = r * std::cos(theta);
    double y = r * std::sin(theta);
    if (c == 1) {  // second arm rotated by pi
      x = -x;
      y = -y;
    }
    return {clampc(x + rng.gaussian(0.0, 0.02)), clampc(y + rng.gaussian(0.0, 0.02))};
  }
  if (name == "donut_2d_6c") {
    const double theta = rng.uniform(0.0, 2.0 * pi);
    const double r = ring_radius(c, classes) + rng.gaussian(0.0, 0.06);
    return {clampc(r * std::cos(theta)), clampc(r * std::sin(theta))};
  }
  // spherical shells: donut_3d_{2c,3c,6c}
  Vector dir = sphere_direction(rng);
  const double r = ring_radius(c, classes) + rng.gaussian(0.0, 0.06);
  return {clampc(r * dir[0]), clampc(r * dir[1]), clampc(r * dir[2])};
}

}  // namespace

const std::vector<std::string>& point_dataset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, spec] : generator_table()) v.push_back(n);
    return v;
  }();
  return names;
}

LabeledDataset gen_point_dataset(const std::string& name, int n, std::uint64_t seed) {
  const auto& table = generator_table();
  const auto it = std::find_if(table.begin(), table.end(),
                               [&](const auto& e) { return e.first == name; });
  if (it == table.end()) throw DataError("unknown dataset name: " + name);
  const auto [dim, classes] = it->second;
  if (n < classes) throw DataError("dataset " + name + " needs at least " + std::to_string(classes) + " samples");

  LabeledDataset ds;
  ds.name = name;
  ds.seed = seed;
  ds.dim = dim;
  ds.classes = classes;
  ds.samples.reserve(n);
  ds.labels.reserve(n);
  Rng rng(derive_seed(seed, 0xda7a));
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;  // balanced within +-1
    ds.samples.push_back(gen_sample(name, c, classes, rng));
    ds.labels.push_back(one_hot(c, classes));
  }
  return ds;
}

namespace {

std::uint32_t read_u32_be(std::ifstream& in, const std::string& path) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw DataError(path + ": truncated header");
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

}  // namespace

LabeledDataset load_idx_dataset(const std::string& images_path, const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw DataError("cannot open " + images_path);
  if (read_u32_be(img, images_path) != 0x00000803u)
    throw DataError(images_path + ": bad magic, expected 0x00000803");
  const std::uint32_t n = read_u32_be(img, images_path);
  const std::uint32_t rows = read_u32_be(img, images_path);
  const std::uint32_t cols = read_u32_be(img, images_path);

  std::ifstream lbl(labels_path, std::ios::binary);
  if (!lbl) throw DataError("cannot open " + labels_path);
  if (read_u32_be(lbl, labels_path) != 0x00000801u)
    throw DataError(labels_path + ": bad magic, expected 0x00000801");
  const std::uint32_t n_lbl = read_u32_be(lbl, labels_path);
  if (n != n_lbl)
    throw DataError("image/label count mismatch: " + std::to_string(n) + " vs " + std::to_string(n_lbl));

  const size_t d = static_cast<size_t>(rows) * cols;
  LabeledDataset ds;
  ds.name = images_path;
  ds.dim = static_cast<int>(d);
  ds.classes = 10;
  ds.samples.reserve(n);
  ds.labels.reserve(n);
  std::vector<unsigned char> buf(d);
  for (std::uint32_t i = 0; i < n; ++i) {
    if (!img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(d)))
      throw DataError(images_path + ": truncated at image " + std::to_string(i));
    Vector x(d);
    for (size_t k = 0; k < d; ++k) x[k] = buf[k] / 255.0;
    ds.samples.push_back(std::move(x));
    char lc;
    if (!lbl.get(lc)) throw DataError(labels_path + ": truncated at label " + std::to_string(i));
    const int c = static_cast<unsigned char>(lc);
    if (c > 9) throw DataError(labels_path + ": label value " + std::to_string(c) + " out of range");
    ds.labels.push_back(one_hot(c, 10));
  }
  return ds;
}

SplitDataset split(const LabeledDataset& ds, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw DataError("split ratio must be in (0,1)");
  std::vector<std::vector<int>> by_class(ds.classes);
  for (int i = 0; i < ds.size(); ++i) by_class[ds.label_index(i)].push_back(i);

  Rng rng(derive_seed(seed, 0x5b17));
  SplitDataset out;
  out.ratio = ratio;
  for (LabeledDataset* part : {&out.train, &out.val}) {
    part->name = ds.name;
    part->seed = ds.seed;
    part->dim = ds.dim;
    part->classes = ds.classes;
  }
  for (auto& idx : by_class) {
    // Fisher-Yates
    for (size_t i = idx.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(rng.next_u64() % i);
      std::swap(idx[i - 1], idx[j]);
    }
    const size_t n_train = static_cast<size_t>(std::lround(ratio * static_cast<double>(idx.size())));
    for (size_t i = 0; i < idx.size(); ++i) {
      LabeledDataset& part = i < n_train ? out.train : out.val;
      part.samples.push_back(ds.samples[idx[i]]);
      part.labels.push_back(ds.labels[idx[i]]);
    }
  }
  return out;
}

void save_csv(const LabeledDataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << "dim=" << ds.dim << ",classes=" << ds.classes << "\n";
  char buf[32];
  for (int i = 0; i < ds.size(); ++i) {
    for (int j = 0; j < ds.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.samples[i][j]);
      out << buf << ",";
    }
    out << ds.label_index(i) << "\n";
  }
  if (!out) throw DataError("write failed: " + path);
}

LabeledDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  int dim = 0, classes = 0;
  if (std::sscanf(line.c_str(), "dim=%d,classes=%d", &dim, &classes) != 2 || dim < 1 || classes < 2)
    throw DataError(path + ": malformed header '" + line + "'");

  LabeledDataset ds;
  ds.name = path;
  ds.dim = dim;
  ds.classes = classes;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    Vector x(dim);
    std::string field;
    int c = -1;
    try {
      for (int j = 0; j < dim; ++j) {
        if (!std::getline(ss, field, ','))
          throw DataError(path + ": row " + std::to_string(row) + " too short");
        size_t pos = 0;
        x[j] = std::stod(field, &pos);
        if (pos != field.size())
          throw DataError(path + ": row " + std::to_string(row) + " has a malformed value");
      }
      if (!std::getline(ss, field, ','))
        throw DataError(path + ": row " + std::to_string(row) + " is missing the label");
      c = std::stoi(field);
    } catch (const std::logic_error&) {
      throw DataError(path + ": row " + std::to_string(row) + " has a malformed value");
    }
    if (c < 0 || c >= classes)
      throw DataError(path + ": row " + std::to_string(row) + " label out of range");
    ds.samples.push_back(std::move(x));
    ds.labels.push_back(one_hot(c, classes));
  }
  return ds;
}

LabeledDataset take_prefix(const LabeledDataset& ds, int n) {
  if (n < 0 || n > ds.size()) throw DataError("take_prefix: n out of range");
  LabeledDataset out = ds;
  out.samples.assign(ds.samples.begin(), ds.samples.begin() + n);
  out.labels.assign(ds.labels.begin(), ds.labels.begin() + n);
  return out;
}

}  // namespace rknet
