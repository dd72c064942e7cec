#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include "rknet/data.hpp"

using namespace rknet;
namespace fs = std::filesystem;

namespace {

fs::path tmp_file(const std::string& name) {
  return fs::temp_directory_path() / ("rknet_data_test_" + name);
}

}  // namespace

TEST_CASE("generators are pure functions of (name, n, seed)") {
  for (const std::string& name : point_dataset_names()) {
    const LabeledDataset a = gen_point_dataset(name, 120, 7);
    const LabeledDataset b = gen_point_dataset(name, 120, 7);
    REQUIRE(a.size() == 120);
    for (int i = 0; i < a.size(); ++i) {
      CHECK(a.samples[i] == b.samples[i]);
      CHECK(a.labels[i] == b.labels[i]);
    }
    const LabeledDataset c = gen_point_dataset(name, 120, 8);
    bool any_diff = false;
    for (int i = 0; i < a.size() && !any_diff; ++i) any_diff = a.samples[i] != c.samples[i];
    CHECK(any_diff);
  }
}

TEST_CASE("donut_2d is balanced 750/750 at n=1500") {
  const LabeledDataset ds = gen_point_dataset("donut_2d", 1500, 42);
  CHECK(ds.size() == 1500);
  CHECK(ds.classes == 2);
  int c0 = 0;
  for (int i = 0; i < ds.size(); ++i) c0 += ds.label_index(i) == 0;
  CHECK(c0 == 750);
}

TEST_CASE("class counts are balanced within one for every generator") {
  for (const std::string& name : point_dataset_names()) {
    const LabeledDataset ds = gen_point_dataset(name, 1001, 3);
    std::map<int, int> counts;
    for (int i = 0; i < ds.size(); ++i) counts[ds.label_index(i)]++;
    CHECK(static_cast<int>(counts.size()) == ds.classes);
    int lo = ds.size(), hi = 0;
    for (const auto& [c, k] : counts) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    CHECK(hi - lo <= 1);
  }
}

TEST_CASE("donut_2d_6c has six rings with strictly increasing radii") {
  const LabeledDataset ds = gen_point_dataset("donut_2d_6c", 1500, 5);
  CHECK(ds.classes == 6);
  std::vector<double> mean_radius(6, 0.0);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < ds.size(); ++i) {
    const int c = ds.label_index(i);
    mean_radius[c] += std::hypot(ds.samples[i][0], ds.samples[i][1]);
    counts[c]++;
  }
  for (int c = 0; c < 6; ++c) {
    CHECK(counts[c] > 0);
    mean_radius[c] /= counts[c];
  }
  for (int c = 1; c < 6; ++c) CHECK(mean_radius[c] > mean_radius[c - 1]);
}

TEST_CASE("samples stay inside the bounding box") {
  for (const std::string& name : point_dataset_names()) {
    const LabeledDataset ds = gen_point_dataset(name, 2000, 11);
    for (const Vector& x : ds.samples)
      for (double v : x) {
        CHECK(v >= -1.5);
        CHECK(v <= 1.5);
      }
  }
}

TEST_CASE("unknown generator name is rejected") {
  CHECK_THROWS_AS(gen_point_dataset("nonexistent", 100, 1), DataError);
}

TEST_CASE("split: sizes, determinism, stratification") {
  const LabeledDataset ds = gen_point_dataset("donut_2d", 1500, 42);
  const SplitDataset parts = split(ds, 0.8, 9);
  CHECK(parts.train.size() == 1200);
  CHECK(parts.val.size() == 300);

  const SplitDataset again = split(ds, 0.8, 9);
  for (int i = 0; i < parts.train.size(); ++i) CHECK(parts.train.samples[i] == again.train.samples[i]);

  const LabeledDataset six = gen_point_dataset("donut_2d_6c", 1500, 4);
  const SplitDataset sp = split(six, 0.8, 2);
  std::map<int, int> train_counts, total_counts;
  for (int i = 0; i < sp.train.size(); ++i) train_counts[sp.train.label_index(i)]++;
  for (int i = 0; i < six.size(); ++i) total_counts[six.label_index(i)]++;
  for (const auto& [c, total] : total_counts) {
    const double frac = static_cast<double>(train_counts[c]) / total;
    CHECK(std::fabs(frac - 0.8) <= 0.02);
  }
  CHECK(sp.train.size() + sp.val.size() == six.size());

  CHECK_THROWS_AS(split(ds, 0.0, 1), DataError);
  CHECK_THROWS_AS(split(ds, 1.0, 1), DataError);
}

TEST_CASE("csv round trip is exact") {
  for (const std::string& name : {std::string("spiral"), std::string("donut_3d_6c")}) {
    const LabeledDataset ds = gen_point_dataset(name, 200, 31);
    const fs::path path = tmp_file(name + ".csv");
    save_csv(ds, path.string());
    const LabeledDataset back = load_csv(path.string());
    CHECK(back.dim == ds.dim);
    CHECK(back.classes == ds.classes);
    REQUIRE(back.size() == ds.size());
    for (int i = 0; i < ds.size(); ++i) {
      CHECK(back.samples[i] == ds.samples[i]);
      CHECK(back.label_index(i) == ds.label_index(i));
    }
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    char want[64];
    std::snprintf(want, sizeof(want), "dim=%d,classes=%d", ds.dim, ds.classes);
    CHECK(header == want);
    fs::remove(path);
  }
}

TEST_CASE("csv loader rejects malformed input") {
  const fs::path path = tmp_file("bad.csv");
  {
    std::ofstream out(path);
    out << "dim=2,classes=2\n0.5,not_a_number,0\n";
  }
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
  {
    std::ofstream out(path);
    out << "dim=2,classes=2\n0.5,0\n";  // row too short
  }
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
  {
    std::ofstream out(path);
    out << "garbage\n";
  }
  CHECK_THROWS_AS(load_csv(path.string()), DataError);
  fs::remove(path);
}

namespace {

void write_be32(std::ofstream& out, std::uint32_t v) {
  const unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                              static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_idx_fixture(const fs::path& images, const fs::path& labels, std::uint32_t n_images,
                       std::uint32_t n_labels) {
  std::ofstream img(images, std::ios::binary);
  write_be32(img, 0x00000803u);
  write_be32(img, n_images);
  write_be32(img, 2);
  write_be32(img, 2);
  const unsigned char pixels[8] = {0, 128, 255, 64, 10, 20, 30, 40};
  img.write(reinterpret_cast<const char*>(pixels), 4 * n_images);

  std::ofstream lbl(labels, std::ios::binary);
  write_be32(lbl, 0x00000801u);
  write_be32(lbl, n_labels);
  const unsigned char lab[2] = {3, 9};
  lbl.write(reinterpret_cast<const char*>(lab), n_labels);
}

}  // namespace

TEST_CASE("idx loader: handcrafted fixture with known bytes") {
  const fs::path img = tmp_file("fixture-images-idx3-ubyte");
  const fs::path lbl = tmp_file("fixture-labels-idx1-ubyte");
  write_idx_fixture(img, lbl, 2, 2);

  const LabeledDataset ds = load_idx_dataset(img.string(), lbl.string());
  CHECK(ds.dim == 4);
  CHECK(ds.classes == 10);
  REQUIRE(ds.size() == 2);
  CHECK(ds.samples[0] == Vector{0.0, 128.0 / 255.0, 1.0, 64.0 / 255.0});
  CHECK(ds.samples[1] == Vector{10.0 / 255.0, 20.0 / 255.0, 30.0 / 255.0, 40.0 / 255.0});
  CHECK(ds.label_index(0) == 3);
  CHECK(ds.label_index(1) == 9);
  fs::remove(img);
  fs::remove(lbl);
}

TEST_CASE("idx loader error contracts") {
  const fs::path img = tmp_file("err-images");
  const fs::path lbl = tmp_file("err-labels");

  write_idx_fixture(img, lbl, 2, 1);  // count mismatch
  CHECK_THROWS_WITH_AS(load_idx_dataset(img.string(), lbl.string()),
                       doctest::Contains("count mismatch"), DataError);

  {
    std::ofstream bad(img, std::ios::binary);
    write_be32(bad, 0x00000777u);
  }
  CHECK_THROWS_WITH_AS(load_idx_dataset(img.string(), lbl.string()), doctest::Contains("magic"),
                       DataError);

  {
    std::ofstream trunc(img, std::ios::binary);
    write_be32(trunc, 0x00000803u);
    write_be32(trunc, 2);
    write_be32(trunc, 2);
    write_be32(trunc, 2);
    const unsigned char pixels[3] = {1, 2, 3};  // 8 bytes promised, 3 delivered
    trunc.write(reinterpret_cast<const char*>(pixels), 3);
  }
  {
    std::ofstream l2(lbl, std::ios::binary);
    write_be32(l2, 0x00000801u);
    write_be32(l2, 2);
    const unsigned char lab[2] = {1, 2};
    l2.write(reinterpret_cast<const char*>(lab), 2);
  }
  CHECK_THROWS_WITH_AS(load_idx_dataset(img.string(), lbl.string()), doctest::Contains("truncated"),
                       DataError);
  fs::remove(img);
  fs::remove(lbl);
}

TEST_CASE("take_prefix keeps order and metadata") {
  const LabeledDataset ds = gen_point_dataset("spiral", 100, 1);
  const LabeledDataset head = take_prefix(ds, 10);
  CHECK(head.size() == 10);
  CHECK(head.dim == ds.dim);
  for (int i = 0; i < 10; ++i) CHECK(head.samples[i] == ds.samples[i]);
  CHECK_THROWS_AS(take_prefix(ds, 101), DataError);
}
