#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "rknet/analysis.hpp"

using namespace rknet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int count_occurrences(const std::string& hay, const std::string& needle) {
  int n = 0;
  for (size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

fs::path tmp_file(const std::string& name) {
  return fs::temp_directory_path() / ("rknet_analysis_test_" + name);
}

// identity-flow model: zero layer parameters, identity head
ModelParams passthrough_model(int width, int classes) {
  Rng rng(1);
  ModelParams m = init_model(Arch::rk, euler_tableau(), width, 1, classes, 0.1, Activation::tanh, rng);
  for (LayerParams& lp : m.layers) {
    lp.k = Matrix(width, width);
    lp.b.assign(width, 0.0);
  }
  m.head.w = Matrix(classes, width);
  for (int c = 0; c < classes && c < width; ++c) m.head.w(c, c) = 1.0;
  m.head.mu.assign(classes, 0.0);
  return m;
}

}  // namespace

TEST_CASE("accuracy: hand-counted fixture and constant predictor") {
  // passthrough classifies by argmax of the first two coordinates
  ModelParams m = passthrough_model(2, 2);
  LabeledDataset ds;
  ds.dim = 2;
  ds.classes = 2;
  // 7 of 10 labels match argmax, 3 do not
  const std::vector<std::pair<Vector, int>> rows = {
      {{1.0, 0.0}, 0}, {{0.9, 0.1}, 0}, {{0.2, 0.8}, 1}, {{0.1, 0.9}, 1}, {{2.0, 1.0}, 0},
      {{1.0, 2.0}, 1}, {{0.6, 0.4}, 0}, {{0.4, 0.6}, 0}, {{0.8, 0.2}, 1}, {{0.3, 0.7}, 0}};
  for (const auto& [x, c] : rows) {
    ds.samples.push_back(x);
    Vector l(2, 0.0);
    l[c] = 1.0;
    ds.labels.push_back(l);
  }
  CHECK(accuracy(m, ds) == doctest::Approx(70.0));

  // constant predictor on a balanced set scores exactly 50
  ModelParams constant = passthrough_model(2, 2);
  constant.head.w = Matrix(2, 2);
  constant.head.mu = {1.0, 0.0};
  const LabeledDataset donut = gen_point_dataset("donut_2d", 1500, 3);
  CHECK(accuracy(constant, donut) == doctest::Approx(50.0));
}

TEST_CASE("accuracy is invariant under dataset permutation") {
  ModelParams m = passthrough_model(2, 2);
  LabeledDataset ds = gen_point_dataset("squares_2d", 300, 9);
  const double before = accuracy(m, ds);
  std::reverse(ds.samples.begin(), ds.samples.end());
  std::reverse(ds.labels.begin(), ds.labels.end());
  CHECK(accuracy(m, ds) == before);
}

TEST_CASE("pca: rank-1 data recovers the line direction") {
  Rng rng(2);
  const Vector dir = {3.0 / 5.0, 0.0, 4.0 / 5.0};
  std::vector<Vector> feats;
  for (int i = 0; i < 200; ++i) {
    const double t = rng.gaussian(0.0, 2.0);
    feats.push_back({0.5 + t * dir[0], -1.0 + t * dir[1], 2.0 + t * dir[2]});
  }
  const PcaModel pm = pca_fit(feats, 1);
  for (int j = 0; j < 3; ++j) CHECK(std::fabs(std::fabs(pm.components(0, j)) - dir[j]) < 1e-8);
  // sign convention: first nonzero entry positive
  CHECK(pm.components(0, 0) > 0.0);
}

TEST_CASE("pca: isotropic cloud has near-equal variances") {
  Rng rng(3);
  std::vector<Vector> feats;
  for (int i = 0; i < 10000; ++i) feats.push_back({rng.gaussian(0, 1), rng.gaussian(0, 1)});
  const PcaModel pm = pca_fit(feats, 2);
  CHECK(pm.explained_variance[0] / pm.explained_variance[1] < 1.1);
  CHECK(pm.explained_variance[0] >= pm.explained_variance[1]);
}

TEST_CASE("pca: orthonormal components and variance self-consistency") {
  Rng rng(4);
  std::vector<Vector> feats;
  for (int i = 0; i < 500; ++i) {
    Vector f(5);
    for (int j = 0; j < 5; ++j) f[j] = rng.gaussian(0, 1.0 + j);
    feats.push_back(f);
  }
  const int k = 3;
  const PcaModel pm = pca_fit(feats, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      double ip = 0;
      for (int j = 0; j < 5; ++j) ip += pm.components(a, j) * pm.components(b, j);
      CHECK(std::fabs(ip - (a == b ? 1.0 : 0.0)) < 1e-10);
    }

  // variance along component 0 equals the reported eigenvalue
  double mean0 = 0;
  std::vector<double> proj0;
  for (const Vector& f : feats) {
    const Vector p = pca_project(pm, f);
    proj0.push_back(p[0]);
    mean0 += p[0];
  }
  mean0 /= proj0.size();
  double var0 = 0;
  for (double v : proj0) var0 += (v - mean0) * (v - mean0);
  var0 /= proj0.size() - 1;
  CHECK(std::fabs(var0 - pm.explained_variance[0]) < 1e-8);

  CHECK(std::is_sorted(pm.explained_variance.rbegin(), pm.explained_variance.rend()));
}

TEST_CASE("pca projection preserves inner products on the component span") {
  Rng rng(5);
  std::vector<Vector> feats;
  for (int i = 0; i < 300; ++i) {
    Vector f(4);
    for (int j = 0; j < 4; ++j) f[j] = rng.gaussian(0, 1 + j);
    feats.push_back(f);
  }
  const PcaModel pm = pca_fit(feats, 4);  // full basis: projection is an isometry
  const Vector a = rng.gaussian_vec(4, 0, 1);
  const Vector b = rng.gaussian_vec(4, 0, 1);
  Vector ac = a, bc = b;
  for (int j = 0; j < 4; ++j) {
    ac[j] -= pm.mean[j];
    bc[j] -= pm.mean[j];
  }
  const double direct = dot(ac, bc);
  const double projected = dot(pca_project(pm, a), pca_project(pm, b));
  CHECK(std::fabs(direct - projected) < 1e-8);
}

TEST_CASE("pca: rank deficiency fills the complement with zero variance") {
  std::vector<Vector> feats;
  for (int i = 0; i < 50; ++i) feats.push_back({static_cast<double>(i), 2.0 * i, 0.0});
  const PcaModel pm = pca_fit(feats, 3);
  CHECK(pm.rank_deficient);
  CHECK(pm.explained_variance[1] == 0.0);
  CHECK(pm.explained_variance[2] == 0.0);
  // still orthonormal
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double ip = 0;
      for (int j = 0; j < 3; ++j) ip += pm.components(a, j) * pm.components(b, j);
      CHECK(std::fabs(ip - (a == b ? 1.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("prediction grid: constant predictor and single cell") {
  ModelParams constant = passthrough_model(2, 2);
  constant.head.w = Matrix(2, 2);
  constant.head.mu = {0.0, 1.0};
  const PredictionGrid g = prediction_grid(constant, -1, 1, -1, 1, 8, 8);
  for (int c : g.cells) CHECK(c == 1);

  ModelParams m = passthrough_model(2, 2);
  const PredictionGrid single = prediction_grid(m, 0.0, 1.0, 0.0, 0.5, 1, 1);
  REQUIRE(single.cells.size() == 1);
  const Vector y = forward_output(m, augment({0.5, 0.25}, 0));
  CHECK(single.cells[0] == classify(m.head, y));
}

TEST_CASE("svg: deterministic bytes and valid empty documents") {
  const fs::path p1 = tmp_file("a.svg"), p2 = tmp_file("b.svg");
  emit_scatter2d_svg({}, {}, p1.string());
  const std::string empty = slurp(p1);
  CHECK(empty.find("<svg") != std::string::npos);
  CHECK(empty.find("</svg>") != std::string::npos);
  CHECK(count_occurrences(empty, "<circle") == 0);

  std::vector<Vector> pts = {{0.0, 0.0}, {1.0, 0.5}, {-0.4, 0.9}};
  std::vector<int> labels = {0, 1, 0};
  emit_scatter2d_svg(pts, labels, p1.string());
  emit_scatter2d_svg(pts, labels, p2.string());
  CHECK(slurp(p1) == slurp(p2));
  CHECK(count_occurrences(slurp(p1), "<circle") == 3);
  fs::remove(p1);
  fs::remove(p2);
}

TEST_CASE("svg: convergence files carry exactly two polylines each") {
  Metrics metrics;
  for (int e = 0; e <= 3; ++e)
    metrics.push_back({e, 50.0 + 10 * e, 48.0 + 10 * e, 0.7 - 0.1 * e, 0.75 - 0.1 * e, 0.0});
  const fs::path acc = tmp_file("conv_acc.svg"), cost = tmp_file("conv_cost.svg");
  emit_convergence_svg(metrics, true, acc.string());
  emit_convergence_svg(metrics, false, cost.string());
  CHECK(count_occurrences(slurp(acc), "<polyline") == 2);
  CHECK(count_occurrences(slurp(cost), "<polyline") == 2);

  const fs::path empty = tmp_file("conv_empty.svg");
  emit_convergence_svg({}, true, empty.string());
  CHECK(count_occurrences(slurp(empty), "<polyline") == 0);
  CHECK(slurp(empty).find("</svg>") != std::string::npos);
  fs::remove(acc);
  fs::remove(cost);
  fs::remove(empty);
}

TEST_CASE("svg: trajectories draw one polyline and two endpoint dots per sample") {
  std::vector<std::vector<Vector>> trajs = {
      {{0.0, 0.0}, {0.5, 0.2}, {1.0, 0.4}},
      {{1.0, 1.0}, {0.5, 0.8}},
  };
  const fs::path p = tmp_file("traj.svg");
  emit_trajectories_svg(trajs, {0, 1}, p.string());
  const std::string body = slurp(p);
  CHECK(count_occurrences(body, "<polyline") == 2);
  CHECK(count_occurrences(body, "<circle") == 4);
  fs::remove(p);
}

TEST_CASE("svg: prediction grid rectangles cover the resolution") {
  ModelParams m = passthrough_model(2, 2);
  const PredictionGrid g = prediction_grid(m, -1, 1, -1, 1, 6, 5);
  const fs::path p = tmp_file("pred.svg");
  emit_prediction_svg(g, {}, {}, p.string());
  CHECK(count_occurrences(slurp(p), "<rect") == 6 * 5 + 2);  // cells + background + frame
  fs::remove(p);
}

TEST_CASE("3d scatter projects deterministically") {
  std::vector<Vector> pts = {{0.1, 0.2, 0.3}, {-0.5, 0.4, 0.0}, {0.9, -0.9, 0.5}};
  const fs::path p1 = tmp_file("s3a.svg"), p2 = tmp_file("s3b.svg");
  emit_scatter3d_svg(pts, {0, 1, 2}, p1.string());
  emit_scatter3d_svg(pts, {0, 1, 2}, p2.string());
  CHECK(slurp(p1) == slurp(p2));
  CHECK(count_occurrences(slurp(p1), "<circle") == 3);
  fs::remove(p1);
  fs::remove(p2);
}
