#pragma once

#include <string>
#include <vector>

#include "rknet/data.hpp"
#include "rknet/network.hpp"
#include "rknet/training.hpp"

namespace rknet {

// Percent of argmax-correct predictions; narrow inputs are zero-augmented.
double accuracy(const ModelParams& m, const LabeledDataset& ds);

/// Top-k principal components of a feature cloud, found by power iteration
/// with deflation (tolerance 1e-10, at most 1e4 iterations per component).
/// Component rows are orthonormal; the sign convention makes the first
/// nonzero entry positive. If k exceeds the numerical rank the remaining
/// rows are filled from the orthogonal complement with zero variance and
/// the model is flagged.
struct PcaModel {
  Vector mean;
  Matrix components;          // k x d, orthonormal rows
  Vector explained_variance;  // nonincreasing
  bool rank_deficient = false;
};

PcaModel pca_fit(const std::vector<Vector>& features, int k);
Vector pca_project(const PcaModel& pm, const Vector& v);

/// Class index of every cell center of a regular grid over a 2D box.
struct PredictionGrid {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  int nx = 0, ny = 0;
  std::vector<int> cells;  // row-major, iy * nx + ix

  int cell(int ix, int iy) const { return cells[static_cast<size_t>(iy) * nx + ix]; }
};

PredictionGrid prediction_grid(const ModelParams& m, double xmin, double xmax, double ymin,
                               double ymax, int nx, int ny);

// Static SVG emitters. Output is deterministic: identical payloads give
// byte-identical files. Empty payloads still produce a valid framed plot.
void emit_scatter2d_svg(const std::vector<Vector>& points, const std::vector<int>& labels,
                        const std::string& path);
// Orthographic projection of 3D points under a fixed camera, depth-sorted.
void emit_scatter3d_svg(const std::vector<Vector>& points, const std::vector<int>& labels,
                        const std::string& path);
// One polyline per sample; a small dot marks the start, a large one the end.
void emit_trajectories_svg(const std::vector<std::vector<Vector>>& trajectories,
                           const std::vector<int>& labels, const std::string& path);
void emit_prediction_svg(const PredictionGrid& grid, const std::vector<Vector>& overlay_points,
                         const std::vector<int>& overlay_labels, const std::string& path);
// Two polylines: train (dotted) and validation (solid), accuracy or cost.
void emit_convergence_svg(const Metrics& metrics, bool accuracy_panel, const std::string& path);

}  // namespace rknet
