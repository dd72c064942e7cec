#include "rknet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace rknet {

double accuracy(const ModelParams& m, const LabeledDataset& ds) { return evaluate(m, ds).accuracy; }

namespace {

void ortho_against(const Matrix& components, int count, Vector& v) {
  for (int c = 0; c < count; ++c) {
    double proj = 0.0;
    const double* row = components.row(c);
    for (int j = 0; j < components.cols; ++j) proj += row[j] * v[j];
    for (int j = 0; j < components.cols; ++j) v[j] -= proj * row[j];
  }
}

void fix_sign(Vector& v) {
  for (double x : v) {
    if (std::fabs(x) > 1e-12) {
      if (x < 0.0)
        for (double& e : v) e = -e;
      return;
    }
  }
}

}  // namespace

PcaModel pca_fit(const std::vector<Vector>& features, int k) {
  if (features.empty()) throw DataError("pca_fit: no features");
  const int d = static_cast<int>(features.front().size());
  if (k < 1 || k > d) throw ShapeError("pca_fit: k must be in [1, dim]");
  const int n = static_cast<int>(features.size());

  PcaModel pm;
  pm.mean.assign(d, 0.0);
  for (const Vector& f : features) axpy(1.0, f, pm.mean);
  for (double& v : pm.mean) v /= n;

  // sample covariance; n == 1 degenerates to the zero matrix
  Matrix cov(d, d);
  if (n > 1) {
    Vector c(d);
    for (const Vector& f : features) {
      for (int j = 0; j < d; ++j) c[j] = f[j] - pm.mean[j];
      add_outer(cov, 1.0 / (n - 1), c, c);
    }
  }
  double scale = 0.0;
  for (int j = 0; j < d; ++j) scale += cov(j, j);
  scale = std::max(scale, 1e-30);

  pm.components = Matrix(k, d);
  pm.explained_variance.assign(k, 0.0);
  Rng rng(0x9c0ffeeULL);
  Vector v(d), w;
  for (int comp = 0; comp < k; ++comp) {
    for (double& e : v) e = rng.uniform(-1.0, 1.0);
    ortho_against(pm.components, comp, v);
    double nv = norm2(v);
    bool deflated_out = nv < 1e-12;
    if (!deflated_out) {
      for (double& e : v) e /= nv;
      for (int it = 0; it < 10000; ++it) {
        matvec_into(cov, v, w);
        ortho_against(pm.components, comp, w);
        const double nw = norm2(w);
        if (nw < 1e-14 * scale) {
          deflated_out = true;
          break;
        }
        double delta = 0.0;
        for (int j = 0; j < d; ++j) {
          w[j] /= nw;
          delta = std::max(delta, std::fabs(w[j] - v[j]));
        }
        std::swap(v, w);
        if (delta <= 1e-10) break;
      }
    }
    if (deflated_out) {
      // exhausted the numerical rank: fill from the orthogonal complement
      pm.rank_deficient = true;
      bool found = false;
      for (int j = 0; j < d && !found; ++j) {
        v.assign(d, 0.0);
        v[j] = 1.0;
        ortho_against(pm.components, comp, v);
        const double nb = norm2(v);
        if (nb > 1e-6) {
          for (double& e : v) e /= nb;
          found = true;
        }
      }
      if (!found) throw NumericError("pca_fit: could not complete an orthonormal basis");
      fix_sign(v);
      for (int j = 0; j < d; ++j) pm.components(comp, j) = v[j];
      pm.explained_variance[comp] = 0.0;
      continue;
    }
    fix_sign(v);
    matvec_into(cov, v, w);
    pm.explained_variance[comp] = dot(v, w);
    for (int j = 0; j < d; ++j) pm.components(comp, j) = v[j];
  }
  return pm;
}

Vector pca_project(const PcaModel& pm, const Vector& v) {
  if (v.size() != pm.mean.size()) throw ShapeError("pca_project: dimension mismatch");
  Vector c(v.size());
  for (size_t j = 0; j < v.size(); ++j) c[j] = v[j] - pm.mean[j];
  return matvec(pm.components, c);
}

PredictionGrid prediction_grid(const ModelParams& m, double xmin, double xmax, double ymin,
                               double ymax, int nx, int ny) {
  if (nx < 1 || ny < 1) throw ShapeError("prediction_grid: resolution must be >= 1");
  if (m.width < 2) throw ShapeError("prediction_grid: model width below 2");
  PredictionGrid g;
  g.xmin = xmin;
  g.xmax = xmax;
  g.ymin = ymin;
  g.ymax = ymax;
  g.nx = nx;
  g.ny = ny;
  g.cells.resize(static_cast<size_t>(nx) * ny);
  const int d_star = m.width - 2;
  Vector y;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const Vector center = {xmin + (ix + 0.5) * (xmax - xmin) / nx,
                             ymin + (iy + 0.5) * (ymax - ymin) / ny};
      forward_output_into(m, augment(center, d_star), y);
      g.cells[static_cast<size_t>(iy) * nx + ix] = classify(m.head, y);
    }
  return g;
}

// ---------------------------------------------------------------------------
// SVG emission

namespace {

constexpr int kW = 480;
constexpr int kH = 440;
constexpr int kMargin = 42;

const char* kPalette[10] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* color_for(int label) { return kPalette[((label % 10) + 10) % 10]; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Frame {
  double xmin, xmax, ymin, ymax;

  double px(double x) const { return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin); }
  double py(double y) const { return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin); }
};

Frame frame_for(const std::vector<Vector>& pts2d) {
  Frame f{-1.0, 1.0, -1.0, 1.0};
  if (!pts2d.empty()) {
    f.xmin = f.ymin = 1e300;
    f.xmax = f.ymax = -1e300;
    for (const Vector& p : pts2d) {
      f.xmin = std::min(f.xmin, p[0]);
      f.xmax = std::max(f.xmax, p[0]);
      f.ymin = std::min(f.ymin, p[1]);
      f.ymax = std::max(f.ymax, p[1]);
    }
    const double padx = 0.05 * std::max(1e-9, f.xmax - f.xmin);
    const double pady = 0.05 * std::max(1e-9, f.ymax - f.ymin);
    f.xmin -= padx;
    f.xmax += padx;
    f.ymin -= pady;
    f.ymax += pady;
  }
  return f;
}

void open_svg(std::string& out) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kW) + "\" height=\"" +
         std::to_string(kH) + "\" viewBox=\"0 0 " + std::to_string(kW) + " " + std::to_string(kH) +
         "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void draw_axes(std::string& out, const Frame& f, const std::string& xlabel,
               const std::string& ylabel) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"#333\"/>\n",
                kMargin, kMargin, kW - 2 * kMargin, kH - 2 * kMargin);
  out += buf;
  for (int t = 0; t <= 4; ++t) {
    const double fx = f.xmin + t * (f.xmax - f.xmin) / 4.0;
    const double fy = f.ymin + t * (f.ymax - f.ymin) / 4.0;
    out += "<text x=\"" + fmt(f.px(fx)) + "\" y=\"" + std::to_string(kH - kMargin + 16) +
           "\" font-size=\"10\" text-anchor=\"middle\" fill=\"#333\">" + fmt_tick(fx) + "</text>\n";
    out += "<text x=\"" + std::to_string(kMargin - 6) + "\" y=\"" + fmt(f.py(fy) + 3) +
           "\" font-size=\"10\" text-anchor=\"end\" fill=\"#333\">" + fmt_tick(fy) + "</text>\n";
  }
  if (!xlabel.empty())
    out += "<text x=\"" + std::to_string(kW / 2) + "\" y=\"" + std::to_string(kH - 8) +
           "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">" + xlabel + "</text>\n";
  if (!ylabel.empty())
    out += "<text x=\"12\" y=\"" + std::to_string(kH / 2) + "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\" transform=\"rotate(-90 12 " +
           std::to_string(kH / 2) + ")\">" + ylabel + "</text>\n";
}

void write_svg(const std::string& body, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << body;
  if (!out) throw DataError("write failed: " + path);
}

void scatter_circles(std::string& out, const Frame& f, const std::vector<Vector>& pts,
                     const std::vector<int>& labels) {
  for (size_t i = 0; i < pts.size(); ++i) {
    out += "<circle cx=\"" + fmt(f.px(pts[i][0])) + "\" cy=\"" + fmt(f.py(pts[i][1])) +
           "\" r=\"2.5\" fill=\"" + color_for(i < labels.size() ? labels[i] : 0) +
           "\" fill-opacity=\"0.8\"/>\n";
  }
}

// fixed camera: rotate about z then x, drop the depth coordinate
void project3(const Vector& p, double& x, double& y, double& depth) {
  constexpr double ca = 0.86602540378443864676, sa = 0.5;   // 30 deg about z
  constexpr double cb = 0.64278760968653932632, sb = 0.76604444311897803520;  // 50 deg about x
  const double x1 = ca * p[0] - sa * p[1];
  const double y1 = sa * p[0] + ca * p[1];
  const double z1 = p[2];
  x = x1;
  y = cb * y1 + sb * z1;
  depth = -sb * y1 + cb * z1;
}

}  // namespace

void emit_scatter2d_svg(const std::vector<Vector>& points, const std::vector<int>& labels,
                        const std::string& path) {
  std::string out;
  open_svg(out);
  const Frame f = frame_for(points);
  draw_axes(out, f, "x1", "x2");
  scatter_circles(out, f, points, labels);
  out += "</svg>\n";
  write_svg(out, path);
}

void emit_scatter3d_svg(const std::vector<Vector>& points, const std::vector<int>& labels,
                        const std::string& path) {
  std::vector<Vector> flat(points.size());
  std::vector<double> depth(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    double x, y, dpt;
    project3(points[i], x, y, dpt);
    flat[i] = {x, y};
    depth[i] = dpt;
  }
  std::vector<size_t> order(points.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return depth[a] < depth[b]; });

  std::string out;
  open_svg(out);
  const Frame f = frame_for(flat);
  draw_axes(out, f, "", "");
  for (size_t oi : order) {
    out += "<circle cx=\"" + fmt(f.px(flat[oi][0])) + "\" cy=\"" + fmt(f.py(flat[oi][1])) +
           "\" r=\"2.5\" fill=\"" + color_for(oi < labels.size() ? labels[oi] : 0) +
           "\" fill-opacity=\"0.8\"/>\n";
  }
  out += "</svg>\n";
  write_svg(out, path);
}

void emit_trajectories_svg(const std::vector<std::vector<Vector>>& trajectories,
                           const std::vector<int>& labels, const std::string& path) {
  std::vector<Vector> all;
  for (const auto& t : trajectories) all.insert(all.end(), t.begin(), t.end());
  std::string out;
  open_svg(out);
  const Frame f = frame_for(all);
  draw_axes(out, f, "", "");
  for (size_t i = 0; i < trajectories.size(); ++i) {
    const auto& t = trajectories[i];
    if (t.empty()) continue;
    const char* col = color_for(i < labels.size() ? labels[i] : 0);
    out += "<polyline fill=\"none\" stroke=\"";
    out += col;
    out += "\" stroke-width=\"1\" stroke-opacity=\"0.7\" points=\"";
    for (const Vector& p : t) out += fmt(f.px(p[0])) + "," + fmt(f.py(p[1])) + " ";
    out += "\"/>\n";
    out += "<circle cx=\"" + fmt(f.px(t.front()[0])) + "\" cy=\"" + fmt(f.py(t.front()[1])) +
           "\" r=\"1.6\" fill=\"" + std::string(col) + "\"/>\n";
    out += "<circle cx=\"" + fmt(f.px(t.back()[0])) + "\" cy=\"" + fmt(f.py(t.back()[1])) +
           "\" r=\"3.4\" fill=\"" + std::string(col) + "\"/>\n";
  }
  out += "</svg>\n";
  write_svg(out, path);
}

void emit_prediction_svg(const PredictionGrid& grid, const std::vector<Vector>& overlay_points,
                         const std::vector<int>& overlay_labels, const std::string& path) {
  std::string out;
  open_svg(out);
  const Frame f{grid.xmin, grid.xmax, grid.ymin, grid.ymax};
  const double cw = (f.px(grid.xmax) - f.px(grid.xmin)) / std::max(1, grid.nx);
  const double ch = (f.py(grid.ymin) - f.py(grid.ymax)) / std::max(1, grid.ny);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      const double x = f.px(grid.xmin) + ix * cw;
      const double y = f.py(grid.ymax) + (grid.ny - 1 - iy) * ch;
      out += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" + fmt(cw + 0.5) +
             "\" height=\"" + fmt(ch + 0.5) + "\" fill=\"" + color_for(grid.cell(ix, iy)) +
             "\" fill-opacity=\"0.30\"/>\n";
    }
  scatter_circles(out, f, overlay_points, overlay_labels);
  draw_axes(out, f, "x1", "x2");
  out += "</svg>\n";
  write_svg(out, path);
}

void emit_convergence_svg(const Metrics& metrics, bool accuracy_panel, const std::string& path) {
  std::string out;
  open_svg(out);
  Frame f{0.0, 1.0, 0.0, 1.0};
  if (!metrics.empty()) {
    f.xmin = metrics.front().epoch;
    f.xmax = std::max(double(metrics.back().epoch), f.xmin + 1e-9);
    f.ymin = 1e300;
    f.ymax = -1e300;
    for (const EpochMetrics& em : metrics) {
      const double tv = accuracy_panel ? em.train_acc : em.train_cost;
      const double vv = accuracy_panel ? em.val_acc : em.val_cost;
      f.ymin = std::min({f.ymin, tv, vv});
      f.ymax = std::max({f.ymax, tv, vv});
    }
    const double pad = 0.05 * std::max(1e-9, f.ymax - f.ymin);
    f.ymin -= pad;
    f.ymax += pad;
  }
  draw_axes(out, f, "epoch", accuracy_panel ? "accuracy (%)" : "cost");
  if (!metrics.empty()) {
    // dotted train line, solid validation line
    for (int pass = 0; pass < 2; ++pass) {
      out += pass == 0
                 ? "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" stroke-dasharray=\"3,3\" points=\""
                 : "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
      for (const EpochMetrics& em : metrics) {
        const double v = pass == 0 ? (accuracy_panel ? em.train_acc : em.train_cost)
                                   : (accuracy_panel ? em.val_acc : em.val_cost);
        out += fmt(f.px(em.epoch)) + "," + fmt(f.py(v)) + " ";
      }
      out += "\"/>\n";
    }
  }
  out += "</svg>\n";
  write_svg(out, path);
}

}  // namespace rknet
