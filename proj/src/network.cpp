#include "rknet/network.hpp"

#include <cmath>
#include <string>

namespace rknet {

Vector augment(const Vector& x, int d_star) {
  if (d_star < 0) throw ShapeError("augment: negative padding");
  Vector out = x;
  out.resize(x.size() + static_cast<size_t>(d_star), 0.0);
  return out;
}

void f_eval(const LayerParams& p, Activation a, const Vector& y, Vector& z, Vector& f) {
  matvec_into(p.k, y, z);
  if (p.b.size() != z.size()) throw ShapeError("f_eval: bias length mismatch");
  for (size_t i = 0; i < z.size(); ++i) z[i] += p.b[i];
  activate_into(a, z, f);
}

ModelParams init_model(Arch arch, const ButcherTableau& tableau, int width, int depth, int classes,
                       double step, Activation activation, Rng& rng) {
  if (width < 1 || depth < 1 || classes < 2) throw ShapeError("init_model: need width>=1, depth>=1, classes>=2");
  ModelParams m;
  m.arch = arch;
  m.tableau = tableau;
  m.width = width;
  m.step = step;
  m.activation = activation;
  const double bound = std::sqrt(6.0 / (width + width));
  m.layers.resize(depth);
  for (auto& lp : m.layers) {
    lp.k = Matrix(width, width);
    for (double& v : lp.k.data) v = rng.uniform(-bound, bound);
    lp.b.resize(width);
    for (double& v : lp.b) v = rng.uniform(-bound, bound);
  }
  const double head_bound = std::sqrt(6.0 / (width + classes));
  m.head.w = Matrix(classes, width);
  for (double& v : m.head.w.data) v = rng.uniform(-head_bound, head_bound);
  m.head.mu.resize(classes);
  for (double& v : m.head.mu) v = rng.uniform(-head_bound, head_bound);
  return m;
}

namespace {

// One explicit RK layer update; shared by the tracing and output-only paths
// so both produce bit-identical states.
void rk_layer(const ModelParams& m, const LayerParams& lp, const Vector& y_in,
              std::vector<Vector>& sy, std::vector<Vector>& sz, std::vector<Vector>& sf,
              Vector& acc, Vector& y_out) {
  const ButcherTableau& t = m.tableau;
  const double h = m.step;
  sy.resize(t.s);
  sz.resize(t.s);
  sf.resize(t.s);
  for (int i = 0; i < t.s; ++i) {
    Vector& yi = sy[i];
    yi = y_in;
    for (int j = 0; j < i; ++j) {
      const double aij = t.a(i, j);
      if (aij != 0.0) axpy(h * aij, sf[j], yi);
    }
    f_eval(lp, m.activation, yi, sz[i], sf[i]);
  }
  acc.assign(y_in.size(), 0.0);
  for (int i = 0; i < t.s; ++i) axpy(t.beta[i], sf[i], acc);
  y_out.resize(y_in.size());
  for (size_t k = 0; k < y_in.size(); ++k) y_out[k] = y_in[k] + h * acc[k];
}

void check_input(const ModelParams& m, const Vector& x_hat) {
  if (static_cast<int>(x_hat.size()) != m.width)
    throw ShapeError("forward: input has length " + std::to_string(x_hat.size()) +
                     " but model width is " + std::to_string(m.width));
  if (m.arch == Arch::rk && m.tableau.s < 1) throw ShapeError("forward: rk model without tableau");
}

}  // namespace

void forward_into(const ModelParams& m, const Vector& x_hat, ForwardTrace& tr) {
  check_input(m, x_hat);
  const int L = m.depth();
  const int s = m.stages();
  tr.y.resize(L + 1);
  tr.stage_y.resize(L);
  tr.stage_f.resize(L);
  tr.stage_z.resize(L);
  tr.y[0] = x_hat;
  if (m.arch == Arch::standard) {
    for (int l = 0; l < L; ++l) {
      tr.stage_y[l].resize(1);
      tr.stage_z[l].resize(1);
      tr.stage_f[l].resize(1);
      tr.stage_y[l][0] = tr.y[l];
      f_eval(m.layers[l], m.activation, tr.stage_y[l][0], tr.stage_z[l][0], tr.stage_f[l][0]);
      tr.y[l + 1] = tr.stage_f[l][0];
    }
    return;
  }
  Vector acc;
  for (int l = 0; l < L; ++l) {
    (void)s;
    rk_layer(m, m.layers[l], tr.y[l], tr.stage_y[l], tr.stage_z[l], tr.stage_f[l], acc, tr.y[l + 1]);
  }
}

ForwardTrace forward(const ModelParams& m, const Vector& x_hat) {
  ForwardTrace tr;
  forward_into(m, x_hat, tr);
  return tr;
}

ForwardTrace forward_standard(const ModelParams& m, const Vector& x_hat) {
  if (m.arch != Arch::standard) throw ShapeError("forward_standard: model is not a standard net");
  return forward(m, x_hat);
}

ForwardTrace forward_rk(const ModelParams& m, const Vector& x_hat) {
  if (m.arch != Arch::rk) throw ShapeError("forward_rk: model is not an rk net");
  return forward(m, x_hat);
}

void forward_output_into(const ModelParams& m, const Vector& x_hat, Vector& out) {
  check_input(m, x_hat);
  const int L = m.depth();
  if (m.arch == Arch::standard) {
    Vector z;
    Vector y = x_hat;
    for (int l = 0; l < L; ++l) {
      f_eval(m.layers[l], m.activation, y, z, out);
      std::swap(y, out);
    }
    out = y;
    return;
  }
  std::vector<Vector> sy, sz, sf;
  Vector acc;
  Vector y = x_hat;
  for (int l = 0; l < L; ++l) {
    rk_layer(m, m.layers[l], y, sy, sz, sf, acc, out);
    std::swap(y, out);
  }
  out = y;
}

Vector forward_output(const ModelParams& m, const Vector& x_hat) {
  Vector out;
  forward_output_into(m, x_hat, out);
  return out;
}

}  // namespace rknet
