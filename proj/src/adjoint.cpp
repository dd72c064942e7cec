#include "rknet/adjoint.hpp"

#include <string>

#include "rknet/training.hpp"

namespace rknet {

ParamGrads ParamGrads::zeros_like(const ModelParams& m) {
  ParamGrads g;
  g.dk.resize(m.depth());
  g.db.resize(m.depth());
  for (int l = 0; l < m.depth(); ++l) {
    g.dk[l] = Matrix(m.width, m.width);
    g.db[l].assign(m.width, 0.0);
  }
  g.dw = Matrix(m.head.w.rows, m.head.w.cols);
  g.dmu.assign(m.head.mu.size(), 0.0);
  return g;
}

void ParamGrads::set_zero() {
  for (auto& k : dk) k.data.assign(k.data.size(), 0.0);
  for (auto& b : db) b.assign(b.size(), 0.0);
  dw.data.assign(dw.data.size(), 0.0);
  dmu.assign(dmu.size(), 0.0);
}

namespace {

void check_trace(const ModelParams& m, const ForwardTrace& tr) {
  if (static_cast<int>(tr.y.size()) != m.depth() + 1 ||
      static_cast<int>(tr.stage_z.size()) != m.depth())
    throw ShapeError("adjoint: trace does not match model depth " + std::to_string(m.depth()));
  if (m.depth() > 0 && static_cast<int>(tr.stage_z[0].size()) != m.stages())
    throw ShapeError("adjoint: trace stage count does not match tableau");
}

// w = K^T (sigma'(z) o p), reusing `hadamard` as scratch.
void jacobian_t_apply(const LayerParams& lp, Activation act, const Vector& z, const Vector& p,
                      Vector& hadamard, Vector& w) {
  hadamard.resize(z.size());
  for (size_t k = 0; k < z.size(); ++k) hadamard[k] = activate_deriv(act, z[k]) * p[k];
  matvec_t_into(lp.k, hadamard, w);
}

}  // namespace

AdjointTrace adjoint_sweep(const ModelParams& m, const ForwardTrace& tr, const Vector& p_terminal) {
  if (m.arch != Arch::rk) throw ShapeError("adjoint_sweep: model is not an rk net");
  check_trace(m, tr);
  if (static_cast<int>(p_terminal.size()) != m.width)
    throw ShapeError("adjoint_sweep: terminal gradient width mismatch");

  const int L = m.depth();
  const int s = m.tableau.s;
  const double h = m.step;
  const ButcherTableau& t = m.tableau;

  AdjointTrace adj;
  adj.p.resize(L + 1);
  adj.stage_p.assign(L, std::vector<Vector>(s));
  adj.stage_g.assign(L, std::vector<Vector>(s));
  adj.p[L] = p_terminal;

  std::vector<Vector> w(s);  // w_i = f_y(u, y_i)^T p_i
  Vector hadamard;
  for (int l = L - 1; l >= 0; --l) {
    const Vector& p_next = adj.p[l + 1];
    // descending stage order: p_i depends only on p_j with j > i
    for (int i = s - 1; i >= 0; --i) {
      Vector& pi = adj.stage_p[l][i];
      pi = p_next;
      for (int j = i + 1; j < s; ++j) {
        const double aji = t.a(j, i);
        if (aji != 0.0) axpy(h * aji * t.beta[j] / t.beta[i], w[j], pi);
      }
      jacobian_t_apply(m.layers[l], m.activation, tr.stage_z[l][i], pi, hadamard, w[i]);
      adj.stage_g[l][i].resize(m.width);
      for (int k = 0; k < m.width; ++k) adj.stage_g[l][i][k] = -w[i][k];
    }
    Vector& pl = adj.p[l];
    pl = p_next;
    for (int i = 0; i < s; ++i) axpy(h * t.beta[i], w[i], pl);
  }
  return adj;
}

void accumulate_param_grads(const ModelParams& m, const ForwardTrace& tr, const AdjointTrace& adj,
                            double batch_scale, ParamGrads& out) {
  if (m.arch != Arch::rk) throw ShapeError("param_grads: model is not an rk net");
  check_trace(m, tr);
  if (adj.stage_p.size() != tr.stage_z.size()) throw ShapeError("param_grads: traces inconsistent");

  const int L = m.depth();
  const int s = m.tableau.s;
  const double h = m.step;
  Vector g;
  for (int l = 0; l < L; ++l) {
    for (int i = 0; i < s; ++i) {
      const Vector& z = tr.stage_z[l][i];
      const Vector& p = adj.stage_p[l][i];
      g.resize(z.size());
      const double c = batch_scale * h * m.tableau.beta[i];
      for (size_t k = 0; k < z.size(); ++k) g[k] = activate_deriv(m.activation, z[k]) * p[k];
      add_outer(out.dk[l], c, g, tr.stage_y[l][i]);
      axpy(c, g, out.db[l]);
    }
  }
}

ParamGrads param_grads(const ModelParams& m, const ForwardTrace& tr, const AdjointTrace& adj,
                       double batch_scale) {
  ParamGrads out = ParamGrads::zeros_like(m);
  accumulate_param_grads(m, tr, adj, batch_scale, out);
  return out;
}

void accumulate_standard_backprop(const ModelParams& m, const ForwardTrace& tr,
                                  const Vector& p_terminal, double batch_scale, ParamGrads& out) {
  if (m.arch != Arch::standard) throw ShapeError("standard_backprop: model is not a standard net");
  check_trace(m, tr);
  const int L = m.depth();
  Vector p = p_terminal;
  Vector g, p_prev;
  for (int l = L - 1; l >= 0; --l) {
    const Vector& z = tr.stage_z[l][0];
    g.resize(z.size());
    for (size_t k = 0; k < z.size(); ++k) g[k] = activate_deriv(m.activation, z[k]) * p[k];
    add_outer(out.dk[l], batch_scale, g, tr.y[l]);
    axpy(batch_scale, g, out.db[l]);
    matvec_t_into(m.layers[l].k, g, p_prev);
    std::swap(p, p_prev);
  }
}

ParamGrads standard_backprop(const ModelParams& m, const ForwardTrace& tr, const Vector& p_terminal) {
  ParamGrads out = ParamGrads::zeros_like(m);
  accumulate_standard_backprop(m, tr, p_terminal, 1.0, out);
  return out;
}

double sample_cost(const ModelParams& m, const Vector& x_hat, const Vector& label) {
  return cross_entropy(m.head, forward_output(m, x_hat), label);
}

ParamGrads finite_diff_grads(const ModelParams& m, const Vector& x_hat, const Vector& label,
                             double epsilon) {
  if (epsilon <= 0.0) throw ShapeError("finite_diff_grads: epsilon must be positive");
  ParamGrads g = ParamGrads::zeros_like(m);
  ModelParams probe = m;
  auto central = [&](double& slot) {
    const double saved = slot;
    slot = saved + epsilon;
    const double up = sample_cost(probe, x_hat, label);
    slot = saved - epsilon;
    const double down = sample_cost(probe, x_hat, label);
    slot = saved;
    return (up - down) / (2.0 * epsilon);
  };
  for (int l = 0; l < m.depth(); ++l) {
    for (size_t idx = 0; idx < probe.layers[l].k.data.size(); ++idx)
      g.dk[l].data[idx] = central(probe.layers[l].k.data[idx]);
    for (size_t idx = 0; idx < probe.layers[l].b.size(); ++idx)
      g.db[l][idx] = central(probe.layers[l].b[idx]);
  }
  for (size_t idx = 0; idx < probe.head.w.data.size(); ++idx)
    g.dw.data[idx] = central(probe.head.w.data[idx]);
  for (size_t idx = 0; idx < probe.head.mu.size(); ++idx)
    g.dmu[idx] = central(probe.head.mu[idx]);
  return g;
}

}  // namespace rknet
