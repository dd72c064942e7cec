#pragma once

#include <vector>

#include "rknet/activation.hpp"
#include "rknet/numerics.hpp"
#include "rknet/tableau.hpp"

namespace rknet {

/// Per-layer control u = (K, b): square weight matrix and bias of width d.
struct LayerParams {
  Matrix k;
  Vector b;
};

/// Affine classifier (W, mu); softmax on top is applied by the training ops.
struct ClassifierHead {
  Matrix w;   // classes x width
  Vector mu;  // classes
};

enum class Arch { standard, rk };

struct ModelParams {
  Arch arch = Arch::rk;
  ButcherTableau tableau;  // used when arch == rk
  int width = 0;
  double step = 1.0;  // h; at 1 the euler tableau reduces to a plain ResNet update
  Activation activation = Activation::tanh;
  std::vector<LayerParams> layers;
  ClassifierHead head;

  int depth() const { return static_cast<int>(layers.size()); }
  int classes() const { return head.w.rows; }
  int stages() const { return arch == Arch::rk ? tableau.s : 1; }
};

/// Everything the backward sweep needs, recorded during one forward pass:
/// layer states y^[l], stage states y_i, stage evaluations f_i and the
/// cached pre-activations z_i = K y_i + b.
struct ForwardTrace {
  std::vector<Vector> y;                     // L+1 layer states
  std::vector<std::vector<Vector>> stage_y;  // L x s
  std::vector<std::vector<Vector>> stage_f;  // L x s
  std::vector<std::vector<Vector>> stage_z;  // L x s
};

// Zero-pad x with d_star extra trailing coordinates.
Vector augment(const Vector& x, int d_star);

// z = K y + b, f = sigma(z).
void f_eval(const LayerParams& p, Activation a, const Vector& y, Vector& z, Vector& f);

// All-layer uniform fan-in initialization: entries ~ U(-1/sqrt(d), 1/sqrt(d)).
ModelParams init_model(Arch arch, const ButcherTableau& tableau, int width, int depth, int classes,
                       double step, Activation activation, Rng& rng);

void forward_into(const ModelParams& m, const Vector& x_hat, ForwardTrace& tr);
ForwardTrace forward(const ModelParams& m, const Vector& x_hat);
ForwardTrace forward_standard(const ModelParams& m, const Vector& x_hat);
ForwardTrace forward_rk(const ModelParams& m, const Vector& x_hat);

// Final layer state only; arithmetic is identical to forward_into's, so the
// result matches the trace's last state bit for bit.
void forward_output_into(const ModelParams& m, const Vector& x_hat, Vector& out);
Vector forward_output(const ModelParams& m, const Vector& x_hat);

}  // namespace rknet
