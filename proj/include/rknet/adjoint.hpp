#pragma once

#include "rknet/network.hpp"

namespace rknet {

/// Adjoint states p^[l], stage adjoints p_i and stage evaluations
/// g_i = -f_y(u, y_i)^T p_i from one backward sweep.
struct AdjointTrace {
  std::vector<Vector> p;                     // L+1, p[L] = terminal gradient
  std::vector<std::vector<Vector>> stage_p;  // L x s
  std::vector<std::vector<Vector>> stage_g;  // L x s
};

/// Gradients of the cost with respect to every trainable parameter;
/// shapes mirror ModelParams exactly.
struct ParamGrads {
  std::vector<Matrix> dk;
  std::vector<Vector> db;
  Matrix dw;
  Vector dmu;

  static ParamGrads zeros_like(const ModelParams& m);
  void set_zero();
};

/// Backward sweep for rk models.
///
/// Within each layer the stage adjoints are solved in descending order,
///   p_i = p^[l+1] + h sum_j (a_{j,i} beta_j / beta_i) f_y(u, y_j)^T p_j,
/// which for strictly lower-triangular A references only p_j with j > i.
/// The Jacobian transpose is applied as K^T (sigma'(z) o p) from the cached
/// pre-activations; no stage Jacobian is ever materialized.
AdjointTrace adjoint_sweep(const ModelParams& m, const ForwardTrace& tr, const Vector& p_terminal);

// dK^[l] += scale * h * sum_i beta_i (sigma'(z_i) o p_i) y_i^T  (db analogous).
// The sum over stages accounts for the control being shared by all stages
// of a layer. Head gradients are left untouched.
void accumulate_param_grads(const ModelParams& m, const ForwardTrace& tr, const AdjointTrace& adj,
                            double batch_scale, ParamGrads& out);
ParamGrads param_grads(const ModelParams& m, const ForwardTrace& tr, const AdjointTrace& adj,
                       double batch_scale);

// Plain reverse-mode chain rule through y^[l+1] = sigma(K y^[l] + b) for
// standard nets.
void accumulate_standard_backprop(const ModelParams& m, const ForwardTrace& tr,
                                  const Vector& p_terminal, double batch_scale, ParamGrads& out);
ParamGrads standard_backprop(const ModelParams& m, const ForwardTrace& tr, const Vector& p_terminal);

// Central finite differences of the per-sample cross-entropy cost with
// respect to every parameter entry (layers and head). Verification oracle;
// shares no code with the adjoint path.
ParamGrads finite_diff_grads(const ModelParams& m, const Vector& x_hat, const Vector& label,
                             double epsilon);

// Per-sample cost the finite-difference oracle differentiates.
double sample_cost(const ModelParams& m, const Vector& x_hat, const Vector& label);

}  // namespace rknet
