#include "rknet/tableau.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace rknet {

ButcherTableau ButcherTableau::create(Matrix a, Vector beta, Vector c) {
  const int s = static_cast<int>(beta.size());
  if (s < 1) throw ShapeError("tableau: need at least one stage");
  if (a.rows != s || a.cols != s || static_cast<int>(c.size()) != s)
    throw ShapeError("tableau: A must be s x s and beta, c length s");
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j)
      if (a(i, j) != 0.0)
        throw ShapeError("tableau: a[" + std::to_string(i) + "][" + std::to_string(j) +
                         "] nonzero; only explicit schemes are supported");
  for (int i = 0; i < s; ++i)
    if (beta[i] == 0.0)
      throw ShapeError("tableau: beta[" + std::to_string(i) + "] is zero; the adjoint requires nonzero weights");
  ButcherTableau t;
  t.s = s;
  t.a = std::move(a);
  t.beta = std::move(beta);
  t.c = std::move(c);
  return t;
}

ButcherTableau euler_tableau() {
  return ButcherTableau::create(Matrix(1, 1), {1.0}, {0.0});
}

ButcherTableau rk4_tableau() {
  Matrix a(4, 4);
  a(1, 0) = 0.5;
  a(2, 1) = 0.5;
  a(3, 2) = 1.0;
  return ButcherTableau::create(std::move(a), {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0},
                                {0.0, 0.5, 0.5, 1.0});
}

ConjugateTableau conjugate(const ButcherTableau& t) {
  for (int i = 0; i < t.s; ++i)
    if (t.beta[i] == 0.0) throw ShapeError("conjugate: beta has a zero weight");
  ConjugateTableau ct;
  ct.s = t.s;
  ct.beta_tilde = t.beta;
  ct.c_tilde = t.c;
  ct.a_tilde = Matrix(t.s, t.s);
  // a~_{i,j} = beta_j - beta_j a_{j,i} / beta_i solves the condition exactly.
  for (int i = 0; i < t.s; ++i)
    for (int j = 0; j < t.s; ++j)
      ct.a_tilde(i, j) = t.beta[j] - t.beta[j] * t.a(j, i) / t.beta[i];
  return ct;
}

double symplectic_residual(const ButcherTableau& t, const ConjugateTableau& ct) {
  double worst = 0.0;
  for (int i = 0; i < t.s; ++i)
    for (int j = 0; j < t.s; ++j) {
      const double r = t.beta[i] * ct.a_tilde(i, j) + ct.beta_tilde[j] * t.a(j, i) -
                       t.beta[i] * ct.beta_tilde[j];
      worst = std::max(worst, std::fabs(r));
    }
  return worst;
}

}  // namespace rknet
