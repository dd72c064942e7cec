#pragma once

#include "rknet/numerics.hpp"

namespace rknet {

/// Coefficients (A, beta, c) of an explicit Runge-Kutta scheme.
///
/// Construction enforces: s >= 1, a_{i,j} = 0 for j >= i (explicitness)
/// and beta_i != 0 for all i. Implicit tableaus are rejected outright;
/// the forward propagation and the adjoint stage recursion both rely on
/// strictly lower-triangular A. The node vector c is stored for
/// completeness but plays no role in propagation.
struct ButcherTableau {
  int s = 0;
  Matrix a;     // s x s, strictly lower triangular
  Vector beta;  // s weights, all nonzero
  Vector c;     // s nodes

  static ButcherTableau create(Matrix a, Vector beta, Vector c);
};

/// Conjugate coefficients (A~, beta~, c~) solving
///   beta_i a~_{i,j} + beta~_j a_{j,i} - beta_i beta~_j = 0
/// with beta~ = beta and c~ = c. Running the adjoint sweep with these
/// coefficients makes the discrete adjoint coincide with the RK
/// discretization of the continuous adjoint.
struct ConjugateTableau {
  int s = 0;
  Matrix a_tilde;
  Vector beta_tilde;
  Vector c_tilde;
};

ButcherTableau euler_tableau();
ButcherTableau rk4_tableau();

ConjugateTableau conjugate(const ButcherTableau& t);

// Max-norm residual of the defining condition; ~1e-16 for well-formed pairs.
double symplectic_residual(const ButcherTableau& t, const ConjugateTableau& ct);

}  // namespace rknet
