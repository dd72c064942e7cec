#pragma once

#include <cstdint>
#include <vector>

#include "rknet/errors.hpp"

namespace rknet {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  static Matrix identity(int n);

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }
  double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
};

// out = m * v.  Dimension mismatches fail fast.
void matvec_into(const Matrix& m, const Vector& v, Vector& out);
Vector matvec(const Matrix& m, const Vector& v);

// out = m^T * v, computed by streaming rows of m.
void matvec_t_into(const Matrix& m, const Vector& v, Vector& out);
Vector matvec_t(const Matrix& m, const Vector& v);

Matrix outer(const Vector& u, const Vector& v);

// m += scale * u v^T
void add_outer(Matrix& m, double scale, const Vector& u, const Vector& v);

// y += a * x
void axpy(double a, const Vector& x, Vector& y);

double dot(const Vector& a, const Vector& b);
double norm2(const Vector& v);

/// Deterministic splittable pseudo-random source (splitmix64).
///
/// Identical seeds produce identical draw sequences on every platform;
/// split() derives an independent child stream so per-sample or per-run
/// noise does not depend on consumption order elsewhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  double next_double();  // uniform [0, 1)
  double uniform(double lo, double hi);
  double gaussian(double mean, double stddev);  // Marsaglia polar, no libm trig
  Vector gaussian_vec(int n, double mean, double stddev);
  Rng split() { return Rng(next_u64()); }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable seed derivation for named substreams (repetitions, splits, ...).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rknet
