#include "rknet/numerics.hpp"

#include <cmath>
#include <string>

namespace rknet {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void matvec_into(const Matrix& m, const Vector& v, Vector& out) {
  if (m.cols != static_cast<int>(v.size()))
    throw ShapeError("matvec: matrix is " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                     " but vector has length " + std::to_string(v.size()));
  out.resize(m.rows);
  const double* vd = v.data();
  for (int i = 0; i < m.rows; ++i) {
    const double* r = m.row(i);
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += r[j] * vd[j];
    out[i] = s;
  }
}

Vector matvec(const Matrix& m, const Vector& v) {
  Vector out;
  matvec_into(m, v, out);
  return out;
}

void matvec_t_into(const Matrix& m, const Vector& v, Vector& out) {
  if (m.rows != static_cast<int>(v.size()))
    throw ShapeError("matvec_t: matrix is " + std::to_string(m.rows) + "x" + std::to_string(m.cols) +
                     " but vector has length " + std::to_string(v.size()));
  out.assign(m.cols, 0.0);
  double* od = out.data();
  for (int i = 0; i < m.rows; ++i) {
    const double* r = m.row(i);
    const double vi = v[i];
    for (int j = 0; j < m.cols; ++j) od[j] += vi * r[j];
  }
}

Vector matvec_t(const Matrix& m, const Vector& v) {
  Vector out;
  matvec_t_into(m, v, out);
  return out;
}

Matrix outer(const Vector& u, const Vector& v) {
  Matrix m(static_cast<int>(u.size()), static_cast<int>(v.size()));
  add_outer(m, 1.0, u, v);
  return m;
}

void add_outer(Matrix& m, double scale, const Vector& u, const Vector& v) {
  if (m.rows != static_cast<int>(u.size()) || m.cols != static_cast<int>(v.size()))
    throw ShapeError("add_outer: shape mismatch");
  const double* vd = v.data();
  for (int i = 0; i < m.rows; ++i) {
    double* r = m.row(i);
    const double su = scale * u[i];
    for (int j = 0; j < m.cols; ++j) r[j] += su * vd[j];
  }
}

void axpy(double a, const Vector& x, Vector& y) {
  if (x.size() != y.size()) throw ShapeError("axpy: length mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

double dot(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vector& v) { return std::sqrt(dot(v, v)); }

namespace {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix64(state_);
}

double Rng::next_double() {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

double Rng::gaussian(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_double() - 1.0;
    v = 2.0 * next_double() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return mean + stddev * (u * f);
}

Vector Rng::gaussian_vec(int n, double mean, double stddev) {
  Vector out(n);
  for (int i = 0; i < n; ++i) out[i] = gaussian(mean, stddev);
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + 0x9e3779b97f4a7c15ULL * (stream + 1));
}

}  // namespace rknet
