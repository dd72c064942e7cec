#include "rknet/activation.hpp"

#include <cmath>

namespace rknet {

namespace {
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
}

double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu:
      return x > 0.0 ? x : 0.0;
    case Activation::softplus:
      // log(1 + e^x); for large x the direct form overflows, use x + log1p(e^-x)
      return x > 30.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    case Activation::sigmoid:
      return sigmoid(x);
    case Activation::tanh:
      return std::tanh(x);
    case Activation::identity:
      return x;
  }
  return x;
}

double activate_deriv(Activation a, double x) {
  switch (a) {
    case Activation::relu:
      return x > 0.0 ? 1.0 : 0.0;  // subgradient 0 at the kink
    case Activation::softplus:
      return sigmoid(x);
    case Activation::sigmoid: {
      const double s = sigmoid(x);
      return s * (1.0 - s);
    }
    case Activation::tanh: {
      const double t = std::tanh(x);
      return 1.0 - t * t;
    }
    case Activation::identity:
      return 1.0;
  }
  return 1.0;
}

void activate_into(Activation a, const Vector& z, Vector& out) {
  out.resize(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[i] = activate(a, z[i]);
}

Vector activate_vec(Activation a, const Vector& z) {
  Vector out;
  activate_into(a, z, out);
  return out;
}

Vector activate_deriv_vec(Activation a, const Vector& z) {
  Vector out(z.size());
  for (size_t i = 0; i < z.size(); ++i) out[i] = activate_deriv(a, z[i]);
  return out;
}

Activation activation_from_name(const std::string& name) {
  if (name == "relu") return Activation::relu;
  if (name == "softplus") return Activation::softplus;
  if (name == "sigmoid" || name == "logistic") return Activation::sigmoid;
  if (name == "tanh") return Activation::tanh;
  if (name == "identity") return Activation::identity;
  throw DataError("unknown activation: " + name);
}

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::softplus: return "softplus";
    case Activation::sigmoid: return "sigmoid";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "?";
}

}  // namespace rknet
