#pragma once

#include <string>

#include "rknet/numerics.hpp"

namespace rknet {

// `identity` exists for order-of-accuracy tests against linear systems;
// the CLI refuses it for real training runs.
enum class Activation { relu, softplus, sigmoid, tanh, identity };

double activate(Activation a, double x);
double activate_deriv(Activation a, double x);

void activate_into(Activation a, const Vector& z, Vector& out);
Vector activate_vec(Activation a, const Vector& z);
Vector activate_deriv_vec(Activation a, const Vector& z);

Activation activation_from_name(const std::string& name);
std::string activation_name(Activation a);

}  // namespace rknet
