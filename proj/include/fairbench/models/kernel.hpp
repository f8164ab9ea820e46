#pragma once

#include <span>

#include "fairbench/models/model_spec.hpp"

namespace fairbench::models {

// LN: u.v   RBF: exp(-gamma |u-v|^2)   Pq: (gamma u.v + coef0)^q
// Throws DimensionMismatch or InvalidArgument (gamma <= 0).
double kernel_eval(Kernel kernel, std::span<const double> u, std::span<const double> v, double gamma,
                   double coef0);

// Unchecked variant for inner loops.
double kernel_eval_unchecked(Kernel kernel, std::span<const double> u, std::span<const double> v, double gamma,
                             double coef0) noexcept;

}  // namespace fairbench::models
