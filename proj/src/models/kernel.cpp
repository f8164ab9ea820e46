#include "fairbench/models/kernel.hpp"

#include <cmath>
#include <string>

#include "fairbench/error.hpp"

namespace fairbench::models {
namespace {

double dot(std::span<const double> u, std::span<const double> v) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double squared_distance(std::span<const double> u, std::span<const double> v) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return s;
}

}  // namespace

double kernel_eval_unchecked(Kernel kernel, std::span<const double> u, std::span<const double> v, double gamma,
                             double coef0) noexcept {
  switch (kernel) {
    case Kernel::LN: return dot(u, v);
    case Kernel::RBF: return std::exp(-gamma * squared_distance(u, v));
    case Kernel::P2: {
      const double b = gamma * dot(u, v) + coef0;
      return b * b;
    }
    case Kernel::P3: {
      const double b = gamma * dot(u, v) + coef0;
      return b * b * b;
    }
    case Kernel::P4: {
      const double b = gamma * dot(u, v) + coef0;
      const double b2 = b * b;
      return b2 * b2;
    }
  }
  return 0.0;
}

double kernel_eval(Kernel kernel, std::span<const double> u, std::span<const double> v, double gamma,
                   double coef0) {
  if (u.size() != v.size())
    throw Error(ErrorCode::DimensionMismatch,
                "kernel arguments have sizes " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
  if (!(gamma > 0.0)) throw Error(ErrorCode::InvalidArgument, "gamma must be positive");
  return kernel_eval_unchecked(kernel, u, v, gamma, coef0);
}

}  // namespace fairbench::models
