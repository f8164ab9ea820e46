#pragma once

#include <span>
#include <vector>

#include "fairbench/matrix.hpp"

namespace fairbench::models {

struct LogisticParams {
  std::vector<double> weights;
  double bias = 0.0;

  bool operator==(const LogisticParams&) const = default;
};

// Mean logistic loss plus (lambda / 2) |w|^2; the bias is not penalised.
// Labels are {0, 1}.
double logistic_loss(const LogisticParams& params, const Matrix& X, std::span<const int> y, double lambda);

// Analytic gradient of logistic_loss, same layout as the parameters.
LogisticParams logistic_gradient(const LogisticParams& params, const Matrix& X, std::span<const int> y,
                                 double lambda);

struct LogisticOptions {
  double gradient_tolerance = 1e-6;  // max-norm
  int max_iterations = 10000;
};

struct LogisticFit {
  LogisticParams params;
  int iterations = 0;
  bool converged = false;
  double gradient_max_norm = 0.0;
};

// Full-batch gradient descent with Armijo backtracking, lambda = 1 / (n C).
LogisticFit fit_logistic(const Matrix& X, std::span<const int> y, double C, const LogisticOptions& options = {});

double logistic_score(const LogisticParams& params, std::span<const double> x) noexcept;

}  // namespace fairbench::models
