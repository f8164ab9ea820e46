#include "fairbench/models/logistic.hpp"

#include <algorithm>
#include <cmath>

namespace fairbench::models {
namespace {

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double max_norm(const LogisticParams& g) noexcept {
  double m = std::abs(g.bias);
  for (double w : g.weights) m = std::max(m, std::abs(w));
  return m;
}

}  // namespace

double logistic_score(const LogisticParams& params, std::span<const double> x) noexcept {
  double z = params.bias;
  for (std::size_t j = 0; j < x.size(); ++j) z += params.weights[j] * x[j];
  return z;
}

double logistic_loss(const LogisticParams& params, const Matrix& X, std::span<const int> y, double lambda) {
  const std::size_t n = X.rows();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = logistic_score(params, X.row(i));
    // -log p(y|z) = softplus(z) - y z
    loss += softplus(z) - (y[i] != 0 ? z : 0.0);
  }
  double penalty = 0.0;
  for (double w : params.weights) penalty += w * w;
  return loss / static_cast<double>(n) + 0.5 * lambda * penalty;
}

LogisticParams logistic_gradient(const LogisticParams& params, const Matrix& X, std::span<const int> y,
                                 double lambda) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  LogisticParams g{std::vector<double>(d, 0.0), 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = X.row(i);
    const double residual = sigmoid(logistic_score(params, row)) - (y[i] != 0 ? 1.0 : 0.0);
    for (std::size_t j = 0; j < d; ++j) g.weights[j] += residual * row[j];
    g.bias += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) g.weights[j] = g.weights[j] * inv_n + lambda * params.weights[j];
  g.bias *= inv_n;
  return g;
}

LogisticFit fit_logistic(const Matrix& X, std::span<const int> y, double C, const LogisticOptions& options) {
  const double lambda = 1.0 / (static_cast<double>(X.rows()) * C);
  constexpr double kArmijo = 1e-4;

  LogisticFit fit;
  fit.params.weights.assign(X.cols(), 0.0);
  double loss = logistic_loss(fit.params, X, y, lambda);
  double step = 1.0;

  for (fit.iterations = 0; fit.iterations < options.max_iterations; ++fit.iterations) {
    const LogisticParams grad = logistic_gradient(fit.params, X, y, lambda);
    fit.gradient_max_norm = max_norm(grad);
    if (fit.gradient_max_norm < options.gradient_tolerance) {
      fit.converged = true;
      return fit;
    }
    double grad_sq = grad.bias * grad.bias;
    for (double g : grad.weights) grad_sq += g * g;

    LogisticParams trial = fit.params;
    double trial_loss = loss;
    for (int halvings = 0; halvings < 60; ++halvings) {
      for (std::size_t j = 0; j < trial.weights.size(); ++j)
        trial.weights[j] = fit.params.weights[j] - step * grad.weights[j];
      trial.bias = fit.params.bias - step * grad.bias;
      trial_loss = logistic_loss(trial, X, y, lambda);
      if (trial_loss <= loss - kArmijo * step * grad_sq) break;
      step *= 0.5;
    }
    if (!(trial_loss < loss)) break;  // no further progress
    fit.params = std::move(trial);
    loss = trial_loss;
    step *= 2.0;
  }
  const LogisticParams grad = logistic_gradient(fit.params, X, y, lambda);
  fit.gradient_max_norm = max_norm(grad);
  fit.converged = fit.gradient_max_norm < options.gradient_tolerance;
  return fit;
}

}  // namespace fairbench::models
