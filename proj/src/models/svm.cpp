#include "fairbench/models/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairbench/models/kernel.hpp"

namespace fairbench::models {
namespace {

constexpr double kTau = 1e-12;

}  // namespace

double default_gamma(const Matrix& X) {
  if (X.rows() == 0 || X.cols() == 0) return 1.0;
  const double n = static_cast<double>(X.rows());
  double total_variance = 0.0;
  for (std::size_t c = 0; c < X.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) mean += X(r, c);
    mean /= n;
    double var = 0.0;
    for (std::size_t r = 0; r < X.rows(); ++r) var += (X(r, c) - mean) * (X(r, c) - mean);
    total_variance += var / n;
  }
  const double mean_variance = total_variance / static_cast<double>(X.cols());
  return mean_variance > 0.0 ? 1.0 / (static_cast<double>(X.cols()) * mean_variance) : 1.0;
}

SvmFit fit_svm(const Matrix& X, std::span<const int> y, Kernel kernel, double C, double gamma, double coef0,
               const SvmOptions& options) {
  const std::size_t n = X.rows();
  std::vector<int> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = y[i] != 0 ? 1 : -1;

  // Q_ij = s_i s_j K(x_i, x_j), dense; cohorts here are small.
  std::vector<double> Q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const double q = s[i] * s[j] * kernel_eval_unchecked(kernel, X.row(i), X.row(j), gamma, coef0);
      Q[i * n + j] = q;
      Q[j * n + i] = q;
    }
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of 0.5 a'Qa - e'a

  const long max_iter =
      options.max_iterations > 0 ? options.max_iterations : std::max<long>(1000000, 100 * static_cast<long>(n));

  SvmFit fit;
  auto in_up = [&](std::size_t t) { return s[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return s[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

  for (fit.iterations = 0; fit.iterations < max_iter; ++fit.iterations) {
    double g_max = -std::numeric_limits<double>::infinity();
    double g_min = std::numeric_limits<double>::infinity();
    std::size_t i = n, j = n;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -s[t] * G[t];
      if (in_up(t) && v > g_max) {
        g_max = v;
        i = t;
      }
      if (in_low(t) && v < g_min) {
        g_min = v;
        j = t;
      }
    }
    fit.kkt_gap = (i == n || j == n) ? 0.0 : g_max - g_min;
    if (i == n || j == n || fit.kkt_gap < options.tolerance) {
      fit.converged = true;
      break;
    }

    const double* Qi = &Q[i * n];
    const double* Qj = &Q[j * n];
    const double old_ai = alpha[i];
    const double old_aj = alpha[j];

    if (s[i] != s[j]) {
      double quad = Qi[i] + Qj[j] + 2.0 * Qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = Qi[i] + Qj[j] - 2.0 * Qi[j];
      if (quad <= 0.0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double dai = alpha[i] - old_ai;
    const double daj = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q[t * n + i] * dai + Q[t * n + j] * daj;
  }

  // rho: average of s_t G_t over free vectors, else midpoint of the bounds.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = s[t] * G[t];
    if (alpha[t] >= C) {
      if (s[t] == -1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (s[t] == 1) ub = std::min(ub, yg);
      else lb = std::max(lb, yg);
    } else {
      free_sum += yg;
      ++n_free;
    }
  }
  double rho = 0.0;
  if (n_free > 0) rho = free_sum / static_cast<double>(n_free);
  else if (std::isfinite(ub) && std::isfinite(lb)) rho = 0.5 * (ub + lb);
  else if (std::isfinite(ub)) rho = ub;
  else if (std::isfinite(lb)) rho = lb;

  SvmParams& p = fit.params;
  p.kernel = kernel;
  p.gamma = gamma;
  p.coef0 = coef0;
  p.C = C;
  p.bias = -rho;
  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t)
    if (alpha[t] > 0.0) sv.push_back(t);
  p.support_vectors = X.select_rows(sv);
  for (std::size_t t : sv) {
    p.alpha.push_back(alpha[t]);
    p.signs.push_back(s[t]);
  }
  fit.full_alpha = std::move(alpha);
  return fit;
}

double svm_decision(const SvmParams& params, std::span<const double> x) noexcept {
  double f = params.bias;
  for (std::size_t k = 0; k < params.alpha.size(); ++k)
    f += params.alpha[k] * params.signs[k] *
         kernel_eval_unchecked(params.kernel, params.support_vectors.row(k), x, params.gamma, params.coef0);
  return f;
}

}  // namespace fairbench::models
