#pragma once

#include <span>
#include <vector>

#include "fairbench/matrix.hpp"
#include "fairbench/models/model_spec.hpp"

namespace fairbench::models {

struct SvmParams {
  Kernel kernel = Kernel::LN;
  double gamma = 1.0;
  double coef0 = 1.0;
  double C = 1.0;
  Matrix support_vectors;
  std::vector<double> alpha;   // dual coefficients, 0 < alpha <= C
  std::vector<int> signs;      // +1 for ITP, -1 for NonITP
  double bias = 0.0;           // f(x) = sum alpha_i s_i K(x_i, x) + bias

  bool operator==(const SvmParams&) const = default;
};

struct SvmOptions {
  double tolerance = 1e-3;  // maximal KKT violation at exit
  long max_iterations = 0;  // 0 picks max(1e6, 100 n)
};

struct SvmFit {
  SvmParams params;
  std::vector<double> full_alpha;  // one coefficient per training row
  long iterations = 0;
  bool converged = false;
  double kkt_gap = 0.0;
};

// gamma = 1 / (d * mean per-column population variance), or 1 when that is 0.
double default_gamma(const Matrix& X);

// Two-coordinate descent on the C-SVC dual, picking the maximal violating
// pair at every step.
SvmFit fit_svm(const Matrix& X, std::span<const int> y, Kernel kernel, double C, double gamma, double coef0,
               const SvmOptions& options = {});

double svm_decision(const SvmParams& params, std::span<const double> x) noexcept;

}  // namespace fairbench::models
