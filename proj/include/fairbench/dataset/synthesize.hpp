#pragma once

#include <cstdint>
#include <optional>

#include "fairbench/dataset/cohort_spec.hpp"
#include "fairbench/dataset/types.hpp"

namespace fairbench::dataset {

// Sample mean and median must land within this fraction of (max - min).
inline constexpr double kMomentTolerance = 0.10;

// Beta(alpha, beta) shifted and scaled onto [lo, hi]. A missing shape means
// the distribution is a point mass at `lo`.
struct BoundedBeta {
  double lo = 0.0;
  double hi = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  bool degenerate = false;

  double quantile(double u) const;
  double mean() const;
  double median() const;
};

// Matches the mean exactly (alpha / (alpha + beta)) and searches the
// concentration alpha + beta for the closest median. Throws InfeasibleSpec
// when the best achievable median misses by more than kMomentTolerance of
// the range, or when the statistics are inconsistent.
BoundedBeta fit_bounded_beta(const VariableStats& stats);

// Deterministic in (spec, seed). ITP records come first, then non-ITP, and
// every (class, variable) pair draws from its own keyed stream.
Cohort synthesize_cohort(const CohortSpec& spec, std::uint64_t seed);

}  // namespace fairbench::dataset
