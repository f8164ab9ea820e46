#include "fairbench/dataset/synthesize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "fairbench/error.hpp"
#include "fairbench/rng.hpp"

namespace fairbench::dataset {
namespace {

constexpr double kMinConcentration = 0.05;
constexpr double kMaxConcentration = 20.0;
constexpr int kGridPoints = 96;

double beta_median(double mean01, double concentration) {
  return boost::math::ibeta_inv(mean01 * concentration, (1.0 - mean01) * concentration, 0.5);
}

enum : std::uint64_t { kTagNumeric = 1, kTagGender = 2, kTagRace = 3 };

}  // namespace

double BoundedBeta::quantile(double u) const {
  if (degenerate || hi == lo) return lo;
  const double x = boost::math::ibeta_inv(alpha, beta, u);
  return std::clamp(lo + (hi - lo) * x, lo, hi);
}

double BoundedBeta::mean() const {
  if (degenerate || hi == lo) return lo;
  return lo + (hi - lo) * alpha / (alpha + beta);
}

double BoundedBeta::median() const { return quantile(0.5); }

BoundedBeta fit_bounded_beta(const VariableStats& s) {
  if (!(s.min <= s.max)) throw Error(ErrorCode::InfeasibleSpec, "min exceeds max");
  BoundedBeta dist{s.min, s.max};
  const double range = s.max - s.min;
  if (range == 0.0) {
    dist.degenerate = true;
    return dist;
  }
  if (!s.mean || !s.median) return dist;  // uniform

  if (!(s.min <= *s.mean && *s.mean <= s.max)) throw Error(ErrorCode::InfeasibleSpec, "mean outside [min, max]");
  if (!(s.min <= *s.median && *s.median <= s.max))
    throw Error(ErrorCode::InfeasibleSpec, "median outside [min, max]");

  const double mean01 = (*s.mean - s.min) / range;
  const double median01 = (*s.median - s.min) / range;

  if (mean01 <= 0.0 || mean01 >= 1.0) {
    // All mass at one end; only consistent if the median sits there too.
    if (std::abs(median01 - mean01) > kMomentTolerance)
      throw Error(ErrorCode::InfeasibleSpec, "mean at a bound but median is interior");
    return BoundedBeta{mean01 <= 0.0 ? s.min : s.max, mean01 <= 0.0 ? s.min : s.max, 1.0, 1.0, true};
  }

  // Log-spaced grid over the concentration, then bisection inside the first
  // sign change. Falls back to the grid point with the smallest residual.
  const double log_lo = std::log(kMinConcentration);
  const double log_hi = std::log(kMaxConcentration);
  auto residual = [&](double log_kappa) { return beta_median(mean01, std::exp(log_kappa)) - median01; };

  double best_log = log_hi;
  double best_abs = std::numeric_limits<double>::infinity();
  double prev_log = log_lo;
  double prev_res = residual(log_lo);
  for (int i = 0; i <= kGridPoints; ++i) {
    const double t = log_lo + (log_hi - log_lo) * i / kGridPoints;
    const double r = i == 0 ? prev_res : residual(t);
    if (std::abs(r) < best_abs) {
      best_abs = std::abs(r);
      best_log = t;
    }
    if (i > 0 && ((prev_res <= 0.0 && r >= 0.0) || (prev_res >= 0.0 && r <= 0.0))) {
      double a = prev_log, b = t, ra = prev_res;
      for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double rm = residual(m);
        if ((ra <= 0.0) == (rm <= 0.0)) {
          a = m;
          ra = rm;
        } else {
          b = m;
        }
      }
      best_log = 0.5 * (a + b);
      best_abs = std::abs(residual(best_log));
      break;
    }
    prev_log = t;
    prev_res = r;
  }

  if (best_abs > kMomentTolerance)
    throw Error(ErrorCode::InfeasibleSpec, "no bounded Beta matches mean and median within tolerance");

  const double kappa = std::exp(best_log);
  dist.alpha = mean01 * kappa;
  dist.beta = (1.0 - mean01) * kappa;
  return dist;
}

Cohort synthesize_cohort(const CohortSpec& spec, std::uint64_t seed) {
  spec.validate();

  std::vector<PatientRecord> records;
  records.reserve(spec.itp.size + spec.non_itp.size);

  for (Label label : kLabels) {
    const ClassSpec& cls = spec.for_label(label);
    const std::uint64_t class_tag = static_cast<std::uint64_t>(to_int(label));
    const std::size_t first = records.size();
    records.resize(first + cls.size);
    for (std::size_t i = first; i < records.size(); ++i) records[i].label = label;

    for (NumericVariable v : kNumericVariables) {
      BoundedBeta dist;
      try {
        dist = fit_bounded_beta(cls.stats(v));
      } catch (const Error& e) {
        throw e.with_context(std::string(display_name(label)) + "." + std::string(name_of(v)));
      }
      rng::Stream stream(rng::derive(seed, {kTagNumeric, class_tag, index_of(v)}));
      for (std::size_t i = first; i < records.size(); ++i) {
        records[i].set_numeric(v, dist.quantile(stream.uniform_open()));
      }
    }

    rng::Stream gender_stream(rng::derive(seed, {kTagGender, class_tag}));
    rng::Stream race_stream(rng::derive(seed, {kTagRace, class_tag}));
    Race fallback_race = Race::White;
    for (Race r : kRaces)
      if (cls.race_fractions[index_of(r)] > 0.0) fallback_race = r;
    for (std::size_t i = first; i < records.size(); ++i) {
      records[i].gender = gender_stream.uniform_open() < cls.male_fraction ? Gender::Male : Gender::Female;
      const double u = race_stream.uniform_open();
      double cumulative = 0.0;
      records[i].race = fallback_race;
      for (Race r : kRaces) {
        cumulative += cls.race_fractions[index_of(r)];
        if (u < cumulative) {
          records[i].race = r;
          break;
        }
      }
    }
  }
  return Cohort(std::move(records), SyntheticSource{seed});
}

}  // namespace fairbench::dataset
