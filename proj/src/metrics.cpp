#include "fairbench/metrics.hpp"

#include <algorithm>
#include <string>

#include "fairbench/error.hpp"

namespace fairbench::metrics {
namespace {

void check_lengths(std::size_t a, std::size_t b) {
  if (a != b)
    throw Error(ErrorCode::LengthMismatch, "lengths differ: " + std::to_string(a) + " vs " + std::to_string(b));
}

double ratio(double lo, double hi) noexcept { return hi == 0.0 ? 1.0 : lo / hi; }

}  // namespace

ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive_label) {
  check_lengths(y_true.size(), y_pred.size());
  if (y_true.empty()) throw Error(ErrorCode::EmptyInput, "confusion of zero samples");
  ConfusionCounts c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const bool actual = y_true[i] == positive_label;
    const bool predicted = y_pred[i] == positive_label;
    if (actual && predicted) ++c.tp;
    else if (actual) ++c.fn;
    else if (predicted) ++c.fp;
    else ++c.tn;
  }
  return c;
}

double f1_score(const ConfusionCounts& c) noexcept {
  if (c.tp == 0) return 0.0;
  const double tp = static_cast<double>(c.tp);
  const double precision = tp / static_cast<double>(c.tp + c.fp);
  const double recall = tp / static_cast<double>(c.tp + c.fn);
  return 2.0 * precision * recall / (precision + recall);
}

double macro_f1(std::span<const int> y_true, std::span<const int> y_pred) {
  const double positive = f1_score(confusion(y_true, y_pred, 1));
  const double negative = f1_score(confusion(y_true, y_pred, 0));
  return 0.5 * (positive + negative);
}

GroupRates group_rates(std::span<const int> y_true, std::span<const int> y_pred, std::span<const std::string> groups) {
  check_lengths(y_true.size(), y_pred.size());
  check_lengths(y_true.size(), groups.size());

  struct Tally {
    std::size_t pos = 0, neg = 0, tp = 0, fp = 0;
  };
  std::map<std::string, Tally> tallies;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    Tally& t = tallies[groups[i]];
    if (y_true[i] == 1) {
      ++t.pos;
      t.tp += y_pred[i] == 1 ? 1 : 0;
    } else {
      ++t.neg;
      t.fp += y_pred[i] == 1 ? 1 : 0;
    }
  }

  GroupRates out;
  for (const auto& [name, t] : tallies) {
    Rates r;
    r.n_pos = t.pos;
    r.n_neg = t.neg;
    if (t.pos > 0) r.tpr = static_cast<double>(t.tp) / static_cast<double>(t.pos);
    if (t.neg > 0) r.fpr = static_cast<double>(t.fp) / static_cast<double>(t.neg);
    out.emplace(name, r);
  }
  return out;
}

EqualizedOdds equalized_odds_detail(const GroupRates& rates) {
  bool any_tpr = false, any_fpr = false;
  double tpr_min = 1.0, tpr_max = 0.0, fpr_min = 1.0, fpr_max = 0.0;
  for (const auto& [name, r] : rates) {
    if (r.tpr) {
      any_tpr = true;
      tpr_min = std::min(tpr_min, *r.tpr);
      tpr_max = std::max(tpr_max, *r.tpr);
    }
    if (r.fpr) {
      any_fpr = true;
      fpr_min = std::min(fpr_min, *r.fpr);
      fpr_max = std::max(fpr_max, *r.fpr);
    }
  }
  if (!any_tpr || !any_fpr)
    throw Error(ErrorCode::NoEvaluableGroups, "need at least one group with positives and one with negatives");
  EqualizedOdds eo;
  eo.tpr_ratio = ratio(tpr_min, tpr_max);
  eo.fpr_ratio = ratio(fpr_min, fpr_max);
  eo.value = std::min(eo.tpr_ratio, eo.fpr_ratio);
  return eo;
}

double equalized_odds(const GroupRates& rates) { return equalized_odds_detail(rates).value; }

}  // namespace fairbench::metrics
