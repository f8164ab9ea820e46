#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>

// Confusion counts, F1, per-group rates and the Equalized Odds ratio. Labels
// are {0, 1}; rates are always taken with 1 as the positive class.
namespace fairbench::metrics {

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  bool operator==(const ConfusionCounts&) const = default;
};

// Errors: LengthMismatch, EmptyInput.
ConfusionCounts confusion(std::span<const int> y_true, std::span<const int> y_pred, int positive_label = 1);

// 2PR / (P + R); 0 when tp = 0.
double f1_score(const ConfusionCounts& c) noexcept;

// Mean of the F1 computed with each class as positive.
double macro_f1(std::span<const int> y_true, std::span<const int> y_pred);

struct Rates {
  std::optional<double> tpr;  // undefined iff n_pos == 0
  std::optional<double> fpr;  // undefined iff n_neg == 0
  std::size_t n_pos = 0;
  std::size_t n_neg = 0;

  bool operator==(const Rates&) const = default;
};

using GroupRates = std::map<std::string, Rates>;

GroupRates group_rates(std::span<const int> y_true, std::span<const int> y_pred, std::span<const std::string> groups);

struct EqualizedOdds {
  double tpr_ratio = 1.0;
  double fpr_ratio = 1.0;
  double value = 1.0;  // min of the two ratios
};

// min/max over groups with a defined rate; 0/0 counts as 1. Throws
// NoEvaluableGroups unless some group defines a TPR and some group an FPR.
EqualizedOdds equalized_odds_detail(const GroupRates& rates);
double equalized_odds(const GroupRates& rates);

}  // namespace fairbench::metrics
