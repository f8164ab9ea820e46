#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairbench/dataset/features.hpp"
#include "fairbench/matrix.hpp"
#include "fairbench/models/trained_model.hpp"

namespace fairbench::importance {

enum class Split { Train, Test };

std::string_view to_string(Split s) noexcept;

struct FeatureImportance {
  std::string feature;
  double mean_drop = 0.0;  // baseline macro-F1 minus permuted macro-F1
  double std_drop = 0.0;   // population standard deviation over repeats
  int repeats = 0;

  bool operator==(const FeatureImportance&) const = default;
};

struct ImportanceResult {
  std::vector<FeatureImportance> features;  // one per input column, column order
  std::vector<FeatureImportance> grouped;   // jointly permuted column groups
  double baseline_score = 0.0;
  Split split = Split::Test;

  const FeatureImportance* find(std::string_view feature) const noexcept;
  bool operator==(const ImportanceResult&) const = default;
};

// Several columns shuffled with one shared permutation (e.g. one-hot race).
struct ColumnGroup {
  std::string name;
  std::vector<std::size_t> columns;
};

// Fills `perm` (initialised to the identity) with a permutation drawn from
// the stream keyed by `stream_seed`.
using PermutationSource = std::function<void(std::span<std::size_t> perm, std::uint64_t stream_seed)>;

void fisher_yates(std::span<std::size_t> perm, std::uint64_t stream_seed);

struct ImportanceOptions {
  std::vector<ColumnGroup> groups;
  PermutationSource permute = fisher_yates;
  std::size_t workers = 1;
  Split split = Split::Test;
};

// For each column j and repeat r, rows of column j are permuted with the
// stream derive(seed, j, r) and the model rescored with macro-F1. Groups use
// tags d + g. The caller's X is never modified. Throws DimensionMismatch.
ImportanceResult permutation_importance(const models::TrainedModel& model, const Matrix& X, std::span<const int> y,
                                        std::span<const std::string> column_names, int n_repeats, std::uint64_t seed,
                                        const ImportanceOptions& options = {});

ImportanceResult permutation_importance(const models::TrainedModel& model, const dataset::FeatureMatrix& features,
                                        int n_repeats, std::uint64_t seed, const ImportanceOptions& options = {});

// The four race one-hot columns as one group, for aware-protocol matrices;
// empty otherwise.
std::vector<ColumnGroup> race_column_group(const dataset::FeatureMatrix& features);

inline constexpr std::string_view kGroupedRaceName = "race (grouped)";

}  // namespace fairbench::importance
