#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fairbench/importance.hpp"

namespace fairbench::experiment {

// Sensitive attributes in report order.
inline constexpr std::array<std::string_view, 3> kAttributes = {"gender", "race", "age"};

struct AttributeFairness {
  std::string attribute;
  double pooled = 1.0;                         // over concatenated out-of-fold predictions
  std::vector<std::optional<double>> per_fold; // null when a fold has no evaluable groups

  bool operator==(const AttributeFairness&) const = default;
};

struct ReportEntry {
  std::string model;
  std::string protocol;  // "aware" / "unaware"
  std::size_t input_dim = 0;
  std::vector<double> fold_f1;
  double mean_f1 = 0.0;
  std::vector<AttributeFairness> fairness;  // kAttributes order
  std::vector<importance::ImportanceResult> train_importance;  // per fold
  std::vector<importance::ImportanceResult> test_importance;   // per fold
  std::vector<std::string> warnings;

  const AttributeFairness* find_fairness(std::string_view attribute) const noexcept;
  bool operator==(const ReportEntry&) const = default;
};

struct Provenance {
  std::string toolkit_version;
  std::string config_hash;
  std::uint64_t master_seed = 0;
  std::uint64_t cohort_seed = 0;
  std::uint64_t fold_seed = 0;
  std::string cohort_source;
  std::size_t n_itp = 0;
  std::size_t n_non_itp = 0;
  std::string eo_aggregation = "pooled";

  // Excluded from the JSON document so repeated runs compare byte-identical.
  double wall_clock_seconds = 0.0;
  std::string started_at;

  bool operator==(const Provenance& other) const;
};

struct ExperimentReport {
  std::size_t k_folds = 0;
  std::vector<std::string> models;     // grid order
  std::vector<std::string> protocols;  // configured order
  std::vector<double> age_bin_edges;
  std::vector<ReportEntry> entries;    // model-major, then protocol
  std::vector<std::string> fold_flags; // e.g. race groups with < 2 test members
  Provenance provenance;

  const ReportEntry* find(std::string_view model, std::string_view protocol) const noexcept;
  bool operator==(const ExperimentReport&) const = default;
};

nlohmann::json to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& document);  // throws FormatError

// Documented layout version of the JSON report.
inline constexpr int kReportFormatVersion = 1;

}  // namespace fairbench::experiment
