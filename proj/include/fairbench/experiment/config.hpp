#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairbench/dataset/cohort_spec.hpp"
#include "fairbench/dataset/features.hpp"
#include "fairbench/dataset/types.hpp"
#include "fairbench/models/model_spec.hpp"

namespace fairbench::experiment {

enum class ReportFormat { Markdown, Json, Svg };

std::string_view to_string(ReportFormat f) noexcept;
std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept;  // md|json|svg

struct CohortConfig {
  enum class Kind { Synthetic, Csv };
  Kind kind = Kind::Synthetic;
  std::string csv_path;                  // Csv
  std::optional<std::string> spec_path;  // Synthetic; unset uses the built-in statistics
  dataset::CohortSpec spec = dataset::default_cohort_spec();
  std::optional<std::uint64_t> seed;     // Synthetic; unset derives from the master seed
};

struct ModelEntry {
  models::ModelSpec spec;
  std::optional<std::uint64_t> seed;  // unset derives from (master seed, model name)
};

struct ExperimentConfig {
  CohortConfig cohort;
  std::uint64_t master_seed = 2024;
  std::size_t k_folds = 5;
  std::optional<std::uint64_t> fold_seed;
  std::vector<ModelEntry> models;
  std::vector<dataset::Protocol> protocols{dataset::Protocol::DemographicAware, dataset::Protocol::DemographicUnaware};
  int permutation_repeats = 10;
  std::vector<double> age_bin_edges{45.0, 65.0};
  bool clamp_test_scaling = true;
  std::size_t workers = 1;
  std::string output_dir = "out";
  std::vector<ReportFormat> formats{ReportFormat::Markdown, ReportFormat::Json, ReportFormat::Svg};

  // Throws InvalidConfig.
  void validate() const;
};

// Full default study: every model family and both protocols.
ExperimentConfig default_config();

std::vector<ModelEntry> default_model_entries();

// Relative paths inside the document resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view yaml_text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Seed splitting. Each stream is a keyed derivation of the master seed, so
// adding a model to the grid leaves the other models' streams untouched.
std::uint64_t cohort_seed(const ExperimentConfig& config);
std::uint64_t fold_seed(const ExperimentConfig& config);
std::uint64_t model_seed(const ExperimentConfig& config, const ModelEntry& entry);
std::uint64_t fit_seed(std::uint64_t model_seed, dataset::Protocol protocol, std::size_t fold);
std::uint64_t importance_seed(const ExperimentConfig& config, std::string_view model, dataset::Protocol protocol,
                              std::size_t fold, bool train_split);

// Canonical JSON text of every result-affecting setting, and its FNV-1a
// hash. Output settings and the worker count are left out.
std::string canonical_config(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

}  // namespace fairbench::experiment
