#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "fairbench/dataset/types.hpp"

namespace fairbench::dataset {

// Summary statistics for one variable within one class. Median and mean are
// either both given or both absent; absent means "no shape information" and
// the generator samples uniformly on [min, max].
struct VariableStats {
  double min = 0.0;
  double max = 0.0;
  std::optional<double> median;
  std::optional<double> mean;

  bool operator==(const VariableStats&) const = default;
};

struct ClassSpec {
  std::size_t size = 0;
  double male_fraction = 0.5;
  double female_fraction = 0.5;
  std::array<double, 4> race_fractions{0.5, 0.2, 0.2, 0.1};  // White, Black, Asian, Other
  std::array<VariableStats, kNumNumeric> variables{};

  const VariableStats& stats(NumericVariable v) const noexcept { return variables[index_of(v)]; }
  VariableStats& stats(NumericVariable v) noexcept { return variables[index_of(v)]; }

  bool operator==(const ClassSpec&) const = default;
};

struct CohortSpec {
  ClassSpec itp;
  ClassSpec non_itp;

  const ClassSpec& for_label(Label label) const noexcept { return label == Label::ITP ? itp : non_itp; }
  ClassSpec& for_label(Label label) noexcept { return label == Label::ITP ? itp : non_itp; }

  // Throws InvalidSpec for size/proportion problems and InfeasibleSpec when a
  // statistics block is internally inconsistent (e.g. mean outside [min, max]).
  void validate() const;

  bool operator==(const CohortSpec&) const = default;
};

// Built-in per-class statistics: 100 ITP and 50 non-ITP patients.
CohortSpec default_cohort_spec();

CohortSpec parse_cohort_spec(std::string_view yaml_text);
CohortSpec load_cohort_spec(const std::string& path);
std::string to_yaml(const CohortSpec& spec);

}  // namespace fairbench::dataset
