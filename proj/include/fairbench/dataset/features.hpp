#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fairbench/dataset/types.hpp"
#include "fairbench/matrix.hpp"

namespace fairbench::dataset {

enum class Protocol { DemographicAware, DemographicUnaware };

std::string_view short_name(Protocol p) noexcept;  // "aware" / "unaware"
std::optional<Protocol> parse_protocol(std::string_view name) noexcept;

// Clinical block shared by both protocols (age is demographic, not clinical).
inline constexpr std::array<NumericVariable, 7> kClinicalVariables = {
    NumericVariable::DiagnosisYear, NumericVariable::Alt,        NumericVariable::Haemoglobin,
    NumericVariable::Neutrophils,   NumericVariable::WhiteCells, NumericVariable::RedCells,
    NumericVariable::Platelets,
};
inline constexpr std::size_t kUnawareWidth = 7;
inline constexpr std::size_t kAwareWidth = 13;  // + gender, 4 race one-hot, age

// Column names of the encoded design matrix, in order.
std::vector<std::string> feature_columns(Protocol protocol);

struct Scaler {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dim() const noexcept { return min.size(); }
  bool operator==(const Scaler&) const = default;
};

Scaler fit_minmax(const Matrix& matrix);

// (v - min) / (max - min) per column; constant columns map to 0. With
// `clamp`, results are limited to [0, 1]. Throws DimensionMismatch.
Matrix apply_minmax(const Scaler& scaler, const Matrix& matrix, bool clamp = true);

struct SensitiveAttributes {
  Gender gender = Gender::Female;
  Race race = Race::White;
  double age = 0.0;

  bool operator==(const SensitiveAttributes&) const = default;
};

struct FeatureMatrix {
  Matrix rows;
  std::vector<std::string> column_names;
  Protocol protocol = Protocol::DemographicUnaware;
  std::vector<int> labels;
  std::vector<SensitiveAttributes> sensitive;  // raw, never scaled
};

struct FitHere {};
using ScalerSource = std::variant<FitHere, Scaler>;

struct EncodedFeatures {
  FeatureMatrix features;
  Scaler scaler;  // the scaler that produced `features.rows`
};

// Unscaled design matrix: clinical columns, then for the aware protocol
// gender (Female=0, Male=1), race one-hot (White, Black, Asian, Other), age.
Matrix raw_features(std::span<const PatientRecord> records, Protocol protocol);

EncodedFeatures encode_features(std::span<const PatientRecord> records, Protocol protocol,
                                const ScalerSource& scaler_source, bool clamp = true);
EncodedFeatures encode_features(const Cohort& cohort, Protocol protocol, const ScalerSource& scaler_source,
                                bool clamp = true);

// Index of the half-open bin containing `age`: 0 below edges[0], edges.size()
// at or above the last edge. Throws InvalidArgument unless edges increase.
std::size_t bin_age(double age, std::span<const double> edges);
std::string age_group_name(std::size_t group, std::span<const double> edges);

}  // namespace fairbench::dataset
