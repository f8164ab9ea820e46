#include "fairbench/dataset/types.hpp"

#include <chrono>
#include <cmath>

#include "fairbench/error.hpp"

namespace fairbench::dataset {

std::string_view name_of(NumericVariable v) noexcept { return kNumericNames[index_of(v)]; }

std::string_view display_name(Gender g) noexcept { return g == Gender::Male ? "Male" : "Female"; }

std::string_view display_name(Race r) noexcept {
  switch (r) {
    case Race::White: return "White";
    case Race::Black: return "Black";
    case Race::Asian: return "Asian";
    case Race::Other: return "Other";
  }
  return "Other";
}

std::string_view display_name(Label l) noexcept { return l == Label::ITP ? "ITP" : "NonITP"; }

std::string_view csv_code(Gender g) noexcept { return g == Gender::Male ? "M" : "F"; }

std::optional<Gender> parse_gender(std::string_view code) noexcept {
  if (code == "M") return Gender::Male;
  if (code == "F") return Gender::Female;
  return std::nullopt;
}

std::optional<Race> parse_race(std::string_view name) noexcept {
  for (Race r : kRaces)
    if (display_name(r) == name) return r;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view name) noexcept {
  if (name == "ITP") return Label::ITP;
  if (name == "NonITP") return Label::NonITP;
  return std::nullopt;
}

std::optional<NumericVariable> parse_numeric_variable(std::string_view name) noexcept {
  for (NumericVariable v : kNumericVariables)
    if (name_of(v) == name) return v;
  return std::nullopt;
}

double PatientRecord::numeric(NumericVariable v) const noexcept {
  switch (v) {
    case NumericVariable::DiagnosisYear: return diagnosis_year;
    case NumericVariable::AgeLastSeen: return age_last_seen;
    case NumericVariable::Alt: return alt;
    case NumericVariable::Haemoglobin: return dx_hb_ct;
    case NumericVariable::Neutrophils: return dx_neutro_ct;
    case NumericVariable::WhiteCells: return wbc_ct;
    case NumericVariable::RedCells: return rbc_ct;
    case NumericVariable::Platelets: return dx_plt_ct;
  }
  return 0.0;
}

void PatientRecord::set_numeric(NumericVariable v, double value) noexcept {
  switch (v) {
    case NumericVariable::DiagnosisYear: diagnosis_year = static_cast<int>(std::lround(value)); break;
    case NumericVariable::AgeLastSeen: age_last_seen = value; break;
    case NumericVariable::Alt: alt = value; break;
    case NumericVariable::Haemoglobin: dx_hb_ct = value; break;
    case NumericVariable::Neutrophils: dx_neutro_ct = value; break;
    case NumericVariable::WhiteCells: wbc_ct = value; break;
    case NumericVariable::RedCells: rbc_ct = value; break;
    case NumericVariable::Platelets: dx_plt_ct = value; break;
  }
}

int current_year() {
  const auto today = std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
  return static_cast<int>(std::chrono::year_month_day(today).year());
}

std::optional<std::string> check_record(const PatientRecord& record, int year_now) {
  for (NumericVariable v : kNumericVariables) {
    const double value = record.numeric(v);
    if (!std::isfinite(value)) return std::string(name_of(v)) + " is not finite";
    if (value < 0.0) return std::string(name_of(v)) + " is negative";
  }
  if (record.diagnosis_year < 1900 || record.diagnosis_year > year_now)
    return "diagnosis_year " + std::to_string(record.diagnosis_year) + " outside [1900, " +
           std::to_string(year_now) + "]";
  if (!(record.age_last_seen > 0.0)) return "age_last_seen must be positive";
  return std::nullopt;
}

Cohort::Cohort(std::vector<PatientRecord> records, CohortSource source)
    : records_(std::move(records)), source_(std::move(source)) {
  if (records_.empty()) throw Error(ErrorCode::EmptyCohort, "cohort has no records");
  for (const auto& r : records_) (r.label == Label::ITP ? n_itp_ : n_non_itp_) += 1;
  if (n_itp_ < 2 || n_non_itp_ < 2)
    throw Error(ErrorCode::InvariantViolation,
                "each class needs at least 2 records (ITP=" + std::to_string(n_itp_) +
                    ", NonITP=" + std::to_string(n_non_itp_) + ")");
}

std::vector<Label> Cohort::labels() const {
  std::vector<Label> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.label);
  return out;
}

std::vector<PatientRecord> Cohort::subset(std::span<const std::size_t> indices) const {
  std::vector<PatientRecord> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(records_.at(i));
  return out;
}

}  // namespace fairbench::dataset
