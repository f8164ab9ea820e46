#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fairbench::dataset {

enum class Gender { Male, Female };
enum class Race { White, Black, Asian, Other };

// Binary target; ITP is the positive class.
enum class Label { NonITP = 0, ITP = 1 };

inline constexpr std::array<Race, 4> kRaces = {Race::White, Race::Black, Race::Asian, Race::Other};
inline constexpr std::array<Label, 2> kLabels = {Label::ITP, Label::NonITP};

// The eight numeric variables in CSV column order.
enum class NumericVariable {
  DiagnosisYear,
  AgeLastSeen,
  Alt,
  Haemoglobin,
  Neutrophils,
  WhiteCells,
  RedCells,
  Platelets,
};

inline constexpr std::size_t kNumNumeric = 8;

inline constexpr std::array<NumericVariable, kNumNumeric> kNumericVariables = {
    NumericVariable::DiagnosisYear, NumericVariable::AgeLastSeen, NumericVariable::Alt,
    NumericVariable::Haemoglobin,   NumericVariable::Neutrophils, NumericVariable::WhiteCells,
    NumericVariable::RedCells,      NumericVariable::Platelets,
};

inline constexpr std::array<std::string_view, kNumNumeric> kNumericNames = {
    "diagnosis_year", "age_last_seen", "alt", "dx_hb_ct", "dx_neutro_ct", "wbc_ct", "rbc_ct", "dx_plt_ct",
};

inline constexpr std::array<std::string_view, 11> kCsvColumns = {
    "diagnosis_year", "age_last_seen", "alt",    "dx_hb_ct", "dx_neutro_ct", "wbc_ct",
    "rbc_ct",         "dx_plt_ct",     "gender", "race",     "label",
};

constexpr int to_int(Label label) noexcept { return static_cast<int>(label); }
constexpr Label label_from_int(int v) noexcept { return v != 0 ? Label::ITP : Label::NonITP; }
constexpr std::size_t index_of(Race race) noexcept { return static_cast<std::size_t>(race); }
constexpr std::size_t index_of(NumericVariable v) noexcept { return static_cast<std::size_t>(v); }

std::string_view name_of(NumericVariable v) noexcept;
std::string_view display_name(Gender g) noexcept;
std::string_view display_name(Race r) noexcept;
std::string_view display_name(Label l) noexcept;
std::string_view csv_code(Gender g) noexcept;

std::optional<Gender> parse_gender(std::string_view code) noexcept;
std::optional<Race> parse_race(std::string_view name) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;
std::optional<NumericVariable> parse_numeric_variable(std::string_view name) noexcept;

struct PatientRecord {
  int diagnosis_year = 2000;
  double age_last_seen = 50.0;
  double alt = 0.0;
  double dx_hb_ct = 0.0;
  double dx_neutro_ct = 0.0;
  double wbc_ct = 0.0;
  double rbc_ct = 0.0;
  double dx_plt_ct = 0.0;
  Gender gender = Gender::Female;
  Race race = Race::White;
  Label label = Label::NonITP;

  double numeric(NumericVariable v) const noexcept;
  void set_numeric(NumericVariable v, double value) noexcept;

  bool operator==(const PatientRecord&) const = default;
};

int current_year();

// Describes the first violated record invariant, if any.
std::optional<std::string> check_record(const PatientRecord& record, int current_year);

struct CsvSource {
  std::string path;
  bool operator==(const CsvSource&) const = default;
};
struct SyntheticSource {
  std::uint64_t seed = 0;
  bool operator==(const SyntheticSource&) const = default;
};
using CohortSource = std::variant<CsvSource, SyntheticSource>;

class Cohort {
 public:
  // Throws InvariantViolation when a class has fewer than two records and
  // EmptyCohort when `records` is empty.
  Cohort(std::vector<PatientRecord> records, CohortSource source);

  const std::vector<PatientRecord>& records() const noexcept { return records_; }
  const CohortSource& source() const noexcept { return source_; }
  std::size_t size() const noexcept { return records_.size(); }
  std::size_t n_itp() const noexcept { return n_itp_; }
  std::size_t n_non_itp() const noexcept { return n_non_itp_; }
  const PatientRecord& operator[](std::size_t i) const noexcept { return records_[i]; }

  std::vector<Label> labels() const;
  std::vector<PatientRecord> subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<PatientRecord> records_;
  CohortSource source_;
  std::size_t n_itp_ = 0;
  std::size_t n_non_itp_ = 0;
};

}  // namespace fairbench::dataset
