#include "fairbench/dataset/cohort_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "fairbench/error.hpp"

namespace fairbench::dataset {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] void unparsable(std::size_t row, std::string_view column, std::string_view value) {
  throw Error(ErrorCode::UnparsableValue, "row " + std::to_string(row) + ", column '" + std::string(column) +
                                              "': cannot parse '" + std::string(value) + "'");
}

double parse_real(std::string_view text, std::size_t row, std::string_view column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) unparsable(row, column, text);
  return value;
}

int parse_year(std::string_view text, std::size_t row, std::string_view column) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) unparsable(row, column, text);
  return value;
}

void append_real(std::string& out, double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), ptr);
}

}  // namespace

Cohort parse_cohort_csv(std::istream& in, CohortSource source) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyCohort, "file is empty (no header)");
  std::string_view header_line = line;
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);

  // position of each canonical column in the file
  std::array<std::size_t, kCsvColumns.size()> position{};
  position.fill(std::string_view::npos);
  const auto header = split_fields(header_line);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string_view name = trim(header[i]);
    std::size_t found = kCsvColumns.size();
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c)
      if (kCsvColumns[c] == name) found = c;
    if (found == kCsvColumns.size())
      throw Error(ErrorCode::UnexpectedColumn, "unknown column '" + std::string(name) + "'");
    if (position[found] != std::string_view::npos)
      throw Error(ErrorCode::UnexpectedColumn, "duplicate column '" + std::string(name) + "'");
    position[found] = i;
  }
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c)
    if (position[c] == std::string_view::npos)
      throw Error(ErrorCode::MissingColumn, "missing column '" + std::string(kCsvColumns[c]) + "'");

  const int year_now = current_year();
  std::vector<PatientRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw Error(ErrorCode::UnparsableValue, "row " + std::to_string(row) + ": expected " +
                                                  std::to_string(header.size()) + " fields, found " +
                                                  std::to_string(fields.size()));
    auto field = [&](std::size_t canonical) { return trim(fields[position[canonical]]); };

    PatientRecord r;
    r.diagnosis_year = parse_year(field(0), row, kCsvColumns[0]);
    for (std::size_t c = 1; c < kNumNumeric; ++c)
      r.set_numeric(kNumericVariables[c], parse_real(field(c), row, kCsvColumns[c]));

    const auto gender = parse_gender(field(8));
    if (!gender) unparsable(row, kCsvColumns[8], field(8));
    const auto race = parse_race(field(9));
    if (!race) unparsable(row, kCsvColumns[9], field(9));
    const auto label = parse_label(field(10));
    if (!label) unparsable(row, kCsvColumns[10], field(10));
    r.gender = *gender;
    r.race = *race;
    r.label = *label;

    if (auto reason = check_record(r, year_now))
      throw Error(ErrorCode::InvariantViolation, "row " + std::to_string(row) + ": " + *reason);
    records.push_back(r);
  }
  if (records.empty()) throw Error(ErrorCode::EmptyCohort, "no data rows");
  return Cohort(std::move(records), std::move(source));
}

Cohort load_cohort_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  return parse_cohort_csv(in, CsvSource{path});
}

void write_cohort_csv(std::span<const PatientRecord> records, std::ostream& out) {
  std::string text;
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    if (c) text += ',';
    text += kCsvColumns[c];
  }
  text += '\n';
  for (const auto& r : records) {
    text += std::to_string(r.diagnosis_year);
    for (std::size_t c = 1; c < kNumNumeric; ++c) {
      text += ',';
      append_real(text, r.numeric(kNumericVariables[c]));
    }
    text += ',';
    text += csv_code(r.gender);
    text += ',';
    text += display_name(r.race);
    text += ',';
    text += display_name(r.label);
    text += '\n';
  }
  out << text;
}

void write_cohort_csv(const Cohort& cohort, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  write_cohort_csv(cohort.records(), out);
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace fairbench::dataset
