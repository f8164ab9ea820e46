#include "fairbench/dataset/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "fairbench/error.hpp"

namespace fairbench::dataset {
namespace {

std::string format_edge(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

std::string_view short_name(Protocol p) noexcept {
  return p == Protocol::DemographicAware ? "aware" : "unaware";
}

std::optional<Protocol> parse_protocol(std::string_view name) noexcept {
  if (name == "aware" || name == "DemographicAware") return Protocol::DemographicAware;
  if (name == "unaware" || name == "DemographicUnaware") return Protocol::DemographicUnaware;
  return std::nullopt;
}

std::vector<std::string> feature_columns(Protocol protocol) {
  std::vector<std::string> names;
  for (NumericVariable v : kClinicalVariables) names.emplace_back(name_of(v));
  if (protocol == Protocol::DemographicAware) {
    names.emplace_back("gender");
    for (Race r : kRaces) names.push_back("race_" + std::string(display_name(r)));
    names.emplace_back("age_last_seen");
  }
  return names;
}

Scaler fit_minmax(const Matrix& matrix) {
  Scaler s;
  s.min.assign(matrix.cols(), 0.0);
  s.max.assign(matrix.cols(), 0.0);
  if (matrix.rows() == 0) return s;
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    double lo = matrix(0, c), hi = matrix(0, c);
    for (std::size_t r = 1; r < matrix.rows(); ++r) {
      lo = std::min(lo, matrix(r, c));
      hi = std::max(hi, matrix(r, c));
    }
    s.min[c] = lo;
    s.max[c] = hi;
  }
  return s;
}

Matrix apply_minmax(const Scaler& scaler, const Matrix& matrix, bool clamp) {
  if (matrix.cols() != scaler.dim())
    throw Error(ErrorCode::DimensionMismatch, "scaler has " + std::to_string(scaler.dim()) +
                                                  " columns, matrix has " + std::to_string(matrix.cols()));
  Matrix out(matrix.rows(), matrix.cols());
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    const double range = scaler.max[c] - scaler.min[c];
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      double v = range > 0.0 ? (matrix(r, c) - scaler.min[c]) / range : 0.0;
      if (clamp) v = std::clamp(v, 0.0, 1.0);
      out(r, c) = v;
    }
  }
  return out;
}

Matrix raw_features(std::span<const PatientRecord> records, Protocol protocol) {
  const std::size_t width = protocol == Protocol::DemographicAware ? kAwareWidth : kUnawareWidth;
  Matrix m(records.size(), width);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const PatientRecord& rec = records[i];
    auto row = m.row(i);
    std::size_t c = 0;
    for (NumericVariable v : kClinicalVariables) row[c++] = rec.numeric(v);
    if (protocol == Protocol::DemographicAware) {
      row[c++] = rec.gender == Gender::Male ? 1.0 : 0.0;
      for (Race r : kRaces) row[c++] = rec.race == r ? 1.0 : 0.0;
      row[c++] = rec.age_last_seen;
    }
  }
  return m;
}

EncodedFeatures encode_features(std::span<const PatientRecord> records, Protocol protocol,
                                const ScalerSource& scaler_source, bool clamp) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "cannot encode an empty record set");
  const Matrix raw = raw_features(records, protocol);

  EncodedFeatures out;
  if (const Scaler* given = std::get_if<Scaler>(&scaler_source)) {
    if (given->dim() != raw.cols())
      throw Error(ErrorCode::DimensionMismatch,
                  "scaler was fit on " + std::to_string(given->dim()) + " columns but the " +
                      std::string(short_name(protocol)) + " protocol has " + std::to_string(raw.cols()));
    out.scaler = *given;
  } else {
    out.scaler = fit_minmax(raw);
  }

  FeatureMatrix& fm = out.features;
  fm.rows = apply_minmax(out.scaler, raw, clamp);
  fm.column_names = feature_columns(protocol);
  fm.protocol = protocol;
  fm.labels.reserve(records.size());
  fm.sensitive.reserve(records.size());
  for (const auto& r : records) {
    fm.labels.push_back(to_int(r.label));
    fm.sensitive.push_back({r.gender, r.race, r.age_last_seen});
  }
  return out;
}

EncodedFeatures encode_features(const Cohort& cohort, Protocol protocol, const ScalerSource& scaler_source,
                                bool clamp) {
  return encode_features(std::span<const PatientRecord>(cohort.records()), protocol, scaler_source, clamp);
}

std::size_t bin_age(double age, std::span<const double> edges) {
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i - 1] < edges[i])) throw Error(ErrorCode::InvalidArgument, "age bin edges must be strictly increasing");
  return static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), age) - edges.begin());
}

std::string age_group_name(std::size_t group, std::span<const double> edges) {
  if (edges.empty()) return "all";
  if (group == 0) return "<" + format_edge(edges.front());
  if (group >= edges.size()) return ">=" + format_edge(edges.back());
  return format_edge(edges[group - 1]) + "-" + format_edge(edges[group]);
}

}  // namespace fairbench::dataset
