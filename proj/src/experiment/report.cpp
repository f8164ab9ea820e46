#include "fairbench/experiment/report.hpp"

#include "fairbench/error.hpp"

namespace fairbench::experiment {
namespace {

using nlohmann::json;

json importance_to_json(const importance::ImportanceResult& r) {
  auto rows = [](const std::vector<importance::FeatureImportance>& fs) {
    json out = json::array();
    for (const auto& f : fs)
      out.push_back({{"feature", f.feature}, {"mean_drop", f.mean_drop}, {"std_drop", f.std_drop}, {"repeats", f.repeats}});
    return out;
  };
  return {{"split", std::string(importance::to_string(r.split))},
          {"baseline_score", r.baseline_score},
          {"features", rows(r.features)},
          {"grouped", rows(r.grouped)}};
}

importance::ImportanceResult importance_from_json(const json& j) {
  importance::ImportanceResult r;
  r.split = j.at("split").get<std::string>() == "train" ? importance::Split::Train : importance::Split::Test;
  r.baseline_score = j.at("baseline_score").get<double>();
  auto rows = [](const json& arr) {
    std::vector<importance::FeatureImportance> out;
    for (const auto& f : arr)
      out.push_back({f.at("feature").get<std::string>(), f.at("mean_drop").get<double>(),
                     f.at("std_drop").get<double>(), f.at("repeats").get<int>()});
    return out;
  };
  r.features = rows(j.at("features"));
  r.grouped = rows(j.at("grouped"));
  return r;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

bool Provenance::operator==(const Provenance& o) const {
  return toolkit_version == o.toolkit_version && config_hash == o.config_hash && master_seed == o.master_seed &&
         cohort_seed == o.cohort_seed && fold_seed == o.fold_seed && cohort_source == o.cohort_source &&
         n_itp == o.n_itp && n_non_itp == o.n_non_itp && eo_aggregation == o.eo_aggregation;
}

const AttributeFairness* ReportEntry::find_fairness(std::string_view attribute) const noexcept {
  for (const auto& f : fairness)
    if (f.attribute == attribute) return &f;
  return nullptr;
}

const ReportEntry* ExperimentReport::find(std::string_view model, std::string_view protocol) const noexcept {
  for (const auto& e : entries)
    if (e.model == model && e.protocol == protocol) return &e;
  return nullptr;
}

json to_json(const ExperimentReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json fairness = json::array();
    for (const auto& f : e.fairness) {
      json per_fold = json::array();
      for (const auto& v : f.per_fold) per_fold.push_back(optional_number(v));
      fairness.push_back({{"attribute", f.attribute}, {"pooled", f.pooled}, {"per_fold", per_fold}});
    }
    json train = json::array(), test = json::array();
    for (const auto& r : e.train_importance) train.push_back(importance_to_json(r));
    for (const auto& r : e.test_importance) test.push_back(importance_to_json(r));
    entries.push_back({{"model", e.model},
                       {"protocol", e.protocol},
                       {"input_dim", e.input_dim},
                       {"fold_f1", e.fold_f1},
                       {"mean_f1", e.mean_f1},
                       {"equalized_odds", fairness},
                       {"importance", {{"train", train}, {"test", test}}},
                       {"warnings", e.warnings}});
  }
  const Provenance& p = report.provenance;
  return {{"format", "fairbench-report"},
          {"format_version", kReportFormatVersion},
          {"k_folds", report.k_folds},
          {"models", report.models},
          {"protocols", report.protocols},
          {"age_bin_edges", report.age_bin_edges},
          {"fold_flags", report.fold_flags},
          {"provenance",
           {{"toolkit_version", p.toolkit_version},
            {"config_hash", p.config_hash},
            {"master_seed", p.master_seed},
            {"cohort_seed", p.cohort_seed},
            {"fold_seed", p.fold_seed},
            {"cohort_source", p.cohort_source},
            {"n_itp", p.n_itp},
            {"n_non_itp", p.n_non_itp},
            {"eo_aggregation", p.eo_aggregation}}},
          {"entries", entries}};
}

ExperimentReport report_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "fairbench-report")
      throw Error(ErrorCode::FormatError, "not a fairbench report");
    if (j.at("format_version").get<int>() != kReportFormatVersion)
      throw Error(ErrorCode::FormatError, "unsupported report format version");
    ExperimentReport r;
    r.k_folds = j.at("k_folds").get<std::size_t>();
    r.models = j.at("models").get<std::vector<std::string>>();
    r.protocols = j.at("protocols").get<std::vector<std::string>>();
    r.age_bin_edges = j.at("age_bin_edges").get<std::vector<double>>();
    r.fold_flags = j.at("fold_flags").get<std::vector<std::string>>();
    const json& p = j.at("provenance");
    r.provenance.toolkit_version = p.at("toolkit_version").get<std::string>();
    r.provenance.config_hash = p.at("config_hash").get<std::string>();
    r.provenance.master_seed = p.at("master_seed").get<std::uint64_t>();
    r.provenance.cohort_seed = p.at("cohort_seed").get<std::uint64_t>();
    r.provenance.fold_seed = p.at("fold_seed").get<std::uint64_t>();
    r.provenance.cohort_source = p.at("cohort_source").get<std::string>();
    r.provenance.n_itp = p.at("n_itp").get<std::size_t>();
    r.provenance.n_non_itp = p.at("n_non_itp").get<std::size_t>();
    r.provenance.eo_aggregation = p.at("eo_aggregation").get<std::string>();

    for (const auto& e : j.at("entries")) {
      ReportEntry entry;
      entry.model = e.at("model").get<std::string>();
      entry.protocol = e.at("protocol").get<std::string>();
      entry.input_dim = e.at("input_dim").get<std::size_t>();
      entry.fold_f1 = e.at("fold_f1").get<std::vector<double>>();
      entry.mean_f1 = e.at("mean_f1").get<double>();
      for (const auto& f : e.at("equalized_odds")) {
        AttributeFairness af;
        af.attribute = f.at("attribute").get<std::string>();
        af.pooled = f.at("pooled").get<double>();
        for (const auto& v : f.at("per_fold"))
          af.per_fold.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
        entry.fairness.push_back(std::move(af));
      }
      for (const auto& i : e.at("importance").at("train")) entry.train_importance.push_back(importance_from_json(i));
      for (const auto& i : e.at("importance").at("test")) entry.test_importance.push_back(importance_from_json(i));
      entry.warnings = e.at("warnings").get<std::vector<std::string>>();
      r.entries.push_back(std::move(entry));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("report document: ") + e.what());
  }
}

}  // namespace fairbench::experiment
