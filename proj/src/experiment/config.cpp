#include "fairbench/experiment/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "fairbench/error.hpp"
#include "fairbench/rng.hpp"

namespace fairbench::experiment {
namespace {

using dataset::Protocol;

enum : std::uint64_t { kTagCohort = 11, kTagFolds = 12, kTagModel = 13, kTagImportance = 14 };

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); }

std::string resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path.string() : (base / path).lexically_normal().string();
}

ModelEntry parse_model_entry(const YAML::Node& node) {
  if (node.IsScalar()) return {models::parse_model_name(node.as<std::string>()), std::nullopt};
  if (!node.IsMap() || !node["model"]) invalid("model entries are names or maps with a 'model' key");

  ModelEntry entry{models::parse_model_name(node["model"].as<std::string>()), std::nullopt};
  models::ModelSpec& s = entry.spec;
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    const YAML::Node& v = kv.second;
    if (key == "model") continue;
    if (key == "C") s.C = v.as<double>();
    else if (key == "seed") entry.seed = v.as<std::uint64_t>();
    else if (key == "max_depth") s.max_depth = v.IsNull() ? std::nullopt : std::optional<int>(v.as<int>());
    else if (key == "n_trees" && s.family == models::Family::RandomForest) s.n_trees = v.as<int>();
    else if (key == "gamma" && s.family == models::Family::SVM) s.gamma = v.as<double>();
    else if (key == "coef0" && s.family == models::Family::SVM) s.coef0 = v.as<double>();
    else if (key == "bootstrap" && s.family == models::Family::RandomForest) s.bootstrap = v.as<bool>();
    else if (key == "max_features" && s.family == models::Family::RandomForest) s.max_features = v.as<int>();
    else invalid("unknown or inapplicable model option '" + key + "' for " + s.name());
  }
  try {
    s.validate();
  } catch (const Error& e) {
    invalid(s.name() + ": " + e.message());
  }
  return entry;
}

}  // namespace

std::string_view to_string(ReportFormat f) noexcept {
  switch (f) {
    case ReportFormat::Markdown: return "md";
    case ReportFormat::Json: return "json";
    case ReportFormat::Svg: return "svg";
  }
  return "?";
}

std::optional<ReportFormat> parse_report_format(std::string_view name) noexcept {
  if (name == "md" || name == "markdown") return ReportFormat::Markdown;
  if (name == "json") return ReportFormat::Json;
  if (name == "svg") return ReportFormat::Svg;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (k_folds < 2) invalid("k_folds must be >= 2");
  if (models.empty()) invalid("model grid is empty");
  if (protocols.empty()) invalid("no protocols selected");
  if (permutation_repeats < 1) invalid("permutation_repeats must be >= 1");
  if (workers < 1) invalid("workers must be >= 1");
  for (std::size_t i = 1; i < age_bin_edges.size(); ++i)
    if (!(age_bin_edges[i - 1] < age_bin_edges[i])) invalid("age_bin_edges must be strictly increasing");
  for (std::size_t i = 0; i < models.size(); ++i)
    for (std::size_t j = i + 1; j < models.size(); ++j)
      if (models[i].spec.name() == models[j].spec.name()) invalid("duplicate model '" + models[i].spec.name() + "'");
  for (std::size_t i = 0; i < protocols.size(); ++i)
    for (std::size_t j = i + 1; j < protocols.size(); ++j)
      if (protocols[i] == protocols[j]) invalid("duplicate protocol");
  if (cohort.kind == CohortConfig::Kind::Csv && cohort.csv_path.empty()) invalid("csv cohort needs a path");
}

std::vector<ModelEntry> default_model_entries() {
  std::vector<ModelEntry> out;
  for (auto& spec : models::default_model_grid()) out.push_back({std::move(spec), std::nullopt});
  return out;
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.models = default_model_entries();
  return c;
}

ExperimentConfig parse_config(std::string_view yaml_text, const std::filesystem::path& base_dir) {
  ExperimentConfig c = default_config();
  try {
    const YAML::Node root = YAML::Load(std::string(yaml_text));
    if (root.IsNull()) return c;
    if (!root.IsMap()) invalid("config must be a key-value mapping");

    for (const auto& kv : root) {
      const std::string key = kv.first.as<std::string>();
      const YAML::Node& v = kv.second;
      if (key == "seed") {
        c.master_seed = v.as<std::uint64_t>();
      } else if (key == "cohort") {
        const std::string source = v["source"] ? v["source"].as<std::string>() : "synthetic";
        if (source == "synthetic") {
          c.cohort.kind = CohortConfig::Kind::Synthetic;
          if (v["spec"]) {
            c.cohort.spec_path = resolve(base_dir, v["spec"].as<std::string>());
            c.cohort.spec = dataset::load_cohort_spec(*c.cohort.spec_path);
          }
          if (v["seed"]) c.cohort.seed = v["seed"].as<std::uint64_t>();
        } else if (source == "csv") {
          c.cohort.kind = CohortConfig::Kind::Csv;
          if (!v["path"]) invalid("csv cohort needs 'path'");
          c.cohort.csv_path = resolve(base_dir, v["path"].as<std::string>());
        } else {
          invalid("cohort.source must be 'synthetic' or 'csv'");
        }
        for (const auto& ckv : v) {
          const std::string ck = ckv.first.as<std::string>();
          if (ck != "source" && ck != "spec" && ck != "seed" && ck != "path") invalid("unknown cohort key '" + ck + "'");
        }
      } else if (key == "k_folds") {
        const int k = v.as<int>();
        if (k < 2) invalid("k_folds must be >= 2");
        c.k_folds = static_cast<std::size_t>(k);
      } else if (key == "fold_seed") {
        c.fold_seed = v.as<std::uint64_t>();
      } else if (key == "models") {
        c.models.clear();
        for (const auto& m : v) c.models.push_back(parse_model_entry(m));
      } else if (key == "protocols") {
        c.protocols.clear();
        for (const auto& p : v) {
          const auto protocol = dataset::parse_protocol(p.as<std::string>());
          if (!protocol) invalid("unknown protocol '" + p.as<std::string>() + "'");
          c.protocols.push_back(*protocol);
        }
      } else if (key == "permutation_repeats") {
        c.permutation_repeats = v.as<int>();
      } else if (key == "age_bin_edges") {
        c.age_bin_edges = v.as<std::vector<double>>();
      } else if (key == "clamp_test_scaling") {
        c.clamp_test_scaling = v.as<bool>();
      } else if (key == "workers") {
        const int w = v.as<int>();
        if (w < 1) invalid("workers must be >= 1");
        c.workers = static_cast<std::size_t>(w);
      } else if (key == "output_dir") {
        c.output_dir = resolve(base_dir, v.as<std::string>());
      } else if (key == "formats") {
        c.formats.clear();
        for (const auto& f : v) {
          const auto fmt = parse_report_format(f.as<std::string>());
          if (!fmt) invalid("unknown report format '" + f.as<std::string>() + "'");
          c.formats.push_back(*fmt);
        }
      } else {
        invalid("unknown config key '" + key + "'");
      }
    }
  } catch (const YAML::Exception& e) {
    invalid(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::uint64_t cohort_seed(const ExperimentConfig& config) {
  return config.cohort.seed.value_or(rng::derive(config.master_seed, {kTagCohort}));
}

std::uint64_t fold_seed(const ExperimentConfig& config) {
  return config.fold_seed.value_or(rng::derive(config.master_seed, {kTagFolds}));
}

std::uint64_t model_seed(const ExperimentConfig& config, const ModelEntry& entry) {
  return entry.seed.value_or(rng::derive(config.master_seed, {kTagModel, rng::fnv1a(entry.spec.name())}));
}

std::uint64_t fit_seed(std::uint64_t seed, Protocol protocol, std::size_t fold) {
  return rng::derive(seed, {static_cast<std::uint64_t>(protocol), static_cast<std::uint64_t>(fold)});
}

std::uint64_t importance_seed(const ExperimentConfig& config, std::string_view model, Protocol protocol,
                              std::size_t fold, bool train_split) {
  return rng::derive(config.master_seed, {kTagImportance, rng::fnv1a(model), static_cast<std::uint64_t>(protocol),
                                          static_cast<std::uint64_t>(fold), train_split ? 1u : 0u});
}

std::string canonical_config(const ExperimentConfig& config) {
  using nlohmann::json;
  json j;
  j["master_seed"] = config.master_seed;
  json cohort;
  if (config.cohort.kind == CohortConfig::Kind::Csv) {
    cohort["source"] = "csv";
    cohort["path"] = config.cohort.csv_path;
  } else {
    cohort["source"] = "synthetic";
    cohort["seed"] = cohort_seed(config);
    cohort["spec"] = dataset::to_yaml(config.cohort.spec);
  }
  j["cohort"] = cohort;
  j["k_folds"] = config.k_folds;
  j["fold_seed"] = fold_seed(config);
  json grid = json::array();
  for (const auto& m : config.models) {
    const auto& s = m.spec;
    grid.push_back({{"name", s.name()},
                    {"seed", model_seed(config, m)},
                    {"C", s.C},
                    {"max_depth", s.max_depth ? json(*s.max_depth) : json(nullptr)},
                    {"n_trees", s.n_trees ? json(*s.n_trees) : json(nullptr)},
                    {"gamma", s.gamma ? json(*s.gamma) : json(nullptr)},
                    {"coef0", s.coef0},
                    {"bootstrap", s.bootstrap},
                    {"max_features", s.max_features ? json(*s.max_features) : json(nullptr)}});
  }
  j["models"] = grid;
  json protocols = json::array();
  for (auto p : config.protocols) protocols.push_back(std::string(dataset::short_name(p)));
  j["protocols"] = protocols;
  j["permutation_repeats"] = config.permutation_repeats;
  j["age_bin_edges"] = config.age_bin_edges;
  j["clamp_test_scaling"] = config.clamp_test_scaling;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng::fnv1a(canonical_config(config))));
  return buf;
}

}  // namespace fairbench::experiment
