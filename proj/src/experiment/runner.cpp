#include "fairbench/experiment/runner.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <numeric>

#include "fairbench/dataset/cohort_io.hpp"
#include "fairbench/dataset/folds.hpp"
#include "fairbench/dataset/synthesize.hpp"
#include "fairbench/error.hpp"
#include "fairbench/logging.hpp"
#include "fairbench/metrics.hpp"
#include "fairbench/parallel.hpp"

namespace fairbench::experiment {
namespace {

using dataset::Protocol;

struct EncodedFold {
  dataset::FeatureMatrix train;
  dataset::FeatureMatrix test;
};

struct CellResult {
  std::vector<int> test_predictions;
  double f1 = 0.0;
  std::size_t input_dim = 0;
  importance::ImportanceResult train_importance;
  importance::ImportanceResult test_importance;
  std::vector<std::string> warnings;
};

std::string group_label(std::string_view attribute, const dataset::SensitiveAttributes& s,
                        std::span<const double> edges) {
  if (attribute == "gender") return std::string(dataset::display_name(s.gender));
  if (attribute == "race") return std::string(dataset::display_name(s.race));
  return dataset::age_group_name(dataset::bin_age(s.age, edges), edges);
}

std::string cell_context(const std::string& model, Protocol p, std::size_t fold) {
  return "model=" + model + " protocol=" + std::string(dataset::short_name(p)) + " fold=" + std::to_string(fold + 1);
}

std::string iso_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

dataset::Cohort load_cohort(const ExperimentConfig& config) {
  try {
    if (config.cohort.kind == CohortConfig::Kind::Csv) return dataset::load_cohort_csv(config.cohort.csv_path);
    return dataset::synthesize_cohort(config.cohort.spec, cohort_seed(config));
  } catch (const Error& e) {
    throw e.with_context("cohort");
  }
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunHooks& hooks) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();

  ExperimentReport report;
  report.provenance.started_at = iso_now();

  const dataset::Cohort cohort = load_cohort(config);
  std::vector<dataset::Fold> folds;
  try {
    folds = dataset::stratified_kfold(cohort, config.k_folds, fold_seed(config));
  } catch (const Error& e) {
    throw e.with_context("fold assignment, k=" + std::to_string(config.k_folds));
  }
  const std::size_t k = folds.size();

  // Encode every (protocol, fold) once; the scaler sees training rows only.
  std::vector<std::vector<EncodedFold>> encoded(config.protocols.size(), std::vector<EncodedFold>(k));
  for (std::size_t p = 0; p < config.protocols.size(); ++p) {
    for (std::size_t f = 0; f < k; ++f) {
      const Protocol protocol = config.protocols[p];
      const auto train_records = cohort.subset(folds[f].train);
      const auto test_records = cohort.subset(folds[f].test);
      auto train = dataset::encode_features(train_records, protocol, dataset::FitHere{}, config.clamp_test_scaling);
      if (hooks.on_scaler) hooks.on_scaler(protocol, f, folds[f].train, train.scaler);
      auto test = dataset::encode_features(test_records, protocol, train.scaler, config.clamp_test_scaling);
      encoded[p][f] = {std::move(train.features), std::move(test.features)};
    }
  }

  for (std::size_t f = 0; f < k; ++f) {
    std::array<std::size_t, 4> race_counts{};
    for (std::size_t i : folds[f].test) ++race_counts[dataset::index_of(cohort[i].race)];
    for (dataset::Race r : dataset::kRaces) {
      const std::size_t n = race_counts[dataset::index_of(r)];
      if (n < 2)
        report.fold_flags.push_back("fold " + std::to_string(f + 1) + ": race group " +
                                    std::string(dataset::display_name(r)) + " has " + std::to_string(n) +
                                    " test member(s)");
    }
  }

  const std::size_t n_models = config.models.size();
  const std::size_t n_protocols = config.protocols.size();
  std::vector<CellResult> cells(n_models * n_protocols * k);

  parallel_for(cells.size(), config.workers, [&](std::size_t task) {
    const std::size_t m = task / (n_protocols * k);
    const std::size_t p = (task / k) % n_protocols;
    const std::size_t f = task % k;
    const ModelEntry& entry = config.models[m];
    const Protocol protocol = config.protocols[p];
    const std::string name = entry.spec.name();
    const EncodedFold& data = encoded[p][f];

    try {
      models::ModelSpec spec = entry.spec;
      spec.seed = fit_seed(model_seed(config, entry), protocol, f);
      if (hooks.on_fit) hooks.on_fit(name, protocol, f, data.train.rows.cols());
      const models::TrainedModel model = models::train(spec, data.train.rows, data.train.labels);

      CellResult& cell = cells[task];
      cell.input_dim = model.input_dim();
      cell.warnings = model.warnings();
      cell.test_predictions = model.predict(data.test.rows);
      cell.f1 = metrics::macro_f1(data.test.labels, cell.test_predictions);

      importance::ImportanceOptions opts;
      opts.groups = importance::race_column_group(data.train);
      opts.split = importance::Split::Train;
      cell.train_importance = importance::permutation_importance(
          model, data.train, config.permutation_repeats, importance_seed(config, name, protocol, f, true), opts);
      opts.split = importance::Split::Test;
      cell.test_importance = importance::permutation_importance(
          model, data.test, config.permutation_repeats, importance_seed(config, name, protocol, f, false), opts);
    } catch (const Error& e) {
      throw e.with_context(cell_context(name, protocol, f));
    }
  });

  for (const auto& entry : config.models) report.models.push_back(entry.spec.name());
  for (Protocol p : config.protocols) report.protocols.emplace_back(dataset::short_name(p));
  report.k_folds = k;
  report.age_bin_edges = config.age_bin_edges;

  for (std::size_t m = 0; m < n_models; ++m) {
    for (std::size_t p = 0; p < n_protocols; ++p) {
      ReportEntry entry;
      entry.model = report.models[m];
      entry.protocol = report.protocols[p];

      std::vector<int> pooled_true, pooled_pred;
      std::vector<const dataset::SensitiveAttributes*> pooled_sensitive;
      for (std::size_t f = 0; f < k; ++f) {
        CellResult& cell = cells[(m * n_protocols + p) * k + f];
        const EncodedFold& data = encoded[p][f];
        entry.input_dim = cell.input_dim;
        entry.fold_f1.push_back(cell.f1);
        entry.train_importance.push_back(std::move(cell.train_importance));
        entry.test_importance.push_back(std::move(cell.test_importance));
        for (const auto& w : cell.warnings) entry.warnings.push_back("fold " + std::to_string(f + 1) + ": " + w);
        pooled_true.insert(pooled_true.end(), data.test.labels.begin(), data.test.labels.end());
        pooled_pred.insert(pooled_pred.end(), cell.test_predictions.begin(), cell.test_predictions.end());
        for (const auto& s : data.test.sensitive) pooled_sensitive.push_back(&s);
      }
      entry.mean_f1 = std::accumulate(entry.fold_f1.begin(), entry.fold_f1.end(), 0.0) / static_cast<double>(k);

      for (std::string_view attribute : kAttributes) {
        AttributeFairness af;
        af.attribute = std::string(attribute);
        std::vector<std::string> groups;
        for (const auto* s : pooled_sensitive) groups.push_back(group_label(attribute, *s, config.age_bin_edges));
        try {
          af.pooled = metrics::equalized_odds(metrics::group_rates(pooled_true, pooled_pred, groups));
        } catch (const Error& e) {
          throw e.with_context("model=" + entry.model + " protocol=" + entry.protocol + " attribute=" + af.attribute);
        }

        std::size_t offset = 0;
        for (std::size_t f = 0; f < k; ++f) {
          const std::size_t n = encoded[p][f].test.labels.size();
          const std::span<const int> yt(pooled_true.data() + offset, n);
          const std::span<const int> yp(pooled_pred.data() + offset, n);
          const std::span<const std::string> g(groups.data() + offset, n);
          try {
            af.per_fold.push_back(metrics::equalized_odds(metrics::group_rates(yt, yp, g)));
          } catch (const Error& e) {
            if (e.code() != ErrorCode::NoEvaluableGroups) throw;
            af.per_fold.push_back(std::nullopt);
          }
          offset += n;
        }
        entry.fairness.push_back(std::move(af));
      }
      for (const auto& w : entry.warnings) log::warn(entry.model + " (" + entry.protocol + ") " + w);
      report.entries.push_back(std::move(entry));
    }
  }

  Provenance& prov = report.provenance;
  prov.toolkit_version = FAIRBENCH_VERSION;
  prov.config_hash = config_hash(config);
  prov.master_seed = config.master_seed;
  prov.fold_seed = fold_seed(config);
  if (const auto* csv = std::get_if<dataset::CsvSource>(&cohort.source())) {
    prov.cohort_source = "csv:" + csv->path;
    prov.cohort_seed = 0;
  } else {
    prov.cohort_seed = cohort_seed(config);
    prov.cohort_source = "synthetic:" + std::to_string(prov.cohort_seed);
  }
  prov.n_itp = cohort.n_itp();
  prov.n_non_itp = cohort.n_non_itp();
  prov.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace fairbench::experiment
