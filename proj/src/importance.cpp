#include "fairbench/importance.hpp"

#include <cmath>
#include <numeric>

#include "fairbench/error.hpp"
#include "fairbench/metrics.hpp"
#include "fairbench/parallel.hpp"
#include "fairbench/rng.hpp"

namespace fairbench::importance {
namespace {

FeatureImportance summarize(std::string name, std::span<const double> drops) {
  FeatureImportance out;
  out.feature = std::move(name);
  out.repeats = static_cast<int>(drops.size());
  const double n = static_cast<double>(drops.size());
  out.mean_drop = std::accumulate(drops.begin(), drops.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : drops) ss += (d - out.mean_drop) * (d - out.mean_drop);
  out.std_drop = std::sqrt(ss / n);
  return out;
}

}  // namespace

std::string_view to_string(Split s) noexcept { return s == Split::Train ? "train" : "test"; }

const FeatureImportance* ImportanceResult::find(std::string_view feature) const noexcept {
  for (const auto& f : features)
    if (f.feature == feature) return &f;
  for (const auto& f : grouped)
    if (f.feature == feature) return &f;
  return nullptr;
}

void fisher_yates(std::span<std::size_t> perm, std::uint64_t stream_seed) {
  rng::Stream stream(stream_seed);
  rng::shuffle(perm, stream);
}

ImportanceResult permutation_importance(const models::TrainedModel& model, const Matrix& X, std::span<const int> y,
                                        std::span<const std::string> column_names, int n_repeats, std::uint64_t seed,
                                        const ImportanceOptions& options) {
  if (X.cols() != model.input_dim())
    throw Error(ErrorCode::DimensionMismatch, "model expects " + std::to_string(model.input_dim()) +
                                                  " columns, matrix has " + std::to_string(X.cols()));
  if (column_names.size() != X.cols())
    throw Error(ErrorCode::DimensionMismatch, "column name count does not match matrix width");
  if (y.size() != X.rows()) throw Error(ErrorCode::LengthMismatch, "label count does not match matrix rows");
  if (n_repeats < 1) throw Error(ErrorCode::InvalidArgument, "n_repeats must be >= 1");
  for (const auto& g : options.groups)
    for (std::size_t c : g.columns)
      if (c >= X.cols()) throw Error(ErrorCode::DimensionMismatch, "group '" + g.name + "' names a missing column");

  ImportanceResult result;
  result.split = options.split;
  result.baseline_score = metrics::macro_f1(y, model.predict(X));

  const std::size_t d = X.cols();
  const std::size_t n_targets = d + options.groups.size();
  const auto repeats = static_cast<std::size_t>(n_repeats);
  std::vector<double> drops(n_targets * repeats);

  parallel_for(n_targets * repeats, options.workers, [&](std::size_t task) {
    const std::size_t target = task / repeats;
    const std::size_t repeat = task % repeats;
    std::vector<std::size_t> columns;
    if (target < d) columns = {target};
    else columns = options.groups[target - d].columns;

    std::vector<std::size_t> perm(X.rows());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    options.permute(perm, rng::derive(seed, {static_cast<std::uint64_t>(target), static_cast<std::uint64_t>(repeat)}));

    Matrix shuffled = X;
    for (std::size_t c : columns)
      for (std::size_t r = 0; r < X.rows(); ++r) shuffled(r, c) = X(perm[r], c);
    drops[task] = result.baseline_score - metrics::macro_f1(y, model.predict(shuffled));
  });

  for (std::size_t t = 0; t < n_targets; ++t) {
    const std::span<const double> slice(drops.data() + t * repeats, repeats);
    if (t < d) result.features.push_back(summarize(column_names[t], slice));
    else result.grouped.push_back(summarize(options.groups[t - d].name, slice));
  }
  return result;
}

ImportanceResult permutation_importance(const models::TrainedModel& model, const dataset::FeatureMatrix& features,
                                        int n_repeats, std::uint64_t seed, const ImportanceOptions& options) {
  return permutation_importance(model, features.rows, features.labels, features.column_names, n_repeats, seed,
                                options);
}

std::vector<ColumnGroup> race_column_group(const dataset::FeatureMatrix& features) {
  ColumnGroup group{std::string(kGroupedRaceName), {}};
  for (std::size_t c = 0; c < features.column_names.size(); ++c)
    if (features.column_names[c].starts_with("race_")) group.columns.push_back(c);
  if (group.columns.empty()) return {};
  return {group};
}

}  // namespace fairbench::importance
