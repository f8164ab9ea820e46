#include "fairbench/models/trained_model.hpp"

#include <cmath>
#include <string>

#include "fairbench/error.hpp"
#include "fairbench/logging.hpp"
#include "fairbench/parallel.hpp"

namespace fairbench::models {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_training_input(const ModelSpec& spec, const Matrix& X, std::span<const int> y) {
  if (X.rows() != y.size())
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(X.rows()) + " rows but " + std::to_string(y.size()) + " labels");
  if (X.rows() < 2) throw Error(ErrorCode::EmptyInput, "training needs at least 2 samples");
  for (double v : X.data())
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "training matrix contains a non-finite value");
  std::size_t positives = 0;
  for (int label : y) {
    if (label != 0 && label != 1) throw Error(ErrorCode::InvalidArgument, "labels must be 0 or 1");
    positives += static_cast<std::size_t>(label);
  }
  if (spec.family != Family::KNN && (positives == 0 || positives == y.size()))
    throw Error(ErrorCode::SingleClassTraining, spec.name() + " needs both classes in the training data");
}

int forest_vote(const ForestParams& forest, std::span<const double> x) noexcept {
  std::size_t votes = 0;
  for (const auto& tree : forest.trees) votes += static_cast<std::size_t>(tree.predict_one(x));
  return 2 * votes > forest.trees.size() ? 1 : 0;
}

}  // namespace

TrainedModel::TrainedModel(ModelSpec spec, std::size_t input_dim, FittedParams params,
                           std::vector<std::string> warnings)
    : spec_(std::move(spec)), input_dim_(input_dim), params_(std::move(params)), warnings_(std::move(warnings)) {}

int TrainedModel::predict_one(std::span<const double> x) const {
  return std::visit(overloaded{
                        [&](const LogisticParams& p) { return logistic_score(p, x) > 0.0 ? 1 : 0; },
                        [&](const SvmParams& p) { return svm_decision(p, x) > 0.0 ? 1 : 0; },
                        [&](const KnnParams& p) { return knn_predict_one(p, x); },
                        [&](const Tree& t) { return t.predict_one(x); },
                        [&](const ForestParams& f) { return forest_vote(f, x); },
                    },
                    params_);
}

std::vector<int> TrainedModel::predict(const Matrix& X) const {
  if (X.cols() != input_dim_)
    throw Error(ErrorCode::DimensionMismatch, spec_.name() + " was trained on " + std::to_string(input_dim_) +
                                                  " columns, got " + std::to_string(X.cols()));
  std::vector<int> out(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) out[i] = predict_one(X.row(i));
  return out;
}

std::vector<int> predict(const TrainedModel& model, const Matrix& X) { return model.predict(X); }

TrainedModel train(const ModelSpec& spec, const Matrix& X, std::span<const int> y, const TrainOptions& options) {
  spec.validate();
  check_training_input(spec, X, y);
  const std::size_t d = X.cols();
  std::vector<std::string> warnings;

  switch (spec.family) {
    case Family::LogR: {
      auto fit = fit_logistic(X, y, spec.C);
      if (!fit.converged) {
        warnings.push_back("DidNotConverge: LogR stopped after " + std::to_string(fit.iterations) +
                           " iterations with gradient max-norm " + std::to_string(fit.gradient_max_norm));
      }
      for (const auto& w : warnings) log::debug(w);
      return TrainedModel(spec, d, std::move(fit.params), std::move(warnings));
    }
    case Family::SVM: {
      const double gamma = spec.gamma.value_or(default_gamma(X));
      auto fit = fit_svm(X, y, *spec.kernel, spec.C, gamma, spec.coef0);
      if (!fit.converged) {
        warnings.push_back("DidNotConverge: " + spec.name() + " stopped after " + std::to_string(fit.iterations) +
                           " iterations with KKT gap " + std::to_string(fit.kkt_gap));
      }
      for (const auto& w : warnings) log::debug(w);
      return TrainedModel(spec, d, std::move(fit.params), std::move(warnings));
    }
    case Family::KNN: {
      KnnParams p{X, std::vector<int>(y.begin(), y.end()), *spec.k_neighbors};
      return TrainedModel(spec, d, std::move(p));
    }
    case Family::DecisionTree: {
      std::vector<std::size_t> rows(X.rows());
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      TreeGrowOptions grow{spec.max_depth, std::nullopt};
      return TrainedModel(spec, d, grow_tree(X, y, rows, grow, nullptr));
    }
    case Family::RandomForest: {
      const auto n_trees = static_cast<std::size_t>(*spec.n_trees);
      const int max_features =
          spec.max_features.value_or(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(d)))));
      TreeGrowOptions grow{spec.max_depth, max_features};
      ForestParams forest;
      forest.trees.resize(n_trees);
      parallel_for(n_trees, options.workers, [&](std::size_t t) {
        rng::Stream stream(rng::derive(spec.seed, {0x7245, static_cast<std::uint64_t>(t)}));
        std::vector<std::size_t> rows(X.rows());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = spec.bootstrap ? stream.uniform_index(X.rows()) : i;
        forest.trees[t] = grow_tree(X, y, rows, grow, &stream);
      });
      return TrainedModel(spec, d, std::move(forest));
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown model family");
}

}  // namespace fairbench::models
