#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fairbench/matrix.hpp"
#include "fairbench/models/knn.hpp"
#include "fairbench/models/logistic.hpp"
#include "fairbench/models/model_spec.hpp"
#include "fairbench/models/svm.hpp"
#include "fairbench/models/tree.hpp"

namespace fairbench::models {

struct ForestParams {
  std::vector<Tree> trees;

  bool operator==(const ForestParams&) const = default;
};

using FittedParams = std::variant<LogisticParams, SvmParams, KnnParams, Tree, ForestParams>;

// Immutable fitted classifier. Safe to share across threads for predict().
class TrainedModel {
 public:
  TrainedModel(ModelSpec spec, std::size_t input_dim, FittedParams params, std::vector<std::string> warnings = {});

  const ModelSpec& spec() const noexcept { return spec_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  const FittedParams& params() const noexcept { return params_; }

  // Non-fatal training diagnostics such as DidNotConverge.
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool converged() const noexcept { return warnings_.empty(); }

  // Labels in {0, 1}. Throws DimensionMismatch for a width other than input_dim().
  std::vector<int> predict(const Matrix& X) const;
  int predict_one(std::span<const double> x) const;

  bool operator==(const TrainedModel&) const = default;

 private:
  ModelSpec spec_;
  std::size_t input_dim_;
  FittedParams params_;
  std::vector<std::string> warnings_;
};

struct TrainOptions {
  std::size_t workers = 1;  // RF trees may be grown concurrently
};

// Requires n >= 2, finite values, and both classes (KNN accepts one class).
// Errors: SingleClassTraining, NonFiniteInput, LengthMismatch, EmptyInput,
// InvalidArgument (bad spec).
TrainedModel train(const ModelSpec& spec, const Matrix& X, std::span<const int> y, const TrainOptions& options = {});

std::vector<int> predict(const TrainedModel& model, const Matrix& X);

// Versioned JSON document; see docs/model_format.md.
inline constexpr int kModelFormatVersion = 1;
void save_model(const TrainedModel& model, std::ostream& out);
TrainedModel load_model(std::istream& in);

}  // namespace fairbench::models
