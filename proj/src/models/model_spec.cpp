#include "fairbench/models/model_spec.hpp"

#include <charconv>
#include <cmath>

#include "fairbench/error.hpp"

namespace fairbench::models {

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::LogR: return "LogR";
    case Family::SVM: return "SVM";
    case Family::KNN: return "KNN";
    case Family::DecisionTree: return "DT";
    case Family::RandomForest: return "RF";
  }
  return "?";
}

std::string_view to_string(Kernel k) noexcept {
  switch (k) {
    case Kernel::LN: return "LN";
    case Kernel::RBF: return "RBF";
    case Kernel::P2: return "P2";
    case Kernel::P3: return "P3";
    case Kernel::P4: return "P4";
  }
  return "?";
}

std::optional<Kernel> parse_kernel(std::string_view name) noexcept {
  for (Kernel k : {Kernel::LN, Kernel::RBF, Kernel::P2, Kernel::P3, Kernel::P4})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

std::optional<Family> parse_family(std::string_view name) noexcept {
  for (Family f : {Family::LogR, Family::SVM, Family::KNN, Family::DecisionTree, Family::RandomForest})
    if (to_string(f) == name) return f;
  if (name == "DecisionTree") return Family::DecisionTree;
  if (name == "RandomForest") return Family::RandomForest;
  return std::nullopt;
}

ModelSpec ModelSpec::logistic_regression(double C) {
  ModelSpec s;
  s.family = Family::LogR;
  s.C = C;
  return s;
}

ModelSpec ModelSpec::svm(Kernel kernel, double C) {
  ModelSpec s;
  s.family = Family::SVM;
  s.kernel = kernel;
  s.C = C;
  return s;
}

ModelSpec ModelSpec::knn(int k) {
  ModelSpec s;
  s.family = Family::KNN;
  s.k_neighbors = k;
  return s;
}

ModelSpec ModelSpec::decision_tree() {
  ModelSpec s;
  s.family = Family::DecisionTree;
  return s;
}

ModelSpec ModelSpec::random_forest(int n_trees) {
  ModelSpec s;
  s.family = Family::RandomForest;
  s.n_trees = n_trees;
  return s;
}

void ModelSpec::validate() const {
  auto bad = [](const std::string& why) { throw Error(ErrorCode::InvalidArgument, why); };
  if (kernel.has_value() != (family == Family::SVM)) bad("kernel is set iff family is SVM");
  if (k_neighbors.has_value() != (family == Family::KNN)) bad("k_neighbors is set iff family is KNN");
  if (n_trees.has_value() != (family == Family::RandomForest)) bad("n_trees is set iff family is RF");
  if (max_depth && family != Family::DecisionTree && family != Family::RandomForest)
    bad("max_depth applies to tree families only");
  if (k_neighbors && *k_neighbors < 1) bad("k_neighbors must be >= 1");
  if (n_trees && *n_trees < 1) bad("n_trees must be >= 1");
  if (max_depth && *max_depth < 0) bad("max_depth must be >= 0");
  if (max_features && *max_features < 1) bad("max_features must be >= 1");
  if (!(C > 0.0) || !std::isfinite(C)) bad("C must be positive");
  if (gamma && !(*gamma > 0.0)) bad("gamma must be positive");
}

std::string ModelSpec::name() const {
  switch (family) {
    case Family::SVM: return "SVM-" + std::string(to_string(kernel.value_or(Kernel::LN)));
    case Family::KNN: return std::to_string(k_neighbors.value_or(1)) + "-NN";
    default: return std::string(to_string(family));
  }
}

ModelSpec parse_model_name(std::string_view name) {
  if (name.starts_with("SVM-")) {
    if (auto k = parse_kernel(name.substr(4))) return ModelSpec::svm(*k);
  } else if (name.ends_with("-NN")) {
    const auto digits = name.substr(0, name.size() - 3);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && k >= 1) return ModelSpec::knn(k);
  } else if (auto f = parse_family(name)) {
    switch (*f) {
      case Family::LogR: return ModelSpec::logistic_regression();
      case Family::DecisionTree: return ModelSpec::decision_tree();
      case Family::RandomForest: return ModelSpec::random_forest();
      default: break;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown model name '" + std::string(name) + "'");
}

std::vector<ModelSpec> default_model_grid() {
  std::vector<ModelSpec> grid;
  grid.push_back(ModelSpec::logistic_regression());
  for (Kernel k : {Kernel::RBF, Kernel::LN, Kernel::P2, Kernel::P3, Kernel::P4}) grid.push_back(ModelSpec::svm(k));
  for (int k : {1, 2, 4, 8, 12}) grid.push_back(ModelSpec::knn(k));
  grid.push_back(ModelSpec::decision_tree());
  grid.push_back(ModelSpec::random_forest());
  return grid;
}

}  // namespace fairbench::models
