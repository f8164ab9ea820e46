#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "fairbench/dataset/features.hpp"
#include "fairbench/dataset/folds.hpp"
#include "fairbench/models/kernel.hpp"
#include "fairbench/models/knn.hpp"
#include "fairbench/models/logistic.hpp"
#include "fairbench/models/svm.hpp"
#include "fairbench/models/trained_model.hpp"
#include "fairbench/models/tree.hpp"
#include "support.hpp"

using namespace fairbench;
using namespace fairbench::models;
using support::code_of;

namespace {

double accuracy(const std::vector<int>& a, std::span<const int> b) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

// Weighted child Gini computed by direct counting for every candidate
// threshold, in feature order then ascending threshold.
std::optional<SplitCandidate> brute_force_split(const Matrix& X, std::span<const int> y,
                                                std::span<const std::size_t> rows,
                                                std::span<const std::size_t> features) {
  auto impurity_of = [](std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 1.0 - p * p - (1.0 - p) * (1.0 - p);
  };
  std::optional<SplitCandidate> best;
  for (std::size_t f : features) {
    std::set<double> values;
    for (std::size_t r : rows) values.insert(X(r, f));
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const double t = (v[i] + v[i + 1]) / 2.0;
      std::size_t nl = 0, pl = 0, nr = 0, pr = 0;
      for (std::size_t r : rows) {
        if (X(r, f) <= t) {
          ++nl;
          pl += y[r];
        } else {
          ++nr;
          pr += y[r];
        }
      }
      const double imp =
          (static_cast<double>(nl) * impurity_of(pl, nl) + static_cast<double>(nr) * impurity_of(pr, nr)) /
          static_cast<double>(rows.size());
      if (!best || imp < best->impurity - 1e-12) best = SplitCandidate{static_cast<int>(f), t, imp};
    }
  }
  return best;
}

int knn_oracle(const Matrix& P, const std::vector<int>& labels, int k, std::span<const double> x) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t i = 0; i < P.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < P.cols(); ++j) s += (P(i, j) - x[j]) * (P(i, j) - x[j]);
    d.emplace_back(s, i);
  }
  std::sort(d.begin(), d.end());
  int votes = 0;
  const auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), d.size());
  for (std::size_t i = 0; i < kk; ++i) votes += labels[d[i].second] ? 1 : -1;
  if (votes == 0) return labels[d[0].second];
  return votes > 0 ? 1 : 0;
}

struct Split {
  Matrix X;
  std::vector<int> y;
};

std::pair<Split, Split> default_fold(dataset::Protocol p, std::size_t fold, std::uint64_t seed = 42) {
  const auto cohort = support::default_cohort(seed);
  const auto folds = dataset::stratified_kfold(cohort, 5, 1000 + seed);
  const auto train_recs = cohort.subset(folds[fold].train);
  const auto test_recs = cohort.subset(folds[fold].test);
  auto train = dataset::encode_features(train_recs, p, dataset::FitHere{});
  auto test = dataset::encode_features(test_recs, p, train.scaler);
  return {{train.features.rows, train.features.labels}, {test.features.rows, test.features.labels}};
}

}  // namespace

TEST_SUITE("kernel") {
  TEST_CASE("hand-evaluated values") {
    const std::vector<double> u{0.3, -1.2, 4.0}, e1{1, 0}, e2{0, 1}, ones{1, 1};
    CHECK(kernel_eval(Kernel::RBF, u, u, 0.7, 1.0) == 1.0);
    CHECK(kernel_eval(Kernel::LN, e1, e2, 1.0, 1.0) == 0.0);
    CHECK(kernel_eval(Kernel::P2, ones, ones, 0.5, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(kernel_eval(Kernel::P3, ones, ones, 0.5, 1.0) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(kernel_eval(Kernel::P4, ones, ones, 0.5, 1.0) == doctest::Approx(16.0).epsilon(1e-15));
    CHECK(kernel_eval(Kernel::RBF, e1, e2, 0.5, 1.0) == doctest::Approx(std::exp(-1.0)));
  }

  TEST_CASE("contract violations") {
    const std::vector<double> a{1, 2}, b{1, 2, 3};
    CHECK(code_of([&] { kernel_eval(Kernel::LN, a, b, 1.0, 1.0); }) == ErrorCode::DimensionMismatch);
    CHECK(code_of([&] { kernel_eval(Kernel::RBF, a, a, 0.0, 1.0); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("symmetry") {
    rng::Stream s(5);
    for (int i = 0; i < 50; ++i) {
      const Matrix m = support::random_matrix(2, 4, s);
      for (Kernel k : {Kernel::LN, Kernel::RBF, Kernel::P2, Kernel::P3, Kernel::P4})
        CHECK(kernel_eval(k, m.row(0), m.row(1), 0.3, 1.0) == kernel_eval(k, m.row(1), m.row(0), 0.3, 1.0));
    }
  }
}

TEST_SUITE("logistic") {
  TEST_CASE("analytic gradient agrees with central differences") {
    rng::Stream s(31);
    for (int dataset = 0; dataset < 3; ++dataset) {
      const Matrix X = support::random_matrix(40, 5, s);
      const auto y = support::random_labels(X, s);
      const double lambda = 1.0 / 40.0;
      for (int point = 0; point < 10; ++point) {
        LogisticParams p{std::vector<double>(5), 0.0};
        for (double& w : p.weights) w = 2.0 * (s.uniform_open() - 0.5);
        p.bias = 2.0 * (s.uniform_open() - 0.5);
        const LogisticParams g = logistic_gradient(p, X, y, lambda);
        std::vector<double> analytic = g.weights, numeric;
        analytic.push_back(g.bias);
        const double h = 1e-6;
        for (std::size_t j = 0; j <= 5; ++j) {
          LogisticParams up = p, dn = p;
          (j < 5 ? up.weights[j] : up.bias) += h;
          (j < 5 ? dn.weights[j] : dn.bias) -= h;
          numeric.push_back((logistic_loss(up, X, y, lambda) - logistic_loss(dn, X, y, lambda)) / (2 * h));
        }
        double diff = 0, na = 0, nn = 0;
        for (std::size_t j = 0; j < analytic.size(); ++j) {
          diff += (analytic[j] - numeric[j]) * (analytic[j] - numeric[j]);
          na += analytic[j] * analytic[j];
          nn += numeric[j] * numeric[j];
        }
        CHECK(std::sqrt(diff) / std::max(std::sqrt(std::max(na, nn)), 1e-12) < 1e-5);
      }
    }
  }

  TEST_CASE("bias is not regularised") {
    const Matrix X = Matrix::from_rows({{0.0}, {1.0}});
    const std::vector<int> y{0, 1};
    const LogisticParams p{{0.0}, 3.0};
    const double l0 = logistic_loss(p, X, y, 0.0);
    const double l1 = logistic_loss(p, X, y, 10.0);
    CHECK(l0 == l1);
  }

  TEST_CASE("learns a one-dimensional threshold rule") {
    rng::Stream s(17);
    Matrix X(200, 1);
    std::vector<int> y(200);
    for (std::size_t i = 0; i < 200; ++i) {
      X(i, 0) = s.uniform_open();
      y[i] = X(i, 0) > 0.5 ? 1 : 0;
    }
    const auto model = train(ModelSpec::logistic_regression(), X, y);
    CHECK(accuracy(model.predict(X), y) >= 0.95);
    const auto fit = fit_logistic(X, y, 1.0);
    CHECK(fit.converged);
    CHECK(fit.gradient_max_norm < 1e-6);
  }

  TEST_CASE("descent lowers the objective relative to the origin") {
    rng::Stream s(3);
    const Matrix X = support::random_matrix(60, 4, s);
    const auto y = support::random_labels(X, s);
    const auto fit = fit_logistic(X, y, 1.0);
    const double lambda = 1.0 / 60.0;
    CHECK(logistic_loss(fit.params, X, y, lambda) < logistic_loss({std::vector<double>(4), 0.0}, X, y, lambda));
  }

  TEST_CASE("single-class training is rejected") {
    const Matrix X = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
    const std::vector<int> y{1, 1, 1};
    CHECK(code_of([&] { train(ModelSpec::logistic_regression(), X, y); }) == ErrorCode::SingleClassTraining);
    CHECK(code_of([&] { train(ModelSpec::svm(Kernel::RBF), X, y); }) == ErrorCode::SingleClassTraining);
    CHECK(code_of([&] { train(ModelSpec::decision_tree(), X, y); }) == ErrorCode::SingleClassTraining);
  }
}

TEST_SUITE("svm") {
  TEST_CASE("dual feasibility and KKT conditions on random data") {
    rng::Stream s(99);
    for (Kernel k : {Kernel::LN, Kernel::RBF, Kernel::P2, Kernel::P3, Kernel::P4}) {
      for (int dataset = 0; dataset < 5; ++dataset) {
        const Matrix X = support::random_matrix(50, 4, s, 0.0, 1.0);
        const auto y = support::random_labels(X, s, 1.0);
        const double C = 1.0;
        const double gamma = default_gamma(X);
        const SvmFit fit = fit_svm(X, y, k, C, gamma, 1.0);
        CAPTURE(to_string(k));
        CHECK(fit.converged);
        double balance = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) {
          CHECK(fit.full_alpha[i] >= 0.0);
          CHECK(fit.full_alpha[i] <= C);
          balance += fit.full_alpha[i] * (y[i] ? 1.0 : -1.0);
        }
        CHECK(std::abs(balance) <= 1e-6);

        // With the libsvm stopping rule the margin violations are bounded by
        // the tolerance.
        for (std::size_t i = 0; i < X.rows(); ++i) {
          const double yi = y[i] ? 1.0 : -1.0;
          const double margin = yi * svm_decision(fit.params, X.row(i));
          if (fit.full_alpha[i] <= 0.0) CHECK(margin >= 1.0 - 2e-3);
          if (fit.full_alpha[i] >= C) CHECK(margin <= 1.0 + 2e-3);
        }
      }
    }
  }

  TEST_CASE("support vectors carry the non-zero coefficients") {
    rng::Stream s(4);
    const Matrix X = support::random_matrix(30, 3, s);
    const auto y = support::random_labels(X, s);
    const SvmFit fit = fit_svm(X, y, Kernel::RBF, 1.0, 0.5, 1.0);
    const auto nonzero = std::count_if(fit.full_alpha.begin(), fit.full_alpha.end(), [](double a) { return a > 0; });
    CHECK(static_cast<std::size_t>(nonzero) == fit.params.support_vectors.rows());
    CHECK(fit.params.alpha.size() == fit.params.signs.size());
  }

  TEST_CASE("separable data is fit exactly") {
    const Matrix X = Matrix::from_rows({{0.0, 0.1}, {0.1, 0.0}, {0.2, 0.1}, {0.9, 1.0}, {1.0, 0.8}, {0.8, 0.9}});
    const std::vector<int> y{0, 0, 0, 1, 1, 1};
    for (Kernel k : {Kernel::LN, Kernel::RBF, Kernel::P2}) {
      const auto m = train(ModelSpec::svm(k, 10.0), X, y);
      CHECK(m.predict(X) == y);
    }
  }

  TEST_CASE("default gamma") {
    const Matrix X = Matrix::from_rows({{0.0, 0.0}, {2.0, 4.0}});
    // column variances 1 and 4, mean 2.5, d = 2
    CHECK(default_gamma(X) == doctest::Approx(1.0 / 5.0));
    CHECK(default_gamma(Matrix::from_rows({{1.0}, {1.0}})) == 1.0);
  }

  TEST_CASE("width mismatch at prediction") {
    const Matrix X = Matrix::from_rows({{0.0, 0.0}, {1.0, 1.0}, {0.1, 0.2}, {0.9, 0.8}});
    const std::vector<int> y{0, 1, 0, 1};
    const auto m = train(ModelSpec::svm(Kernel::LN), X, y);
    CHECK(code_of([&] { m.predict(Matrix(2, 3)); }) == ErrorCode::DimensionMismatch);
  }
}

TEST_SUITE("knn") {
  TEST_CASE("1-NN reproduces training labels") {
    rng::Stream s(8);
    const Matrix X = support::random_matrix(40, 3, s);
    const auto y = support::random_labels(X, s, 2.0);
    const auto m = train(ModelSpec::knn(1), X, y);
    CHECK(m.predict(X) == y);
  }

  TEST_CASE("agrees with a sort-based oracle, including ties") {
    rng::Stream s(12);
    for (int trial = 0; trial < 200; ++trial) {
      Matrix P(12, 2);
      for (double& v : P.data()) v = static_cast<double>(s.uniform_index(3));  // many equal distances
      std::vector<int> labels(12);
      for (int& l : labels) l = static_cast<int>(s.uniform_index(2));
      const int k = 1 + static_cast<int>(s.uniform_index(12));
      const KnnParams params{P, labels, k};
      const std::vector<double> x{static_cast<double>(s.uniform_index(3)), static_cast<double>(s.uniform_index(3))};
      CHECK(knn_predict_one(params, x) == knn_oracle(P, labels, k, x));
    }
  }

  TEST_CASE("even vote tie falls back to the nearest neighbour") {
    const Matrix P = Matrix::from_rows({{0.0}, {1.0}, {5.0}});
    const KnnParams params{P, {1, 0, 0}, 2};
    const std::vector<double> x{0.1};
    CHECK(knn_predict_one(params, x) == 1);
  }
}

TEST_SUITE("tree") {
  TEST_CASE("gini split matches an exhaustive search") {
    rng::Stream s(21);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 2 + s.uniform_index(20), d = 1 + s.uniform_index(4);
      Matrix X(n, d);
      for (double& v : X.data()) v = static_cast<double>(s.uniform_index(5));
      std::vector<int> y(n);
      for (int& l : y) l = static_cast<int>(s.uniform_index(2));
      std::vector<std::size_t> rows(n);
      for (auto& r : rows) r = s.uniform_index(n);  // duplicates allowed, as in a bootstrap
      std::vector<std::size_t> features(d);
      std::iota(features.begin(), features.end(), 0);
      const auto got = best_gini_split(X, y, rows, features);
      const auto want = brute_force_split(X, y, rows, features);
      REQUIRE(got.has_value() == want.has_value());
      if (!got) continue;
      CHECK(got->feature == want->feature);
      CHECK(got->threshold == want->threshold);
      CHECK(std::abs(got->impurity - want->impurity) <= 1e-12);
    }
  }

  TEST_CASE("constant features give no split") {
    const Matrix X = Matrix::from_rows({{1.0}, {1.0}, {1.0}});
    const std::vector<int> y{0, 1, 0};
    const std::vector<std::size_t> rows{0, 1, 2}, features{0};
    CHECK_FALSE(best_gini_split(X, y, rows, features).has_value());
    CHECK(gini(1, 2) == 0.5);
    CHECK(gini(0, 5) == 0.0);
  }

  TEST_CASE("root split on the default cohort is the platelet column") {
    for (auto p : {dataset::Protocol::DemographicAware, dataset::Protocol::DemographicUnaware}) {
      const auto cohort = support::default_cohort(42);
      const auto enc = dataset::encode_features(cohort, p, dataset::FitHere{});
      const auto m = train(ModelSpec::decision_tree(), enc.features.rows, enc.features.labels);
      const auto& tree = std::get<Tree>(m.params());
      const auto plt = static_cast<int>(std::find(enc.features.column_names.begin(), enc.features.column_names.end(),
                                                  "dx_plt_ct") -
                                        enc.features.column_names.begin());
      CHECK(tree.nodes[0].feature == plt);
      CHECK(tree.nodes.size() == 3);

      std::vector<std::size_t> rows(enc.features.rows.rows()), features(enc.features.rows.cols());
      std::iota(rows.begin(), rows.end(), 0);
      std::iota(features.begin(), features.end(), 0);
      const auto oracle = brute_force_split(enc.features.rows, enc.features.labels, rows, features);
      CHECK(oracle->feature == plt);
      CHECK(oracle->impurity == 0.0);
    }
  }

  TEST_CASE("unlimited tree fits distinct training rows perfectly and respects max_depth") {
    rng::Stream s(2);
    const Matrix X = support::random_matrix(60, 3, s);
    const auto y = support::random_labels(X, s, 2.0);
    const auto full = train(ModelSpec::decision_tree(), X, y);
    CHECK(full.predict(X) == y);
    ModelSpec shallow = ModelSpec::decision_tree();
    shallow.max_depth = 2;
    CHECK(std::get<Tree>(train(shallow, X, y).params()).depth() <= 2);
  }

  TEST_CASE("samples equal to the threshold go left") {
    Tree t;
    t.nodes = {TreeNode{0, 0.5, 1, 2, 0, 2}, TreeNode{-1, 0, -1, -1, 1, 1}, TreeNode{-1, 0, -1, -1, 0, 1}};
    const std::vector<double> at{0.5}, above{0.51};
    CHECK(t.predict_one(at) == 1);
    CHECK(t.predict_one(above) == 0);
    CHECK(t.used_features() == std::vector<int>{0});
    CHECK(t.depth() == 1);
  }
}

TEST_SUITE("forest") {
  TEST_CASE("no held-out errors on any default fold") {
    for (auto p : {dataset::Protocol::DemographicAware, dataset::Protocol::DemographicUnaware})
      for (std::size_t fold = 0; fold < 5; ++fold) {
        const auto [train_split, test_split] = default_fold(p, fold);
        ModelSpec spec = ModelSpec::random_forest(100);
        spec.seed = 77 + fold;
        const auto m = train(spec, train_split.X, train_split.y);
        CHECK(m.predict(test_split.X) == test_split.y);
        CHECK(std::get<ForestParams>(m.params()).trees.size() == 100);
      }
  }

  TEST_CASE("deterministic in the seed and independent of the worker count") {
    const auto [train_split, test_split] = default_fold(dataset::Protocol::DemographicAware, 0);
    ModelSpec spec = ModelSpec::random_forest(30);
    spec.seed = 5;
    const auto a = train(spec, train_split.X, train_split.y);
    const auto b = train(spec, train_split.X, train_split.y, TrainOptions{4});
    CHECK(a == b);
    spec.seed = 6;
    CHECK_FALSE(train(spec, train_split.X, train_split.y) == a);
  }

  TEST_CASE("feature subsampling uses ceil(sqrt(d)) candidates") {
    // Feature 0 is perfectly predictive; with one candidate per split most
    // stumps cannot see it at the root.
    rng::Stream s(6);
    Matrix X = support::random_matrix(40, 9, s, 0.0, 1.0);
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) y[i] = X(i, 0) > 0.5;
    y[0] = 0;
    X(0, 0) = 0.1;
    y[1] = 1;
    X(1, 0) = 0.9;
    ModelSpec spec = ModelSpec::random_forest(50);
    spec.max_features = 1;
    spec.max_depth = 1;
    const auto forest = std::get<ForestParams>(train(spec, X, y).params());
    std::set<int> roots;
    for (const auto& t : forest.trees) roots.insert(t.nodes[0].feature);
    CHECK(roots.size() > 3);
  }
}

TEST_SUITE("trained model") {
  TEST_CASE("spec names and parsing") {
    std::vector<std::string> names;
    for (const auto& s : default_model_grid()) {
      names.push_back(s.name());
      CHECK(parse_model_name(s.name()) == s);
    }
    CHECK(names == std::vector<std::string>{"LogR", "SVM-RBF", "SVM-LN", "SVM-P2", "SVM-P3", "SVM-P4", "1-NN", "2-NN",
                                            "4-NN", "8-NN", "12-NN", "DT", "RF"});
    CHECK(code_of([] { parse_model_name("SVM-P9"); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([] { parse_model_name("0-NN"); }) == ErrorCode::InvalidConfig);
  }

  TEST_CASE("spec validation") {
    ModelSpec s = ModelSpec::knn(0);
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = ModelSpec::logistic_regression(-1.0);
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = ModelSpec::logistic_regression();
    s.kernel = Kernel::RBF;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
    s = ModelSpec::svm(Kernel::RBF);
    s.gamma = 0.0;
    CHECK(code_of([&] { s.validate(); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("input validation") {
    const Matrix X = Matrix::from_rows({{0.0}, {1.0}, {2.0}});
    const std::vector<int> y2{0, 1}, y3{0, 1, 2}, ok{0, 1, 1};
    CHECK(code_of([&] { train(ModelSpec::decision_tree(), X, y2); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { train(ModelSpec::decision_tree(), X, y3); }) == ErrorCode::InvalidArgument);
    Matrix bad = X;
    bad(1, 0) = std::nan("");
    CHECK(code_of([&] { train(ModelSpec::decision_tree(), bad, ok); }) == ErrorCode::NonFiniteInput);
    const std::vector<int> one{1};
    CHECK(code_of([&] { train(ModelSpec::decision_tree(), Matrix(1, 1), one); }) == ErrorCode::EmptyInput);
    const auto m = train(ModelSpec::knn(1), X, std::vector<int>{1, 1, 1});
    CHECK(m.predict(X) == std::vector<int>{1, 1, 1});
  }

  TEST_CASE("save and load reproduce every family") {
    rng::Stream s(50);
    const Matrix X = support::random_matrix(40, 3, s);
    const auto y = support::random_labels(X, s);
    for (ModelSpec spec : default_model_grid()) {
      spec.seed = 3;
      if (spec.n_trees) spec.n_trees = 10;
      const auto m = train(spec, X, y);
      std::stringstream buffer;
      save_model(m, buffer);
      const auto loaded = load_model(buffer);
      CAPTURE(spec.name());
      CHECK(loaded == m);
      CHECK(loaded.predict(X) == m.predict(X));
    }
  }

  TEST_CASE("malformed model documents") {
    std::stringstream a("not json");
    CHECK(code_of([&] { load_model(a); }) == ErrorCode::FormatError);
    std::stringstream b(R"({"format": "fairbench-model", "format_version": 99})");
    CHECK(code_of([&] { load_model(b); }) == ErrorCode::FormatError);
  }
}
