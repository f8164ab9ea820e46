#include <istream>
#include <ostream>

#include <json.hpp>

#include "fairbench/error.hpp"
#include "fairbench/models/trained_model.hpp"

namespace fairbench::models {
namespace {

using nlohmann::json;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

Matrix matrix_from_json(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.rows() * m.cols()) throw Error(ErrorCode::FormatError, "matrix data size mismatch");
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

json tree_to_json(const Tree& t) {
  json nodes = json::array();
  for (const auto& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.label, n.n_samples});
  return nodes;
}

Tree tree_from_json(const json& j) {
  Tree t;
  for (const auto& n : j) {
    t.nodes.push_back(TreeNode{n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(), n.at(3).get<int>(),
                               n.at(4).get<int>(), n.at(5).get<std::size_t>()});
  }
  const int count = static_cast<int>(t.nodes.size());
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count))
      throw Error(ErrorCode::FormatError, "tree node child index out of range");
  return t;
}

template <typename T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  j[key] = v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json spec_to_json(const ModelSpec& s) {
  json j;
  j["family"] = std::string(to_string(s.family));
  j["kernel"] = s.kernel ? json(std::string(to_string(*s.kernel))) : json(nullptr);
  put_optional(j, "k_neighbors", s.k_neighbors);
  put_optional(j, "n_trees", s.n_trees);
  put_optional(j, "max_depth", s.max_depth);
  j["C"] = s.C;
  j["seed"] = s.seed;
  put_optional(j, "gamma", s.gamma);
  j["coef0"] = s.coef0;
  j["bootstrap"] = s.bootstrap;
  put_optional(j, "max_features", s.max_features);
  return j;
}

ModelSpec spec_from_json(const json& j) {
  ModelSpec s;
  const auto family = parse_family(j.at("family").get<std::string>());
  if (!family) throw Error(ErrorCode::FormatError, "unknown model family");
  s.family = *family;
  if (!j.at("kernel").is_null()) {
    const auto k = parse_kernel(j.at("kernel").get<std::string>());
    if (!k) throw Error(ErrorCode::FormatError, "unknown kernel");
    s.kernel = *k;
  }
  s.k_neighbors = get_optional<int>(j, "k_neighbors");
  s.n_trees = get_optional<int>(j, "n_trees");
  s.max_depth = get_optional<int>(j, "max_depth");
  s.C = j.at("C").get<double>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.gamma = get_optional<double>(j, "gamma");
  s.coef0 = j.at("coef0").get<double>();
  s.bootstrap = j.at("bootstrap").get<bool>();
  s.max_features = get_optional<int>(j, "max_features");
  return s;
}

}  // namespace

void save_model(const TrainedModel& model, std::ostream& out) {
  json j;
  j["format"] = "fairbench-model";
  j["format_version"] = kModelFormatVersion;
  j["spec"] = spec_to_json(model.spec());
  j["input_dim"] = model.input_dim();
  j["warnings"] = model.warnings();
  j["params"] = std::visit(
      overloaded{
          [](const LogisticParams& p) -> json {
            return {{"type", "logr"}, {"weights", p.weights}, {"bias", p.bias}};
          },
          [](const SvmParams& p) -> json {
            return {{"type", "svm"},
                    {"kernel", std::string(to_string(p.kernel))},
                    {"gamma", p.gamma},
                    {"coef0", p.coef0},
                    {"C", p.C},
                    {"support_vectors", matrix_to_json(p.support_vectors)},
                    {"alpha", p.alpha},
                    {"signs", p.signs},
                    {"bias", p.bias}};
          },
          [](const KnnParams& p) -> json {
            return {{"type", "knn"}, {"k", p.k}, {"points", matrix_to_json(p.points)}, {"labels", p.labels}};
          },
          [](const Tree& t) -> json { return {{"type", "tree"}, {"nodes", tree_to_json(t)}}; },
          [](const ForestParams& f) -> json {
            json trees = json::array();
            for (const auto& t : f.trees) trees.push_back(tree_to_json(t));
            return {{"type", "forest"}, {"trees", trees}};
          },
      },
      model.params());
  out << j.dump() << '\n';
  if (!out) throw Error(ErrorCode::IoError, "failed to write model");
}

TrainedModel load_model(std::istream& in) {
  try {
    const json j = json::parse(in);
    if (j.at("format").get<std::string>() != "fairbench-model")
      throw Error(ErrorCode::FormatError, "not a fairbench model document");
    const int version = j.at("format_version").get<int>();
    if (version != kModelFormatVersion)
      throw Error(ErrorCode::FormatError, "unsupported model format version " + std::to_string(version));

    ModelSpec spec = spec_from_json(j.at("spec"));
    const auto dim = j.at("input_dim").get<std::size_t>();
    auto warnings = j.at("warnings").get<std::vector<std::string>>();
    const json& p = j.at("params");
    const std::string type = p.at("type").get<std::string>();

    FittedParams params;
    if (type == "logr") {
      params = LogisticParams{p.at("weights").get<std::vector<double>>(), p.at("bias").get<double>()};
    } else if (type == "svm") {
      SvmParams s;
      const auto kernel = parse_kernel(p.at("kernel").get<std::string>());
      if (!kernel) throw Error(ErrorCode::FormatError, "unknown kernel");
      s.kernel = *kernel;
      s.gamma = p.at("gamma").get<double>();
      s.coef0 = p.at("coef0").get<double>();
      s.C = p.at("C").get<double>();
      s.support_vectors = matrix_from_json(p.at("support_vectors"));
      s.alpha = p.at("alpha").get<std::vector<double>>();
      s.signs = p.at("signs").get<std::vector<int>>();
      s.bias = p.at("bias").get<double>();
      if (s.alpha.size() != s.support_vectors.rows() || s.signs.size() != s.alpha.size())
        throw Error(ErrorCode::FormatError, "support vector count mismatch");
      params = std::move(s);
    } else if (type == "knn") {
      KnnParams k{matrix_from_json(p.at("points")), p.at("labels").get<std::vector<int>>(), p.at("k").get<int>()};
      if (k.labels.size() != k.points.rows()) throw Error(ErrorCode::FormatError, "knn label count mismatch");
      params = std::move(k);
    } else if (type == "tree") {
      params = tree_from_json(p.at("nodes"));
    } else if (type == "forest") {
      ForestParams f;
      for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t));
      params = std::move(f);
    } else {
      throw Error(ErrorCode::FormatError, "unknown params type '" + type + "'");
    }
    return TrainedModel(std::move(spec), dim, std::move(params), std::move(warnings));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("model document: ") + e.what());
  }
}

}  // namespace fairbench::models
