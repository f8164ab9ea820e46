#include "fairbench/models/tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace fairbench::models {
namespace {

constexpr double kTieEpsilon = 1e-12;

int majority(std::size_t positives, std::size_t total) noexcept { return 2 * positives > total ? 1 : 0; }

struct Grower {
  const Matrix& X;
  std::span<const int> y;
  const TreeGrowOptions& options;
  rng::Stream* stream;
  Tree tree;

  std::vector<std::size_t> candidate_features() {
    std::vector<std::size_t> all(X.cols());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (!options.max_features || static_cast<std::size_t>(*options.max_features) >= all.size() || !stream)
      return all;
    const auto m = static_cast<std::size_t>(*options.max_features);
    // partial Fisher-Yates: first m entries are a uniform subset
    for (std::size_t i = 0; i < m; ++i) std::swap(all[i], all[i + stream->uniform_index(all.size() - i)]);
    all.resize(m);
    std::sort(all.begin(), all.end());
    return all;
  }

  std::vector<std::size_t> remaining_features(const std::vector<std::size_t>& tried) {
    std::vector<std::size_t> rest;
    for (std::size_t f = 0; f < X.cols(); ++f)
      if (!std::binary_search(tried.begin(), tried.end(), f)) rest.push_back(f);
    return rest;
  }

  int build(std::vector<std::size_t> rows, int depth) {
    std::size_t positives = 0;
    for (std::size_t r : rows) positives += y[r] != 0 ? 1 : 0;

    const int index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{});
    tree.nodes[index].n_samples = rows.size();
    tree.nodes[index].label = majority(positives, rows.size());

    const bool pure = positives == 0 || positives == rows.size();
    if (pure || rows.size() < 2 || (options.max_depth && depth >= *options.max_depth)) return index;

    const auto features = candidate_features();
    auto split = best_gini_split(X, y, rows, features);
    if (!split && features.size() < X.cols()) split = best_gini_split(X, y, rows, remaining_features(features));
    if (!split) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) (X(r, static_cast<std::size_t>(split->feature)) <= split->threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    tree.nodes[index].feature = split->feature;
    tree.nodes[index].threshold = split->threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    tree.nodes[index].left = l;
    tree.nodes[index].right = r;
    return index;
  }
};

}  // namespace

double gini(std::size_t positives, std::size_t total) noexcept {
  if (total == 0) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  return 2.0 * p * (1.0 - p);
}

std::optional<SplitCandidate> best_gini_split(const Matrix& X, std::span<const int> y,
                                              std::span<const std::size_t> rows,
                                              std::span<const std::size_t> features) {
  const std::size_t n = rows.size();
  std::size_t total_pos = 0;
  for (std::size_t r : rows) total_pos += y[r] != 0 ? 1 : 0;

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, int>> column(n);
  for (std::size_t f : features) {
    for (std::size_t i = 0; i < n; ++i) column[i] = {X(rows[i], f), y[rows[i]] != 0 ? 1 : 0};
    std::sort(column.begin(), column.end());

    std::size_t left_pos = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_pos += static_cast<std::size_t>(column[i].second);
      if (column[i].first == column[i + 1].first) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      const double impurity = (static_cast<double>(n_left) * gini(left_pos, n_left) +
                               static_cast<double>(n_right) * gini(total_pos - left_pos, n_right)) /
                              static_cast<double>(n);
      if (!best || impurity < best->impurity - kTieEpsilon) {
        const double threshold = column[i].first + 0.5 * (column[i + 1].first - column[i].first);
        best = SplitCandidate{static_cast<int>(f), threshold, impurity};
      }
    }
  }
  return best;
}

int Tree::predict_one(std::span<const double> x) const noexcept {
  int node = 0;
  while (!nodes[node].is_leaf()) {
    const TreeNode& n = nodes[node];
    node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
  }
  return nodes[node].label;
}

std::vector<int> Tree::used_features() const {
  std::set<int> used;
  for (const auto& n : nodes)
    if (!n.is_leaf()) used.insert(n.feature);
  return {used.begin(), used.end()};
}

int Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> depth_of(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, depth_of[i]);
    if (!nodes[i].is_leaf()) {
      depth_of[static_cast<std::size_t>(nodes[i].left)] = depth_of[i] + 1;
      depth_of[static_cast<std::size_t>(nodes[i].right)] = depth_of[i] + 1;
    }
  }
  return deepest;
}

Tree grow_tree(const Matrix& X, std::span<const int> y, std::span<const std::size_t> rows,
               const TreeGrowOptions& options, rng::Stream* stream) {
  Grower grower{X, y, options, stream, {}};
  grower.build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return std::move(grower.tree);
}

}  // namespace fairbench::models
