#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairbench/matrix.hpp"
#include "fairbench/rng.hpp"

namespace fairbench::models {

// Binary CART node. Internal nodes send x[feature] <= threshold left.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
  std::size_t n_samples = 0;

  bool is_leaf() const noexcept { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  int predict_one(std::span<const double> x) const noexcept;
  std::vector<int> used_features() const;  // ascending, unique
  int depth() const;

  bool operator==(const Tree&) const = default;
};

struct TreeGrowOptions {
  std::optional<int> max_depth;     // unset: grow until pure
  std::optional<int> max_features;  // features drawn per split; unset: all
};

struct SplitCandidate {
  int feature = -1;
  double threshold = 0.0;
  double impurity = 0.0;  // size-weighted Gini of the two children
};

// Best Gini split over `features` for the multiset `rows` (duplicates count).
// Thresholds are midpoints of consecutive distinct values. Ties keep the
// earliest feature in `features`, then the lowest threshold.
std::optional<SplitCandidate> best_gini_split(const Matrix& X, std::span<const int> y,
                                              std::span<const std::size_t> rows,
                                              std::span<const std::size_t> features);

double gini(std::size_t positives, std::size_t total) noexcept;

// Grows a tree on `rows`. `stream` is only consulted when max_features is
// set below the feature count.
Tree grow_tree(const Matrix& X, std::span<const int> y, std::span<const std::size_t> rows,
               const TreeGrowOptions& options, rng::Stream* stream);

}  // namespace fairbench::models
