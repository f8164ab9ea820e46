#pragma once

#include <span>
#include <vector>

#include "fairbench/matrix.hpp"

namespace fairbench::models {

struct KnnParams {
  Matrix points;
  std::vector<int> labels;
  int k = 1;

  bool operator==(const KnnParams&) const = default;
};

// Majority vote among the k nearest stored points (Euclidean; equal
// distances resolved by lower stored index). A tied vote falls back to the
// label of the single nearest neighbour.
int knn_predict_one(const KnnParams& params, std::span<const double> x);

}  // namespace fairbench::models
