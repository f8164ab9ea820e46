#include "fairbench/models/knn.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace fairbench::models {

int knn_predict_one(const KnnParams& params, std::span<const double> x) {
  const std::size_t n = params.points.rows();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto p = params.points.row(i);
    double d = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double diff = p[j] - x[j];
      d += diff * diff;
    }
    dist[i] = {d, i};
  }
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(params.k), n);
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

  std::size_t positive = 0;
  for (std::size_t m = 0; m < k; ++m) positive += params.labels[dist[m].second] != 0 ? 1 : 0;
  const std::size_t negative = k - positive;
  if (positive == negative) return params.labels[dist.front().second];
  return positive > negative ? 1 : 0;
}

}  // namespace fairbench::models
