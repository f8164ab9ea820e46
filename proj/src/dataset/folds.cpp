#include "fairbench/dataset/folds.hpp"

#include <algorithm>
#include <string>

#include "fairbench/error.hpp"
#include "fairbench/rng.hpp"

namespace fairbench::dataset {

std::vector<Fold> stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be at least 2, got " + std::to_string(k));

  std::vector<std::size_t> fold_of(labels.size());
  std::size_t offset = 0;
  for (Label label : kLabels) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) members.push_back(i);
    if (members.size() < k)
      throw Error(ErrorCode::TooFewSamples, "class " + std::string(display_name(label)) + " has " +
                                                std::to_string(members.size()) + " member(s), fewer than k=" +
                                                std::to_string(k));
    rng::Stream stream(rng::derive(seed, {static_cast<std::uint64_t>(to_int(label))}));
    rng::shuffle(std::span(members), stream);
    for (std::size_t j = 0; j < members.size(); ++j) fold_of[members[j]] = (offset + j) % k;
    offset = (offset + members.size()) % k;
  }

  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  }
  return folds;
}

std::vector<Fold> stratified_kfold(const Cohort& cohort, std::size_t k, std::uint64_t seed) {
  const auto labels = cohort.labels();
  return stratified_kfold(std::span<const Label>(labels), k, seed);
}

}  // namespace fairbench::dataset
