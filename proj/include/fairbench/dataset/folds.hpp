#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairbench/dataset/types.hpp"

namespace fairbench::dataset {

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending

  bool operator==(const Fold&) const = default;
};

// Each class is shuffled with its own keyed stream and dealt round-robin over
// the folds; the deal for the second class continues where the first left
// off so fold sizes stay balanced too. Throws InvalidArgument for k < 2 and
// TooFewSamples when a class has fewer than k members.
std::vector<Fold> stratified_kfold(std::span<const Label> labels, std::size_t k, std::uint64_t seed);
std::vector<Fold> stratified_kfold(const Cohort& cohort, std::size_t k, std::uint64_t seed);

}  // namespace fairbench::dataset
