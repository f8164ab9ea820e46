#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "fairbench/dataset/features.hpp"
#include "fairbench/dataset/types.hpp"
#include "fairbench/experiment/config.hpp"
#include "fairbench/experiment/report.hpp"

namespace fairbench::experiment {

// Observation points for tests and auditing. Callbacks may be invoked from
// worker threads.
struct RunHooks {
  std::function<void(dataset::Protocol, std::size_t fold, const std::vector<std::size_t>& train_indices,
                     const dataset::Scaler& scaler)>
      on_scaler;
  std::function<void(const std::string& model, dataset::Protocol, std::size_t fold, std::size_t input_dim)> on_fit;
};

dataset::Cohort load_cohort(const ExperimentConfig& config);

// Stratified folds; per fold the scaler is fit on the training split only.
// Every (model, protocol, fold) cell trains, predicts its held-out fold and
// computes permutation importance on both splits. Equalized Odds is pooled
// over the concatenated out-of-fold predictions and also given per fold.
// Errors carry (model, protocol, fold) context.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunHooks& hooks = {});

}  // namespace fairbench::experiment
