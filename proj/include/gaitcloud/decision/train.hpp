/*
 * Copyright 2026 The gaitcloud Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gaitcloud/decision/model.hpp"

namespace gaitcloud::decision {

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
  // Appends a vector, taking values in feature_names order. Throws MissingFeature.
  void add(const FeatureVector& fv, int label);
};

struct TrainParams {
  ModelType type = ModelType::GbdtBinary;
  std::string model_id = "model";
  int trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;      // gbdt
  double lambda = 1.0;             // gbdt L2 on leaf weights
  double min_child_weight = 1.0;   // gbdt hessian floor per child
  double bootstrap_fraction = 0.8; // rf
  std::uint64_t seed = 1;
};

// Gradient-boosted logistic trees (exact greedy splits, second-order gain)
// or a Gini random forest with per-node sqrt(d) feature sampling.
// Deterministic for a given seed. Throws DegenerateDataset.
TreeEnsembleModel train_ensemble(const Dataset& data, const TrainParams& params);

// Labels predicted for every row.
std::vector<int> predict_rows(const TreeEnsembleModel& model, const Dataset& data);

}  // namespace gaitcloud::decision
