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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaitcloud/decision/features.hpp"
#include "json.hpp"

namespace gaitcloud::decision {

enum class ModelType : std::uint8_t { GbdtBinary, RfMulticlass };

std::string_view to_string(ModelType type);

// Internal nodes have feature >= 0 and route left iff value < threshold.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;                // GbdtBinary leaves
  std::vector<double> leaf_distribution;  // RfMulticlass leaves

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct Tree {
  std::vector<TreeNode> nodes;  // root at 0
  bool operator==(const Tree&) const = default;
};

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::string_view kModelFormat = "gaitcloud-tree-ensemble";

struct TreeEnsembleModel {
  std::string model_id;
  int version = kModelFormatVersion;
  ModelType type = ModelType::GbdtBinary;
  int num_classes = 2;
  std::vector<std::string> feature_names;
  double base_score = 0.0;  // GbdtBinary only
  std::vector<Tree> trees;
  std::string description;

  // Throws SchemaViolation: child indices out of range, cycles or shared
  // children, unreachable nodes, bad leaf distributions, duplicate names.
  void validate() const;

  bool operator==(const TreeEnsembleModel&) const = default;
};

struct Prediction {
  int label = 0;
  std::optional<double> probability;        // GbdtBinary
  std::vector<double> class_distribution;   // RfMulticlass
  std::string model_id;
  std::uint64_t feature_vector_hash = 0;
};

// NaN feature values route left. Throws MissingFeature when the vector lacks
// one of the model's feature names, InvalidParams on a model type mismatch.
Prediction predict_binary(const TreeEnsembleModel& model, const FeatureVector& fv);
Prediction predict_severity(const TreeEnsembleModel& model, const FeatureVector& fv);
// Dispatches on model.type.
Prediction predict(const TreeEnsembleModel& model, const FeatureVector& fv);

// Lowest index wins ties.
int argmax(const std::vector<double>& distribution);

nlohmann::json model_to_json(const TreeEnsembleModel& model);
// Throws SchemaViolation, UnsupportedVersion.
TreeEnsembleModel model_from_json(const nlohmann::json& doc);
std::string serialize_model(const TreeEnsembleModel& model);
TreeEnsembleModel deserialize_model(std::string_view text);
TreeEnsembleModel load_model(const std::filesystem::path& path);
void save_model(const TreeEnsembleModel& model, const std::filesystem::path& path);

}  // namespace gaitcloud::decision
