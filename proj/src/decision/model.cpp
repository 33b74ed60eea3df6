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

#include "gaitcloud/decision/model.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "gaitcloud/error.hpp"

namespace gaitcloud::decision {
namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, what);
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) schema(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) schema("unknown field '" + key + "' in " + where);
  }
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> resolve(const TreeEnsembleModel& model, const FeatureVector& fv) {
  std::vector<double> x;
  x.reserve(model.feature_names.size());
  for (const auto& name : model.feature_names) {
    auto v = fv.get(name);
    if (!v) throw Error(ErrorCode::MissingFeature, name);
    x.push_back(*v);
  }
  return x;
}

const TreeNode& route(const Tree& tree, const std::vector<double>& x) {
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& n = tree.nodes[i];
    const double v = x[static_cast<std::size_t>(n.feature)];
    // NaN compares false against everything, so test the right branch.
    i = static_cast<std::size_t>(v >= n.threshold ? n.right : n.left);
  }
  return tree.nodes[i];
}

}  // namespace

std::string_view to_string(ModelType type) {
  return type == ModelType::GbdtBinary ? "gbdt_binary" : "rf_multiclass";
}

void TreeEnsembleModel::validate() const {
  if (model_id.empty()) schema("model_id is empty");
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "model version " + std::to_string(version));
  }
  if (type == ModelType::GbdtBinary && num_classes != 2) schema("gbdt_binary needs num_classes 2");
  if (num_classes < 2) schema("num_classes must be at least 2");
  if (!std::isfinite(base_score)) schema("base_score must be finite");
  std::set<std::string> names(feature_names.begin(), feature_names.end());
  if (names.size() != feature_names.size()) schema("duplicate feature names");
  const int nfeat = static_cast<int>(feature_names.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& nodes = trees[t].nodes;
    const std::string where = "tree " + std::to_string(t);
    if (nodes.empty()) schema(where + " has no nodes");
    const int count = static_cast<int>(nodes.size());
    std::vector<int> parents(nodes.size(), 0);
    for (int i = 0; i < count; ++i) {
      const auto& n = nodes[static_cast<std::size_t>(i)];
      const std::string at = where + " node " + std::to_string(i);
      if (n.is_leaf()) {
        if (type == ModelType::RfMulticlass) {
          if (n.leaf_distribution.size() != static_cast<std::size_t>(num_classes)) {
            schema(at + " distribution has wrong length");
          }
          double sum = 0.0;
          for (double p : n.leaf_distribution) {
            if (!(p >= 0.0 && p <= 1.0)) schema(at + " distribution entry out of [0, 1]");
            sum += p;
          }
          if (std::fabs(sum - 1.0) > 1e-9) schema(at + " distribution does not sum to 1");
        } else if (!std::isfinite(n.leaf_value)) {
          schema(at + " leaf value is not finite");
        }
        continue;
      }
      if (n.feature >= nfeat) schema(at + " feature index out of range");
      if (!std::isfinite(n.threshold)) schema(at + " threshold is not finite");
      for (int c : {n.left, n.right}) {
        if (c < 0 || c >= count) schema(at + " child index out of range");
        if (c == 0) schema(at + " points back to the root");
        ++parents[static_cast<std::size_t>(c)];
      }
    }
    // Root has no parent, every other node exactly one: with all nodes
    // reachable from the root that makes the graph a tree.
    for (int i = 1; i < count; ++i) {
      if (parents[static_cast<std::size_t>(i)] != 1) {
        schema(where + " node " + std::to_string(i) + " has " +
               std::to_string(parents[static_cast<std::size_t>(i)]) + " parents");
      }
    }
    std::vector<bool> seen(nodes.size(), false);
    std::vector<int> stack{0};
    int visited = 0;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(i)]) schema(where + " contains a cycle");
      seen[static_cast<std::size_t>(i)] = true;
      ++visited;
      const auto& n = nodes[static_cast<std::size_t>(i)];
      if (!n.is_leaf()) {
        stack.push_back(n.left);
        stack.push_back(n.right);
      }
    }
    if (visited != count) schema(where + " contains a cycle or unreachable nodes");
  }
}

int argmax(const std::vector<double>& distribution) {
  int best = 0;
  for (std::size_t i = 1; i < distribution.size(); ++i) {
    if (distribution[i] > distribution[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

Prediction predict_binary(const TreeEnsembleModel& model, const FeatureVector& fv) {
  if (model.type != ModelType::GbdtBinary) {
    throw Error(ErrorCode::InvalidParams, "model " + model.model_id + " is not gbdt_binary");
  }
  const auto x = resolve(model, fv);
  double score = model.base_score;
  for (const auto& tree : model.trees) score += route(tree, x).leaf_value;
  Prediction p;
  p.probability = logistic(score);
  p.label = *p.probability >= 0.5 ? 1 : 0;
  p.model_id = model.model_id;
  p.feature_vector_hash = fv.hash();
  return p;
}

Prediction predict_severity(const TreeEnsembleModel& model, const FeatureVector& fv) {
  if (model.type != ModelType::RfMulticlass) {
    throw Error(ErrorCode::InvalidParams, "model " + model.model_id + " is not rf_multiclass");
  }
  const auto x = resolve(model, fv);
  std::vector<double> dist(static_cast<std::size_t>(model.num_classes), 0.0);
  for (const auto& tree : model.trees) {
    const auto& leaf = route(tree, x).leaf_distribution;
    for (std::size_t c = 0; c < dist.size(); ++c) dist[c] += leaf[c];
  }
  if (!model.trees.empty()) {
    for (auto& d : dist) d /= static_cast<double>(model.trees.size());
  } else {
    for (auto& d : dist) d = 1.0 / static_cast<double>(dist.size());
  }
  Prediction p;
  p.label = argmax(dist);
  p.class_distribution = std::move(dist);
  p.model_id = model.model_id;
  p.feature_vector_hash = fv.hash();
  return p;
}

Prediction predict(const TreeEnsembleModel& model, const FeatureVector& fv) {
  return model.type == ModelType::GbdtBinary ? predict_binary(model, fv)
                                             : predict_severity(model, fv);
}

json model_to_json(const TreeEnsembleModel& model) {
  json trees = json::array();
  for (const auto& tree : model.trees) {
    json nodes = json::array();
    for (const auto& n : tree.nodes) {
      if (!n.is_leaf()) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right}});
      } else if (model.type == ModelType::GbdtBinary) {
        nodes.push_back({{"leaf", n.leaf_value}});
      } else {
        nodes.push_back({{"leaf_distribution", n.leaf_distribution}});
      }
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  json doc = {
      {"format", kModelFormat},
      {"version", model.version},
      {"model_id", model.model_id},
      {"model_type", to_string(model.type)},
      {"num_classes", model.num_classes},
      {"feature_names", model.feature_names},
      {"trees", std::move(trees)},
  };
  if (model.type == ModelType::GbdtBinary) doc["base_score"] = model.base_score;
  if (!model.description.empty()) doc["description"] = model.description;
  return doc;
}

TreeEnsembleModel model_from_json(const json& doc) {
  check_keys(doc,
             {"format", "version", "model_id", "model_type", "num_classes", "feature_names",
              "base_score", "trees", "description"},
             "model");
  TreeEnsembleModel m;
  try {
    if (doc.at("format").get<std::string>() != kModelFormat) schema("unrecognized format");
    m.version = doc.at("version").get<int>();
    if (m.version != kModelFormatVersion) {
      throw Error(ErrorCode::UnsupportedVersion,
                  "model version " + std::to_string(m.version) + " (supported: " +
                      std::to_string(kModelFormatVersion) + ")");
    }
    m.model_id = doc.at("model_id").get<std::string>();
    const auto type = doc.at("model_type").get<std::string>();
    if (type == "gbdt_binary") {
      m.type = ModelType::GbdtBinary;
    } else if (type == "rf_multiclass") {
      m.type = ModelType::RfMulticlass;
    } else {
      schema("unknown model_type " + type);
    }
    m.num_classes = doc.at("num_classes").get<int>();
    m.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    if (doc.contains("base_score")) m.base_score = doc.at("base_score").get<double>();
    if (doc.contains("description")) m.description = doc.at("description").get<std::string>();
    const auto& trees = doc.at("trees");
    if (!trees.is_array()) schema("trees must be an array");
    for (const auto& t : trees) {
      check_keys(t, {"nodes"}, "tree");
      Tree tree;
      const auto& nodes = t.at("nodes");
      if (!nodes.is_array()) schema("nodes must be an array");
      for (const auto& jn : nodes) {
        TreeNode n;
        if (jn.contains("leaf")) {
          check_keys(jn, {"leaf"}, "leaf");
          n.leaf_value = jn.at("leaf").get<double>();
        } else if (jn.contains("leaf_distribution")) {
          check_keys(jn, {"leaf_distribution"}, "leaf");
          n.leaf_distribution = jn.at("leaf_distribution").get<std::vector<double>>();
        } else {
          check_keys(jn, {"feature", "threshold", "left", "right"}, "node");
          n.feature = jn.at("feature").get<int>();
          if (n.feature < 0) schema("negative feature index");
          n.threshold = jn.at("threshold").get<double>();
          n.left = jn.at("left").get<int>();
          n.right = jn.at("right").get<int>();
        }
        if (m.type == ModelType::GbdtBinary && !n.leaf_distribution.empty()) {
          schema("gbdt_binary leaves hold a scalar");
        }
        if (m.type == ModelType::RfMulticlass && n.is_leaf() && n.leaf_distribution.empty()) {
          schema("rf_multiclass leaves hold a class distribution");
        }
        tree.nodes.push_back(std::move(n));
      }
      m.trees.push_back(std::move(tree));
    }
  } catch (const json::exception& e) {
    schema(e.what());
  }
  m.validate();
  return m;
}

std::string serialize_model(const TreeEnsembleModel& model) {
  model.validate();
  return model_to_json(model).dump(1) + "\n";
}

TreeEnsembleModel deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    schema(e.what());
  }
  return model_from_json(doc);
}

TreeEnsembleModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open model " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

void save_model(const TreeEnsembleModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Internal, "cannot write model " + path.string());
  out << serialize_model(model);
}

}  // namespace gaitcloud::decision
