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

#include "gaitcloud/decision/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "gaitcloud/error.hpp"
#include "gaitcloud/random.hpp"

namespace gaitcloud::decision {
namespace {

constexpr double kMinGain = 1e-12;

double split_threshold(double a, double b) {
  const double mid = a + (b - a) / 2.0;
  return mid > a ? mid : b;
}

std::vector<std::size_t> sorted_by(const Dataset& data, const std::vector<std::size_t>& idx,
                                   std::size_t f) {
  auto out = idx;
  std::sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    const double va = data.rows[a][f];
    const double vb = data.rows[b][f];
    return va != vb ? va < vb : a < b;
  });
  return out;
}

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

void partition(const Dataset& data, const std::vector<std::size_t>& idx, const Split& s,
               std::vector<std::size_t>& left, std::vector<std::size_t>& right) {
  for (auto i : idx) {
    (data.rows[i][static_cast<std::size_t>(s.feature)] < s.threshold ? left : right).push_back(i);
  }
}

class GbdtBuilder {
 public:
  GbdtBuilder(const Dataset& data, const TrainParams& p, const std::vector<double>& g,
              const std::vector<double>& h)
      : data_(data), p_(p), g_(g), h_(h) {}

  Tree build(const std::vector<std::size_t>& idx) {
    Tree t;
    grow(t, idx, 0);
    return t;
  }

 private:
  int grow(Tree& t, const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    double gs = 0.0;
    double hs = 0.0;
    for (auto i : idx) {
      gs += g_[i];
      hs += h_[i];
    }
    Split best;
    if (depth < p_.max_depth && idx.size() >= 2) best = find(idx, gs, hs);
    if (best.feature < 0) {
      t.nodes[static_cast<std::size_t>(id)].leaf_value = -gs / (hs + p_.lambda) * p_.learning_rate;
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    partition(data_, idx, best, left, right);
    const int l = grow(t, left, depth + 1);
    const int r = grow(t, right, depth + 1);
    auto& n = t.nodes[static_cast<std::size_t>(id)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = l;
    n.right = r;
    return id;
  }

  Split find(const std::vector<std::size_t>& idx, double gs, double hs) const {
    Split best;
    const double parent = gs * gs / (hs + p_.lambda);
    for (std::size_t f = 0; f < data_.feature_names.size(); ++f) {
      const auto order = sorted_by(data_, idx, f);
      double gl = 0.0;
      double hl = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        gl += g_[order[k]];
        hl += h_[order[k]];
        const double a = data_.rows[order[k]][f];
        const double b = data_.rows[order[k + 1]][f];
        if (a == b) continue;
        const double hr = hs - hl;
        if (hl < p_.min_child_weight || hr < p_.min_child_weight) continue;
        const double gr = gs - gl;
        const double gain = gl * gl / (hl + p_.lambda) + gr * gr / (hr + p_.lambda) - parent;
        if (gain > kMinGain && (best.feature < 0 || gain > best.score)) {
          best = {static_cast<int>(f), split_threshold(a, b), gain};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const TrainParams& p_;
  const std::vector<double>& g_;
  const std::vector<double>& h_;
};

double gini(const std::vector<std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double s = 1.0;
  for (auto c : counts) {
    const double q = static_cast<double>(c) / static_cast<double>(n);
    s -= q * q;
  }
  return s;
}

class ForestBuilder {
 public:
  ForestBuilder(const Dataset& data, const TrainParams& p, int num_classes, Rng& rng)
      : data_(data), p_(p), k_(static_cast<std::size_t>(num_classes)), rng_(rng) {}

  Tree build(const std::vector<std::size_t>& idx) {
    Tree t;
    grow(t, idx, 0);
    return t;
  }

 private:
  int grow(Tree& t, const std::vector<std::size_t>& idx, int depth) {
    const int id = static_cast<int>(t.nodes.size());
    t.nodes.emplace_back();
    std::vector<std::size_t> counts(k_, 0);
    for (auto i : idx) ++counts[static_cast<std::size_t>(data_.labels[i])];
    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    Split best;
    if (!pure && depth < p_.max_depth && idx.size() >= 2) best = find(idx, counts);
    if (best.feature < 0) {
      auto& leaf = t.nodes[static_cast<std::size_t>(id)].leaf_distribution;
      leaf.resize(k_);
      for (std::size_t c = 0; c < k_; ++c) {
        leaf[c] = static_cast<double>(counts[c]) / static_cast<double>(idx.size());
      }
      return id;
    }
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    partition(data_, idx, best, left, right);
    const int l = grow(t, left, depth + 1);
    const int r = grow(t, right, depth + 1);
    auto& n = t.nodes[static_cast<std::size_t>(id)];
    n.feature = best.feature;
    n.threshold = best.threshold;
    n.left = l;
    n.right = r;
    return id;
  }

  Split find(const std::vector<std::size_t>& idx, const std::vector<std::size_t>& counts) {
    const std::size_t d = data_.feature_names.size();
    const std::size_t mtry =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(d))));
    std::vector<std::size_t> features(d);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = 0; i < mtry; ++i) {
      std::swap(features[i], features[i + rng_.below(d - i)]);
    }
    features.resize(mtry);
    std::sort(features.begin(), features.end());

    const std::size_t n = idx.size();
    const double parent = static_cast<double>(n) * gini(counts, n);
    Split best;
    for (auto f : features) {
      const auto order = sorted_by(data_, idx, f);
      std::vector<std::size_t> lc(k_, 0);
      std::vector<std::size_t> rc = counts;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        const auto label = static_cast<std::size_t>(data_.labels[order[k]]);
        ++lc[label];
        --rc[label];
        const double a = data_.rows[order[k]][f];
        const double b = data_.rows[order[k + 1]][f];
        if (a == b) continue;
        const std::size_t nl = k + 1;
        const double impurity = static_cast<double>(nl) * gini(lc, nl) +
                                static_cast<double>(n - nl) * gini(rc, n - nl);
        const double decrease = parent - impurity;
        if (decrease > kMinGain && (best.feature < 0 || decrease > best.score)) {
          best = {static_cast<int>(f), split_threshold(a, b), decrease};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const TrainParams& p_;
  std::size_t k_;
  Rng& rng_;
};

void check_dataset(const Dataset& data) {
  if (data.rows.empty()) throw Error(ErrorCode::DegenerateDataset, "empty dataset");
  if (data.rows.size() != data.labels.size()) {
    throw Error(ErrorCode::DegenerateDataset, "rows and labels differ in length");
  }
  if (data.feature_names.empty()) throw Error(ErrorCode::DegenerateDataset, "no features");
  for (const auto& r : data.rows) {
    if (r.size() != data.feature_names.size()) {
      throw Error(ErrorCode::DegenerateDataset, "ragged feature rows");
    }
    for (double v : r) {
      if (!std::isfinite(v)) throw Error(ErrorCode::DegenerateDataset, "non-finite feature value");
    }
  }
  std::set<int> classes(data.labels.begin(), data.labels.end());
  if (classes.size() < 2) {
    throw Error(ErrorCode::DegenerateDataset, "need at least two classes");
  }
  if (*classes.begin() < 0) throw Error(ErrorCode::DegenerateDataset, "negative label");
}

FeatureVector row_vector(const Dataset& data, std::size_t i) {
  FeatureVector fv;
  for (std::size_t f = 0; f < data.feature_names.size(); ++f) {
    fv.add(data.feature_names[f], data.rows[i][f]);
  }
  return fv;
}

}  // namespace

void Dataset::add(const FeatureVector& fv, int label) {
  std::vector<double> row;
  row.reserve(feature_names.size());
  for (const auto& name : feature_names) {
    auto v = fv.get(name);
    if (!v) throw Error(ErrorCode::MissingFeature, name);
    row.push_back(*v);
  }
  rows.push_back(std::move(row));
  labels.push_back(label);
}

TreeEnsembleModel train_ensemble(const Dataset& data, const TrainParams& params) {
  check_dataset(data);
  if (params.trees < 0 || params.max_depth < 0 || !(params.learning_rate > 0.0) ||
      !(params.bootstrap_fraction > 0.0 && params.bootstrap_fraction <= 1.0) ||
      !(params.lambda >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "invalid training hyperparameters");
  }
  TreeEnsembleModel model;
  model.model_id = params.model_id;
  model.type = params.type;
  model.feature_names = data.feature_names;
  const std::size_t n = data.size();
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  if (params.type == ModelType::GbdtBinary) {
    double positives = 0.0;
    for (int y : data.labels) {
      if (y > 1) throw Error(ErrorCode::DegenerateDataset, "gbdt_binary needs labels 0/1");
      positives += y;
    }
    model.num_classes = 2;
    const double prior = positives / static_cast<double>(n);
    model.base_score = std::log(prior / (1.0 - prior));
    std::vector<double> score(n, model.base_score);
    std::vector<double> g(n);
    std::vector<double> h(n);
    for (int t = 0; t < params.trees; ++t) {
      for (std::size_t i = 0; i < n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-score[i]));
        g[i] = p - data.labels[i];
        h[i] = std::max(p * (1.0 - p), 1e-16);
      }
      GbdtBuilder builder(data, params, g, h);
      Tree tree = builder.build(all);
      for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        while (!tree.nodes[k].is_leaf()) {
          const auto& node = tree.nodes[k];
          k = static_cast<std::size_t>(
              data.rows[i][static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                                     : node.right);
        }
        score[i] += tree.nodes[k].leaf_value;
      }
      model.trees.push_back(std::move(tree));
    }
  } else {
    model.num_classes = *std::max_element(data.labels.begin(), data.labels.end()) + 1;
    Rng rng(params.seed);
    const auto m = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params.bootstrap_fraction * static_cast<double>(n))));
    for (int t = 0; t < params.trees; ++t) {
      std::vector<std::size_t> sample(m);
      for (auto& s : sample) s = rng.below(n);
      ForestBuilder builder(data, params, model.num_classes, rng);
      model.trees.push_back(builder.build(sample));
    }
  }
  model.validate();
  return model;
}

std::vector<int> predict_rows(const TreeEnsembleModel& model, const Dataset& data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(predict(model, row_vector(data, i)).label);
  return out;
}

}  // namespace gaitcloud::decision
