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

#include "gaitcloud/decision/metrics.hpp"

#include <algorithm>
#include <string>

#include "gaitcloud/error.hpp"

namespace gaitcloud::decision {
namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

Metrics from_confusion(std::vector<std::vector<std::size_t>> cm, Averaging averaging) {
  Metrics m;
  m.averaging = averaging;
  const std::size_t k = cm.size();
  std::size_t total = 0;
  std::size_t correct = 0;
  std::vector<std::size_t> row(k, 0);
  std::vector<std::size_t> col(k, 0);
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t p = 0; p < k; ++p) {
      total += cm[t][p];
      row[t] += cm[t][p];
      col[p] += cm[t][p];
    }
    correct += cm[t][t];
  }
  m.accuracy = ratio(correct, total);
  if (averaging == Averaging::Binary) {
    m.precision = ratio(cm[1][1], col[1]);
    m.recall = ratio(cm[1][1], row[1]);
  } else {
    for (std::size_t c = 0; c < k; ++c) {
      m.precision += ratio(cm[c][c], col[c]);
      m.recall += ratio(cm[c][c], row[c]);
    }
    m.precision /= static_cast<double>(k);
    m.recall /= static_cast<double>(k);
  }
  m.f1 = f1_score(m.precision, m.recall);
  m.confusion = std::move(cm);
  return m;
}

}  // namespace

double f1_score(double precision, double recall) {
  const double s = precision + recall;
  return s > 0.0 ? 2.0 * precision * recall / s : 0.0;
}

Metrics evaluate(std::span<const int> predicted, std::span<const int> truth, Averaging averaging,
                 int num_classes) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                               std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw Error(ErrorCode::LengthMismatch, "no labels to evaluate");
  int seen = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (predicted[i] < 0 || truth[i] < 0) throw Error(ErrorCode::InvalidParams, "negative label");
    seen = std::max({seen, predicted[i] + 1, truth[i] + 1});
  }
  if (num_classes == 0) num_classes = std::max(seen, 2);
  if (seen > num_classes) throw Error(ErrorCode::InvalidParams, "label beyond num_classes");
  if (averaging == Averaging::Binary && num_classes != 2) {
    throw Error(ErrorCode::InvalidParams, "binary averaging needs two classes");
  }
  const auto k = static_cast<std::size_t>(num_classes);
  std::vector<std::vector<std::size_t>> cm(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  return from_confusion(std::move(cm), averaging);
}

Metrics binary_metrics(std::size_t tn, std::size_t fp, std::size_t fn, std::size_t tp) {
  return from_confusion({{tn, fp}, {fn, tp}}, Averaging::Binary);
}

}  // namespace gaitcloud::decision
