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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gaitcloud::decision {

enum class Averaging : std::uint8_t { Binary, Macro };

struct Metrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Averaging averaging = Averaging::Binary;
  // confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
};

// f1 = 2PR / (P + R), 0 when P + R = 0.
double f1_score(double precision, double recall);

// Binary scores the positive class 1; macro is the unweighted mean of the
// per-class precision and recall (a class never predicted scores precision 0).
// num_classes 0 infers max label + 1. Throws LengthMismatch, InvalidParams.
Metrics evaluate(std::span<const int> predicted, std::span<const int> truth, Averaging averaging,
                 int num_classes = 0);

// Metrics straight from a 2x2 matrix laid out as evaluate() produces it.
Metrics binary_metrics(std::size_t tn, std::size_t fp, std::size_t fn, std::size_t tp);

}  // namespace gaitcloud::decision
