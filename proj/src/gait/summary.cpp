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

#include "gaitcloud/gait/summary.hpp"

#include "gaitcloud/error.hpp"

namespace gaitcloud::gait {

const ParameterSummary& WalkingSummary::parameter(std::string_view name) const {
  for (const auto& p : parameters) {
    if (p.name == name) return p;
  }
  throw Error(ErrorCode::NotFound, "no parameter named " + std::string(name));
}

WalkingSummary summarize(std::span<const GaitCycle> cycles) {
  WalkingSummary out;
  std::array<std::vector<double>, kParameterCount> left;
  std::array<std::vector<double>, kParameterCount> right;
  for (const auto& c : cycles) {
    CycleParameters p;
    try {
      p = compute_parameters(c);
    } catch (const Error&) {
      ++out.discarded_count;
      continue;
    }
    auto& dest = c.foot == FootSide::Left ? left : right;
    const auto values = p.values();
    for (std::size_t i = 0; i < kParameterCount; ++i) dest[i].push_back(values[i]);
  }
  out.cycle_count_left = left[0].size();
  out.cycle_count_right = right[0].size();
  if (out.cycle_count_left + out.cycle_count_right == 0) {
    throw Error(ErrorCode::NoCycles, "no complete gait cycles");
  }

  for (std::size_t i = 0; i < kParameterCount; ++i) {
    auto& s = out.parameters[i];
    s.name = std::string(kParameterNames[i]);
    s.left_values = left[i];
    s.right_values = right[i];
    std::vector<double> pooled = left[i];
    pooled.insert(pooled.end(), right[i].begin(), right[i].end());
    s.mean = mean(pooled);
    s.std = sample_std(pooled);
    s.left_mean = mean(left[i]);
    s.left_std = sample_std(left[i]);
    s.right_mean = mean(right[i]);
    s.right_std = sample_std(right[i]);
    s.box_left = five_number_summary(left[i]);
    s.box_right = five_number_summary(right[i]);
    if (left[i].size() >= 2 && right[i].size() >= 2) s.p_value = welch_t_test(left[i], right[i]);
  }

  // Feet without cycles do not contribute to the phase ring.
  auto foot_average = [&](std::size_t idx) {
    double sum = 0.0;
    int feet = 0;
    if (!left[idx].empty()) {
      sum += mean(left[idx]);
      ++feet;
    }
    if (!right[idx].empty()) {
      sum += mean(right[idx]);
      ++feet;
    }
    return sum / feet;
  };
  out.phase_fractions.stance = foot_average(2);
  out.phase_fractions.swing = 100.0 - out.phase_fractions.stance;
  out.phase_fractions.single_support = foot_average(3);
  out.phase_fractions.double_support = foot_average(4);
  return out;
}

}  // namespace gaitcloud::gait
