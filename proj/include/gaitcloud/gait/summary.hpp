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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaitcloud/gait/cycles.hpp"
#include "gaitcloud/gait/stats.hpp"

namespace gaitcloud::gait {

struct ParameterSummary {
  std::string name;
  double mean = 0.0;  // pooled over both feet
  double std = 0.0;
  double left_mean = 0.0;
  double left_std = 0.0;
  double right_mean = 0.0;
  double right_std = 0.0;
  std::optional<double> p_value;  // Welch, left vs right; needs >= 2 cycles per foot
  FiveNumber box_left;
  FiveNumber box_right;
  std::vector<double> left_values;
  std::vector<double> right_values;
};

// Percent of the stride, averaged across feet. stance + swing = 100.
struct PhaseFractions {
  double stance = 0.0;
  double swing = 0.0;
  double single_support = 0.0;
  double double_support = 0.0;
};

struct WalkingSummary {
  std::array<ParameterSummary, kParameterCount> parameters;
  PhaseFractions phase_fractions;
  std::size_t cycle_count_left = 0;
  std::size_t cycle_count_right = 0;
  std::size_t atypical_count = 0;
  std::size_t discarded_count = 0;      // incomplete or degenerate strides
  std::size_t turn_excluded_count = 0;  // strides overlapping a turn
  std::optional<double> session_cadence;  // 60 * steps / duration

  const ParameterSummary& parameter(std::string_view name) const;
};

// Degenerate cycles are skipped and counted in discarded_count. Throws
// NoCycles when nothing usable remains.
WalkingSummary summarize(std::span<const GaitCycle> cycles);

}  // namespace gaitcloud::gait
