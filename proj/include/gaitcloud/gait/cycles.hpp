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
#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "gaitcloud/core/types.hpp"
#include "gaitcloud/gait/events.hpp"

namespace gaitcloud::gait {

// One stride of `foot`, from its heel strike to the next, with the
// contralateral toe-off and heel-strike that fall inside it.
struct GaitCycle {
  FootSide foot = FootSide::Left;
  std::uint64_t hs_ms = 0;
  std::uint64_t ff_ms = 0;
  std::uint64_t hr_ms = 0;
  std::uint64_t to_ms = 0;
  std::uint64_t next_hs_ms = 0;
  std::uint64_t opposite_hs_ms = 0;
  std::uint64_t opposite_to_ms = 0;

  bool operator==(const GaitCycle&) const = default;
};

struct CycleSegmentation {
  std::vector<GaitCycle> cycles;  // left cycles first, then right, each time-ordered
  std::size_t discarded = 0;      // strides lacking a required event
};

// Uses typical events only. A stride is kept when it holds FootFlat,
// HeelRise and ToeOff of its own foot plus a contralateral ToeOff followed by
// a contralateral HeelStrike.
CycleSegmentation segment_cycles(std::span<const GaitEvent> events_left,
                                 std::span<const GaitEvent> events_right);

inline constexpr std::size_t kParameterCount = 8;

struct CycleParameters {
  double cycle_time_s = 0.0;
  double cadence_steps_per_min = 0.0;
  double stance_pct = 0.0;
  double single_support_pct = 0.0;
  double double_support_pct = 0.0;
  double load_response_pct = 0.0;
  double pre_swing_pct = 0.0;
  double terminal_stance_pct = 0.0;

  std::array<double, kParameterCount> values() const {
    return {cycle_time_s,       cadence_steps_per_min, stance_pct,    single_support_pct,
            double_support_pct, load_response_pct,     pre_swing_pct, terminal_stance_pct};
  }
};

// Names in CycleParameters::values() order.
inline constexpr std::array<std::string_view, kParameterCount> kParameterNames{
    "cycle_time",   "cadence",      "stance",    "single_support",
    "double_support", "load_response", "pre_swing", "terminal_stance"};

// Throws DegenerateCycle when the stride has no duration or its events are
// out of order (hs <= ff <= hr <= to, hs <= opposite_to <= opposite_hs <= to,
// hr <= opposite_hs, to < next_hs).
CycleParameters compute_parameters(const GaitCycle& cycle);

}  // namespace gaitcloud::gait
