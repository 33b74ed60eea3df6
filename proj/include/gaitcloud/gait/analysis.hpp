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
#include <utility>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "gaitcloud/gait/contact.hpp"
#include "gaitcloud/gait/cycles.hpp"
#include "gaitcloud/gait/events.hpp"
#include "gaitcloud/gait/summary.hpp"

namespace gaitcloud::gait {

struct TurnConfig {
  double yaw_rate_dps = 50.0;  // |gyro z| above this ...
  double sustain_ms = 300.0;   // ... for at least this long is a turn
};

using Interval = std::pair<std::uint64_t, std::uint64_t>;  // closed, ms

std::vector<Interval> detect_turns(const CuratedSegment& segment, const TurnConfig& cfg = {});

struct WalkAnalysis {
  std::vector<GaitEvent> events_left;
  std::vector<GaitEvent> events_right;
  std::vector<GaitCycle> cycles;           // used for the summary
  std::vector<GaitCycle> turn_cycles;      // excluded, overlap a turn
  std::vector<Interval> turns;
  WalkingSummary summary;
};

struct WalkConfig {
  ContactConfig contact;
  TurnConfig turn;
};

// Per-foot contact detection and state machine per curated segment, stride
// segmentation (strides spanning a recording gap are discarded), turn
// exclusion, then summary statistics. Throws NoCycles.
WalkAnalysis analyze_walk(const Session& session, const SensorLayout& layout,
                          const WalkConfig& cfg = {});

// Detected events for one foot across its segments (state machine restarts
// at every segment).
std::vector<GaitEvent> detect_events(const std::vector<CuratedSegment>& segments,
                                     const SensorLayout& layout, const ContactConfig& cfg,
                                     FootSide foot);

}  // namespace gaitcloud::gait
