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
#include <optional>
#include <span>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"

namespace gaitcloud::balance {

enum class CopFrame : std::uint8_t { InsoleLocal, Body };

struct CopPoint {
  std::uint64_t t_ms = 0;
  double x_mm = 0.0;
  double y_mm = 0.0;
  double total_force = 0.0;  // sum of sensor pressures, kPa
  CopFrame frame = CopFrame::InsoleLocal;
};

inline constexpr double kDefaultForceFloor = 5.0;

// Pressure-weighted centroid of the sensor positions; absent when the summed
// pressure is below `force_floor`.
std::optional<CopPoint> cop_frame(const SensorFrame& frame, const SensorLayout& layout,
                                  double force_floor = kDefaultForceFloor);

// Insole-local -> body frame. The left foot sits at x = -w/2 and is mirrored
// (its lateral side faces -x); the right foot sits at x = +w/2.
CopPoint to_body(const CopPoint& local, FootSide foot, double stance_width_mm);

// Force-weighted average of the two feet in the body frame. A missing or
// zero-force foot drops out. Absent only when neither foot is present.
std::optional<CopPoint> global_cop(const std::optional<CopPoint>& left,
                                   const std::optional<CopPoint>& right, double stance_width_mm);

// Per-frame local COP series for one foot's frames (absent frames skipped).
std::vector<CopPoint> cop_series(std::span<const SensorFrame> frames, const SensorLayout& layout,
                                 double force_floor = kDefaultForceFloor);

// Global COP series over both feet of a session. Right frames are matched to
// the left timeline within half a sample period.
std::vector<CopPoint> global_cop_series(const Session& session, const SensorLayout& layout,
                                        double stance_width_mm,
                                        double force_floor = kDefaultForceFloor);

}  // namespace gaitcloud::balance
