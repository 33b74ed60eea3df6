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

#include <span>
#include <vector>

#include "gaitcloud/balance/cop.hpp"
#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "gaitcloud/gait/cycles.hpp"

namespace gaitcloud::balance {

struct ButterflyDiagram {
  std::vector<std::vector<CopPoint>> polylines;  // body frame, one per left stride
  double height_mm = 0.0;              // mean anterior-posterior extent
  double symmetry_index = 0.0;         // |X+ - |X-|| / (0.5 (X+ + |X-|))
  double crossing_dispersion_mm = 0.0; // std of y where polylines cross x = 0
};

// Metrics over already built polylines. Throws InsufficientCycles when fewer
// than two polylines have at least two points.
ButterflyDiagram butterfly_from_polylines(std::vector<std::vector<CopPoint>> polylines);

// Global COP trajectory cut at successive left heel strikes.
// Throws InsufficientCycles.
ButterflyDiagram butterfly(const Session& session, const SensorLayout& layout,
                           std::span<const gait::GaitCycle> cycles, double stance_width_mm);

}  // namespace gaitcloud::balance
