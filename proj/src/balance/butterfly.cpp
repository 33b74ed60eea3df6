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

#include "gaitcloud/balance/butterfly.hpp"

#include <algorithm>
#include <cmath>

#include "gaitcloud/error.hpp"
#include "gaitcloud/gait/stats.hpp"

namespace gaitcloud::balance {

ButterflyDiagram butterfly_from_polylines(std::vector<std::vector<CopPoint>> polylines) {
  std::erase_if(polylines, [](const auto& p) { return p.size() < 2; });
  if (polylines.size() < 2) {
    throw Error(ErrorCode::InsufficientCycles, "butterfly needs at least two strides");
  }
  ButterflyDiagram out;
  double height = 0.0;
  double right_exc = 0.0;
  double left_exc = 0.0;
  std::vector<double> crossings;
  for (const auto& line : polylines) {
    auto [ymin, ymax] = std::minmax_element(line.begin(), line.end(), [](const auto& a, const auto& b) {
      return a.y_mm < b.y_mm;
    });
    height += ymax->y_mm - ymin->y_mm;
    double xmax = 0.0;
    double xmin = 0.0;
    for (const auto& p : line) {
      xmax = std::max(xmax, p.x_mm);
      xmin = std::min(xmin, p.x_mm);
    }
    right_exc += xmax;
    left_exc += std::fabs(xmin);
    for (std::size_t i = 1; i < line.size(); ++i) {
      const auto& a = line[i - 1];
      const auto& b = line[i];
      if ((a.x_mm < 0.0) != (b.x_mm < 0.0) && a.x_mm != b.x_mm) {
        const double w = -a.x_mm / (b.x_mm - a.x_mm);
        crossings.push_back(a.y_mm + w * (b.y_mm - a.y_mm));
      }
    }
  }
  const double n = static_cast<double>(polylines.size());
  out.height_mm = height / n;
  right_exc /= n;
  left_exc /= n;
  const double denom = 0.5 * (right_exc + left_exc);
  out.symmetry_index = denom > 0.0 ? std::fabs(right_exc - left_exc) / denom : 0.0;
  out.crossing_dispersion_mm = gait::sample_std(crossings);
  out.polylines = std::move(polylines);
  return out;
}

ButterflyDiagram butterfly(const Session& session, const SensorLayout& layout,
                           std::span<const gait::GaitCycle> cycles, double stance_width_mm) {
  std::vector<const gait::GaitCycle*> strides;
  for (const auto& c : cycles) {
    if (c.foot == FootSide::Left) strides.push_back(&c);
  }
  if (strides.size() < 2) {
    throw Error(ErrorCode::InsufficientCycles, "butterfly needs at least two left strides");
  }
  std::sort(strides.begin(), strides.end(),
            [](const auto* a, const auto* b) { return a->hs_ms < b->hs_ms; });
  const auto trajectory = global_cop_series(session, layout, stance_width_mm);

  std::vector<std::vector<CopPoint>> polylines;
  for (const auto* s : strides) {
    std::vector<CopPoint> line;
    auto it = std::lower_bound(trajectory.begin(), trajectory.end(), s->hs_ms,
                               [](const CopPoint& p, std::uint64_t t) { return p.t_ms < t; });
    for (; it != trajectory.end() && it->t_ms < s->next_hs_ms; ++it) line.push_back(*it);
    polylines.push_back(std::move(line));
  }
  return butterfly_from_polylines(std::move(polylines));
}

}  // namespace gaitcloud::balance
