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

#include "gaitcloud/balance/cop.hpp"

#include <algorithm>
#include <cmath>

namespace gaitcloud::balance {

std::optional<CopPoint> cop_frame(const SensorFrame& frame, const SensorLayout& layout,
                                  double force_floor) {
  double total = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    const double p = frame.pressure[i];
    total += p;
    sx += p * layout.positions[i].x;
    sy += p * layout.positions[i].y;
  }
  if (!(total >= force_floor) || total <= 0.0) return std::nullopt;
  return CopPoint{frame.t_ms, sx / total, sy / total, total, CopFrame::InsoleLocal};
}

CopPoint to_body(const CopPoint& local, FootSide foot, double stance_width_mm) {
  if (local.frame == CopFrame::Body) return local;
  CopPoint out = local;
  out.frame = CopFrame::Body;
  const double half = 0.5 * stance_width_mm;
  out.x_mm = foot == FootSide::Left ? -half - local.x_mm : half + local.x_mm;
  return out;
}

std::optional<CopPoint> global_cop(const std::optional<CopPoint>& left,
                                   const std::optional<CopPoint>& right, double stance_width_mm) {
  const bool has_left = left && left->total_force > 0.0;
  const bool has_right = right && right->total_force > 0.0;
  if (!has_left && !has_right) return std::nullopt;
  if (!has_right) return to_body(*left, FootSide::Left, stance_width_mm);
  if (!has_left) return to_body(*right, FootSide::Right, stance_width_mm);
  const auto l = to_body(*left, FootSide::Left, stance_width_mm);
  const auto r = to_body(*right, FootSide::Right, stance_width_mm);
  const double total = l.total_force + r.total_force;
  CopPoint out;
  out.frame = CopFrame::Body;
  out.t_ms = std::min(l.t_ms, r.t_ms);
  out.total_force = total;
  out.x_mm = (l.x_mm * l.total_force + r.x_mm * r.total_force) / total;
  out.y_mm = (l.y_mm * l.total_force + r.y_mm * r.total_force) / total;
  return out;
}

std::vector<CopPoint> cop_series(std::span<const SensorFrame> frames, const SensorLayout& layout,
                                 double force_floor) {
  std::vector<CopPoint> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    if (auto c = cop_frame(f, layout, force_floor)) out.push_back(*c);
  }
  return out;
}

std::vector<CopPoint> global_cop_series(const Session& session, const SensorLayout& layout,
                                        double stance_width_mm, double force_floor) {
  std::vector<const SensorFrame*> left;
  std::vector<const SensorFrame*> right;
  for (const auto& seg : session.left) {
    for (const auto& f : seg.frames) left.push_back(&f);
  }
  for (const auto& seg : session.right) {
    for (const auto& f : seg.frames) right.push_back(&f);
  }
  const double half_period = 500.0 / session.sample_rate_hz;

  std::vector<CopPoint> out;
  out.reserve(left.size());
  std::size_t j = 0;
  for (const auto* lf : left) {
    while (j + 1 < right.size() && right[j + 1]->t_ms <= lf->t_ms) ++j;
    const SensorFrame* match = nullptr;
    double best = half_period;
    for (std::size_t k = j; k < std::min(j + 2, right.size()); ++k) {
      const double d = std::fabs(static_cast<double>(right[k]->t_ms) -
                                 static_cast<double>(lf->t_ms));
      if (d <= best) {
        best = d;
        match = right[k];
      }
    }
    const auto lc = cop_frame(*lf, layout, force_floor);
    const auto rc = match ? cop_frame(*match, layout, force_floor) : std::nullopt;
    if (auto g = global_cop(lc, rc, stance_width_mm)) {
      g->t_ms = lf->t_ms;
      out.push_back(*g);
    }
  }
  return out;
}

}  // namespace gaitcloud::balance
