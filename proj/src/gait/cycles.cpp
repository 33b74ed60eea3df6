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

#include "gaitcloud/gait/cycles.hpp"

#include <algorithm>
#include <optional>

#include "gaitcloud/error.hpp"

namespace gaitcloud::gait {
namespace {

std::vector<GaitEvent> typical_only(std::span<const GaitEvent> events) {
  std::vector<GaitEvent> out;
  std::copy_if(events.begin(), events.end(), std::back_inserter(out),
               [](const GaitEvent& e) { return !e.atypical; });
  return out;
}

std::optional<std::uint64_t> first_of(const std::vector<GaitEvent>& events, EventKind kind,
                                      std::uint64_t from, std::uint64_t before) {
  for (const auto& e : events) {
    if (e.kind == kind && e.t_ms >= from && e.t_ms < before) return e.t_ms;
  }
  return std::nullopt;
}

void segment_foot(const std::vector<GaitEvent>& own, const std::vector<GaitEvent>& other,
                  FootSide foot, CycleSegmentation& out) {
  std::vector<std::uint64_t> strikes;
  for (const auto& e : own) {
    if (e.kind == EventKind::HeelStrike) strikes.push_back(e.t_ms);
  }
  for (std::size_t i = 0; i + 1 < strikes.size(); ++i) {
    const auto hs = strikes[i];
    const auto next = strikes[i + 1];
    const auto ff = first_of(own, EventKind::FootFlat, hs, next);
    const auto hr = first_of(own, EventKind::HeelRise, hs, next);
    const auto to = first_of(own, EventKind::ToeOff, hs, next);
    const auto opp_to = first_of(other, EventKind::ToeOff, hs, next);
    const auto opp_hs =
        opp_to ? first_of(other, EventKind::HeelStrike, *opp_to, next) : std::nullopt;
    if (!ff || !hr || !to || !opp_to || !opp_hs) {
      ++out.discarded;
      continue;
    }
    out.cycles.push_back({foot, hs, *ff, *hr, *to, next, *opp_hs, *opp_to});
  }
}

}  // namespace

CycleSegmentation segment_cycles(std::span<const GaitEvent> events_left,
                                 std::span<const GaitEvent> events_right) {
  const auto left = typical_only(events_left);
  const auto right = typical_only(events_right);
  CycleSegmentation out;
  segment_foot(left, right, FootSide::Left, out);
  segment_foot(right, left, FootSide::Right, out);
  return out;
}

CycleParameters compute_parameters(const GaitCycle& c) {
  const bool ordered = c.hs_ms <= c.ff_ms && c.ff_ms <= c.hr_ms && c.hr_ms <= c.to_ms &&
                       c.hs_ms < c.to_ms && c.to_ms < c.next_hs_ms && c.hs_ms <= c.opposite_to_ms &&
                       c.opposite_to_ms <= c.opposite_hs_ms && c.opposite_hs_ms <= c.to_ms &&
                       c.hr_ms <= c.opposite_hs_ms;
  if (c.next_hs_ms <= c.hs_ms || !ordered) {
    throw Error(ErrorCode::DegenerateCycle,
                "stride at " + std::to_string(c.hs_ms) + " ms has inconsistent event order");
  }
  const double stride_ms = static_cast<double>(c.next_hs_ms - c.hs_ms);
  auto pct = [stride_ms](std::uint64_t from, std::uint64_t to) {
    return 100.0 * static_cast<double>(to - from) / stride_ms;
  };

  CycleParameters p;
  p.cycle_time_s = stride_ms / 1000.0;
  p.cadence_steps_per_min = 120.0 / p.cycle_time_s;
  p.stance_pct = pct(c.hs_ms, c.to_ms);
  p.load_response_pct = pct(c.hs_ms, c.opposite_to_ms);
  p.pre_swing_pct = pct(c.opposite_hs_ms, c.to_ms);
  p.double_support_pct = p.load_response_pct + p.pre_swing_pct;
  p.single_support_pct = p.stance_pct - p.double_support_pct;
  p.terminal_stance_pct = pct(c.hr_ms, c.opposite_hs_ms);
  return p;
}

}  // namespace gaitcloud::gait
