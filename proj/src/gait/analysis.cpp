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

#include "gaitcloud/gait/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "gaitcloud/error.hpp"

namespace gaitcloud::gait {
namespace {

bool overlaps(const GaitCycle& c, const Interval& iv) {
  return c.hs_ms <= iv.second && iv.first < c.next_hs_ms;
}

bool within_one_segment(const GaitCycle& c, const std::vector<Interval>& spans) {
  return std::any_of(spans.begin(), spans.end(), [&](const Interval& s) {
    return c.hs_ms >= s.first && c.next_hs_ms <= s.second;
  });
}

std::vector<Interval> segment_spans(const std::vector<CuratedSegment>& segments) {
  std::vector<Interval> spans;
  for (const auto& seg : segments) {
    if (!seg.frames.empty()) spans.emplace_back(seg.frames.front().t_ms, seg.frames.back().t_ms);
  }
  return spans;
}

}  // namespace

std::vector<Interval> detect_turns(const CuratedSegment& segment, const TurnConfig& cfg) {
  std::vector<Interval> turns;
  const double period_ms = 1000.0 / segment.rate_hz;
  const auto& frames = segment.frames;
  std::size_t i = 0;
  while (i < frames.size()) {
    if (std::fabs(frames[i].gyro[2]) <= cfg.yaw_rate_dps) {
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < frames.size() && std::fabs(frames[end].gyro[2]) > cfg.yaw_rate_dps) ++end;
    const double duration = static_cast<double>(end - i) * period_ms;
    if (duration >= cfg.sustain_ms) turns.emplace_back(frames[i].t_ms, frames[end - 1].t_ms);
    i = end;
  }
  return turns;
}

std::vector<GaitEvent> detect_events(const std::vector<CuratedSegment>& segments,
                                     const SensorLayout& layout, const ContactConfig& cfg,
                                     FootSide foot) {
  std::vector<GaitEvent> events;
  for (const auto& seg : segments) {
    const auto contacts = contact_signal(seg, layout, cfg);
    const auto seg_events = run_state_machine(contacts, foot);
    events.insert(events.end(), seg_events.begin(), seg_events.end());
  }
  return events;
}

WalkAnalysis analyze_walk(const Session& session, const SensorLayout& layout,
                          const WalkConfig& cfg) {
  WalkAnalysis out;
  out.events_left = detect_events(session.left, layout, cfg.contact, FootSide::Left);
  out.events_right = detect_events(session.right, layout, cfg.contact, FootSide::Right);

  for (FootSide foot : kBothFeet) {
    for (const auto& seg : session.segments(foot)) {
      const auto turns = detect_turns(seg, cfg.turn);
      out.turns.insert(out.turns.end(), turns.begin(), turns.end());
    }
  }
  std::sort(out.turns.begin(), out.turns.end());

  auto segmentation = segment_cycles(out.events_left, out.events_right);
  const auto spans_left = segment_spans(session.left);
  const auto spans_right = segment_spans(session.right);
  std::size_t discarded = segmentation.discarded;
  for (const auto& c : segmentation.cycles) {
    const auto& spans = c.foot == FootSide::Left ? spans_left : spans_right;
    if (!within_one_segment(c, spans)) {
      ++discarded;
      continue;
    }
    const bool in_turn = std::any_of(out.turns.begin(), out.turns.end(),
                                     [&](const Interval& iv) { return overlaps(c, iv); });
    (in_turn ? out.turn_cycles : out.cycles).push_back(c);
  }

  out.summary = summarize(out.cycles);
  out.summary.discarded_count += discarded;
  out.summary.turn_excluded_count = out.turn_cycles.size();

  std::vector<std::uint64_t> strikes;
  for (const auto* events : {&out.events_left, &out.events_right}) {
    for (const auto& e : *events) {
      if (e.atypical) {
        ++out.summary.atypical_count;
      } else if (e.kind == EventKind::HeelStrike) {
        strikes.push_back(e.t_ms);
      }
    }
  }
  std::sort(strikes.begin(), strikes.end());
  if (strikes.size() >= 2 && strikes.back() > strikes.front()) {
    const double minutes = static_cast<double>(strikes.back() - strikes.front()) / 60000.0;
    out.summary.session_cadence = static_cast<double>(strikes.size() - 1) / minutes;
  }
  return out;
}

}  // namespace gaitcloud::gait
