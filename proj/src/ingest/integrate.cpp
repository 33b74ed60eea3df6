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

#include "gaitcloud/ingest/integrate.hpp"

#include <array>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/curate.hpp"

namespace gaitcloud::ingest {

Session integrate(const std::vector<CuratedSegment>& segments, Session session) {
  if (session.status != SessionStatus::Open) {
    throw Error(ErrorCode::SessionFinalized, "session " + session.session_id + " is not open");
  }
  for (const auto& seg : segments) {
    for (const auto& f : seg.frames) {
      if (f.foot != seg.foot) {
        throw Error(ErrorCode::FootMismatch, "segment tagged " + std::string(to_string(seg.foot)) +
                                                 " holds a " + std::string(to_string(f.foot)) +
                                                 " frame");
      }
    }
  }
  if (segments.empty()) return session;

  const bool empty = session.left.empty() && session.right.empty();
  if (empty) session.sample_rate_hz = segments.front().rate_hz;

  for (FootSide foot : kBothFeet) {
    std::vector<SensorFrame> merged;
    bool touched = false;
    for (const auto& seg : session.segments(foot)) {
      merged.insert(merged.end(), seg.frames.begin(), seg.frames.end());
    }
    for (const auto& seg : segments) {
      if (seg.foot != foot) continue;
      touched = true;
      merged.insert(merged.end(), seg.frames.begin(), seg.frames.end());
    }
    if (!touched || merged.empty()) continue;
    CurateOptions options;
    options.target_rate_hz = session.sample_rate_hz;
    options.subtract_baseline = false;
    session.segments(foot) = curate(merged, options);
  }
  return session;
}

}  // namespace gaitcloud::ingest
