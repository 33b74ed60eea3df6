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

#include "gaitcloud/core/types.hpp"

#include "gaitcloud/error.hpp"

namespace gaitcloud {

std::string_view to_string(FootSide foot) {
  return foot == FootSide::Left ? "left" : "right";
}

FootSide foot_from_string(std::string_view text) {
  if (text == "left" || text == "Left" || text == "L" || text == "0") return FootSide::Left;
  if (text == "right" || text == "Right" || text == "R" || text == "1") return FootSide::Right;
  throw Error(ErrorCode::BadRequest, "unknown foot '" + std::string(text) + "'");
}

std::string_view to_string(WalkSpeed speed) {
  switch (speed) {
    case WalkSpeed::Slow: return "slow";
    case WalkSpeed::Normal: return "normal";
    case WalkSpeed::High: return "high";
  }
  return "normal";
}

WalkSpeed walk_speed_from_string(std::string_view text) {
  if (text == "slow") return WalkSpeed::Slow;
  if (text == "normal") return WalkSpeed::Normal;
  if (text == "high") return WalkSpeed::High;
  throw Error(ErrorCode::BadRequest, "unknown walking speed '" + std::string(text) + "'");
}

SessionType SessionType::parse(std::string_view kind, std::optional<std::string_view> speed) {
  if (kind == "walk10m") {
    if (!speed) throw Error(ErrorCode::BadRequest, "walk10m requires a speed");
    return walk10m(walk_speed_from_string(*speed));
  }
  if (speed) {
    throw Error(ErrorCode::BadRequest, "speed is only valid for walk10m sessions");
  }
  if (kind == "free_walk") return free_walk();
  if (kind == "tug") return tug();
  if (kind == "standing_balance") return standing_balance();
  throw Error(ErrorCode::BadRequest, "unknown session type '" + std::string(kind) + "'");
}

std::string_view SessionType::name() const {
  switch (kind_) {
    case Kind::FreeWalk: return "free_walk";
    case Kind::Walk10m: return "walk10m";
    case Kind::Tug: return "tug";
    case Kind::StandingBalance: return "standing_balance";
  }
  return "free_walk";
}

std::string_view to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Open: return "open";
    case SessionStatus::Finalized: return "finalized";
    case SessionStatus::Analyzed: return "analyzed";
  }
  return "open";
}

SessionStatus session_status_from_string(std::string_view text) {
  if (text == "open") return SessionStatus::Open;
  if (text == "finalized") return SessionStatus::Finalized;
  if (text == "analyzed") return SessionStatus::Analyzed;
  throw Error(ErrorCode::BadRequest, "unknown session status '" + std::string(text) + "'");
}

std::size_t Session::frame_count(FootSide foot) const {
  std::size_t n = 0;
  for (const auto& seg : segments(foot)) n += seg.frames.size();
  return n;
}

void advance_status(Session& session, SessionStatus next) {
  const bool ok =
      (session.status == SessionStatus::Open && next == SessionStatus::Finalized) ||
      (session.status == SessionStatus::Finalized && next == SessionStatus::Analyzed);
  if (!ok) {
    throw Error(ErrorCode::InvalidTransition,
                std::string(to_string(session.status)) + " -> " + std::string(to_string(next)));
  }
  session.status = next;
}

double default_stance_width_mm(const SessionType& type) {
  // Balance protocol: heels roughly 30 cm apart.
  return type.kind() == SessionType::Kind::StandingBalance ? 300.0 : 200.0;
}

}  // namespace gaitcloud
