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

#include "gaitcloud/gait/events.hpp"

#include <array>

namespace gaitcloud::gait {
namespace {

using Kinds = std::vector<EventKind>;

// Indexed by [from][to] FootState.
Kinds transition_events(FootState from, FootState to) {
  using S = FootState;
  using E = EventKind;
  switch (from) {
    case S::Swing:
      if (to == S::HeelContact) return {E::HeelStrike};
      if (to == S::FootFlat) return {E::HeelStrike, E::FootFlat};
      if (to == S::HeelRise) return {E::HeelStrike};
      break;
    case S::HeelContact:
      if (to == S::FootFlat) return {E::FootFlat};
      if (to == S::HeelRise) return {E::HeelRise};
      if (to == S::Swing) return {E::ToeOff};
      break;
    case S::FootFlat:
      if (to == S::HeelRise) return {E::HeelRise};
      if (to == S::Swing) return {E::ToeOff};
      break;
    case S::HeelRise:
      if (to == S::FootFlat) return {E::FootFlat};
      if (to == S::Swing) return {E::ToeOff};
      break;
  }
  return {};
}

}  // namespace

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::HeelStrike: return "heel_strike";
    case EventKind::FootFlat: return "foot_flat";
    case EventKind::HeelRise: return "heel_rise";
    case EventKind::ToeOff: return "toe_off";
  }
  return "heel_strike";
}

std::string_view to_string(FootState state) {
  switch (state) {
    case FootState::Swing: return "swing";
    case FootState::HeelContact: return "heel_contact";
    case FootState::FootFlat: return "foot_flat";
    case FootState::HeelRise: return "heel_rise";
  }
  return "swing";
}

EventKind next_in_cycle(EventKind kind) {
  switch (kind) {
    case EventKind::HeelStrike: return EventKind::FootFlat;
    case EventKind::FootFlat: return EventKind::HeelRise;
    case EventKind::HeelRise: return EventKind::ToeOff;
    case EventKind::ToeOff: return EventKind::HeelStrike;
  }
  return EventKind::HeelStrike;
}

FootState state_of(bool heel_on, bool fore_on) {
  if (heel_on) return fore_on ? FootState::FootFlat : FootState::HeelContact;
  return fore_on ? FootState::HeelRise : FootState::Swing;
}

std::vector<GaitEvent> run_state_machine(std::span<const ContactSample> contacts, FootSide foot) {
  std::vector<GaitEvent> events;
  std::vector<std::size_t> open_stride;  // typical events since the last typical ToeOff
  FootState state = FootState::Swing;
  EventKind last_typical = EventKind::ToeOff;

  for (const auto& c : contacts) {
    const FootState next = state_of(c.heel_on, c.fore_on);
    if (next == state) continue;
    const bool toe_first = state == FootState::Swing && next == FootState::HeelRise;
    for (EventKind kind : transition_events(state, next)) {
      bool typical = !toe_first && kind == next_in_cycle(last_typical);
      if (kind == EventKind::HeelStrike && !toe_first && !typical) {
        for (auto idx : open_stride) events[idx].atypical = true;
        open_stride.clear();
        typical = true;
      }
      events.push_back({foot, kind, c.t_ms, !typical});
      if (!typical) continue;
      last_typical = kind;
      if (kind == EventKind::ToeOff) {
        open_stride.clear();
      } else {
        open_stride.push_back(events.size() - 1);
      }
    }
    state = next;
  }
  return events;
}

}  // namespace gaitcloud::gait
