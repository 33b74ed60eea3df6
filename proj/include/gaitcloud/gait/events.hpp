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
#include <span>
#include <string_view>
#include <vector>

#include "gaitcloud/core/types.hpp"
#include "gaitcloud/gait/contact.hpp"

namespace gaitcloud::gait {

// Contact symbol (heel, forefoot): 00 Swing, 10 HeelContact, 11 FootFlat,
// 01 HeelRise.
enum class FootState : std::uint8_t { Swing, HeelContact, FootFlat, HeelRise };

enum class EventKind : std::uint8_t { HeelStrike, FootFlat, HeelRise, ToeOff };

std::string_view to_string(EventKind kind);
std::string_view to_string(FootState state);

// Canonical cyclic successor: HS -> FF -> HR -> TO -> HS.
EventKind next_in_cycle(EventKind kind);

FootState state_of(bool heel_on, bool fore_on);

struct GaitEvent {
  FootSide foot = FootSide::Left;
  EventKind kind = EventKind::HeelStrike;
  std::uint64_t t_ms = 0;
  bool atypical = false;

  bool operator==(const GaitEvent&) const = default;
};

// Foot-state machine over one foot's contact stream, starting in Swing.
//
// Transition rules:
//   Swing -> heel on              HeelStrike (then FootFlat if forefoot is on)
//   Swing -> forefoot only        HeelStrike, always atypical (toe-first)
//   heel on -> both on            FootFlat
//   -> forefoot only              HeelRise
//   any contact -> none           ToeOff
//
// An event is typical when it is the canonical successor of the previous
// typical event. A heel-first HeelStrike always restarts the cycle: if the
// previous stride never reached ToeOff, its typical events are re-flagged
// atypical, so the typical subsequence always runs HS, FF, HR, TO, HS, ...
std::vector<GaitEvent> run_state_machine(std::span<const ContactSample> contacts, FootSide foot);

}  // namespace gaitcloud::gait
