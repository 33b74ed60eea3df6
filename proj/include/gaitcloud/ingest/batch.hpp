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

#include <vector>

#include "gaitcloud/core/types.hpp"
#include "json.hpp"

namespace gaitcloud::ingest {

// HTTP batch element: {"foot","seq","t_ms","pressure":[16],"accel":[3],
// "gyro":[3],"mag":[3]} in physical units. "foot" is "left"/"right" or 0/1.
nlohmann::json frame_to_json(const SensorFrame& frame);
SensorFrame frame_from_json(const nlohmann::json& obj);

nlohmann::json frames_to_json(const std::vector<SensorFrame>& frames);
// Throws BadRequest naming the offending element.
std::vector<SensorFrame> frames_from_json(const nlohmann::json& batch);

}  // namespace gaitcloud::ingest
