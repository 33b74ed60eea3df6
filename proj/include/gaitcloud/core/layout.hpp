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

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "gaitcloud/core/types.hpp"
#include "json.hpp"

namespace gaitcloud {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

// Sensor geometry in the insole-local frame: x medial-lateral (+x lateral),
// y heel-to-toe, origin at the heel center. Units are millimetres.
struct SensorLayout {
  std::string insole_model_id;
  std::array<Point2, kPressureChannels> positions{};
  std::vector<std::size_t> heel_group;
  std::vector<std::size_t> forefoot_group;
  double length_mm = 0.0;

  // Throws InvalidLayout describing the first broken invariant.
  void validate() const;

  // Reflects x. Applying twice is the identity.
  SensorLayout mirrored() const;
  // Linear stretch of y to a different insole length.
  SensorLayout scaled_to_length(double new_length_mm) const;
  Point2 centroid() const;

  bool operator==(const SensorLayout&) const = default;
};

// Canonical 260 mm, 16-sensor table (the same data as
// config/layouts/default.json).
const SensorLayout& default_layout();

SensorLayout layout_from_json(const nlohmann::json& doc);
nlohmann::json layout_to_json(const SensorLayout& layout);
SensorLayout load_layout(const std::filesystem::path& path);

}  // namespace gaitcloud
