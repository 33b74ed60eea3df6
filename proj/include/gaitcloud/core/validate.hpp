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

#include <cstddef>
#include <string>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"

namespace gaitcloud {

struct Violation {
  enum class Kind { NegativePressure, NonFinite, AboveFullScale };
  Kind kind;
  std::string channel;  // "pressure", "accel", "gyro" or "mag"
  std::size_t index = 0;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Pure check of physical plausibility. Violations are reported, never thrown.
ValidationResult validate_frame(const SensorFrame& frame, const SensorLayout& layout);

}  // namespace gaitcloud
