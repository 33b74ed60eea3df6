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
#include <cstdint>
#include <span>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"

namespace gaitcloud::gait {

// Group-force hysteresis thresholds (kPa summed over the group) and the
// minimum duration a contact state must hold to be accepted.
struct ContactConfig {
  double theta_on = 30.0;
  double theta_off = 15.0;
  double min_dwell_ms = 50.0;

  void validate() const;  // throws InvalidParams
};

struct ContactSample {
  std::uint64_t t_ms = 0;
  bool heel_on = false;
  bool fore_on = false;

  bool operator==(const ContactSample&) const = default;
};

double group_force(const SensorFrame& frame, std::span<const std::size_t> group);

// Turns on strictly above theta_on, off strictly below theta_off. Starts off.
std::vector<bool> hysteresis(std::span<const double> force, double theta_on, double theta_off);

// Suppresses state runs shorter than min_samples; an accepted change takes
// effect from the first sample of its run. Starts off; a trailing run
// shorter than min_samples is suppressed as well.
std::vector<bool> debounce(const std::vector<bool>& raw, std::size_t min_samples);

std::size_t dwell_samples(double min_dwell_ms, double rate_hz);

std::vector<ContactSample> contact_signal(const CuratedSegment& segment, const SensorLayout& layout,
                                          const ContactConfig& cfg = {});

}  // namespace gaitcloud::gait
