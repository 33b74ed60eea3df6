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

#include "gaitcloud/core/validate.hpp"

#include <cmath>

namespace gaitcloud {
namespace {

void check_finite(const Vec3& v, const char* channel, ValidationResult& out) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i])) {
      out.violations.push_back({Violation::Kind::NonFinite, channel, i,
                                std::string("non-finite value in ") + channel + "[" +
                                    std::to_string(i) + "]"});
    }
  }
}

}  // namespace

ValidationResult validate_frame(const SensorFrame& frame, const SensorLayout& /*layout*/) {
  ValidationResult out;
  for (std::size_t i = 0; i < frame.pressure.size(); ++i) {
    const double p = frame.pressure[i];
    if (!std::isfinite(p)) {
      out.violations.push_back({Violation::Kind::NonFinite, "pressure", i,
                                "non-finite value in pressure[" + std::to_string(i) + "]"});
    } else if (p < 0.0) {
      out.violations.push_back({Violation::Kind::NegativePressure, "pressure", i,
                                "negative pressure at index " + std::to_string(i)});
    } else if (p > kPressureFullScaleKpa) {
      out.violations.push_back({Violation::Kind::AboveFullScale, "pressure", i,
                                "pressure above full scale at index " + std::to_string(i)});
    }
  }
  check_finite(frame.accel, "accel", out);
  check_finite(frame.gyro, "gyro", out);
  check_finite(frame.mag, "mag", out);
  return out;
}

}  // namespace gaitcloud
