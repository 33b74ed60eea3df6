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
#include <optional>
#include <span>
#include <vector>

#include "gaitcloud/balance/cop.hpp"
#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"

namespace gaitcloud::balance {

// 95% confidence ellipse: chi-square(2) quantile.
inline constexpr double kChiSquare95 = 5.991;

struct SwayMetrics {
  std::vector<std::uint64_t> t_ms;
  std::vector<double> ml_deviation;  // x - mean(x), mm
  std::vector<double> ap_deviation;  // y - mean(y), mm
  double ml_range = 0.0;
  double ap_range = 0.0;
  double ml_rms = 0.0;
  double ap_rms = 0.0;
  double path_length_mm = 0.0;
  double mean_velocity_mm_s = 0.0;
  double ellipse_area_mm2 = 0.0;  // pi * 5.991 * sqrt(det(sample covariance))
};

SwayMetrics compute_sway(std::span<const CopPoint> cops);

enum class SwaySegment : std::uint8_t { EyesOpen, EyesClosed };

struct SwayReport {
  SwaySegment segment = SwaySegment::EyesOpen;
  SwayMetrics left;      // insole-local
  SwayMetrics right;     // insole-local
  SwayMetrics combined;  // global body-frame COP
  std::optional<double> romberg_ratio;  // combined EC path / EO path
};

struct BalanceProtocol {
  double eyes_open_s = 10.0;
  double eyes_closed_s = 10.0;
  double stance_width_mm = 300.0;
};

// Splits a standing-balance session into eyes-open [t0, t0 + 10 s) and
// eyes-closed [t0 + 10 s, t0 + 20 s). Throws WrongSessionType, TooShort.
std::pair<SwayReport, SwayReport> sway_analysis(const Session& session, const SensorLayout& layout,
                                                const BalanceProtocol& protocol = {});

}  // namespace gaitcloud::balance
