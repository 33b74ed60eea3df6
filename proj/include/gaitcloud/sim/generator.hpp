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
#include <cstdint>
#include <optional>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "gaitcloud/gait/cycles.hpp"
#include "gaitcloud/gait/events.hpp"

namespace gaitcloud::sim {

struct GaitGenParams {
  double cadence_steps_per_min = 110.0;
  double stance_fraction = 0.62;
  // Right-foot stance; equals stance_fraction when unset.
  std::optional<double> right_stance_fraction;
  // Implied by the two stance fractions (left + right - 1); when set it must
  // agree with them.
  std::optional<double> double_support_fraction;
  // Left step (L strike -> R strike) lasts (1 + a) / 2 of the stride.
  double step_time_asymmetry = 0.0;
  std::array<double, 2> lateral_bias_mm{0.0, 0.0};  // [left, right], +lateral
  double duration_s = 30.0;
  double rate_hz = 100.0;
  double noise_sigma_kpa = 0.0;
  double heel_peak_kpa = 400.0;
  double forefoot_peak_kpa = 350.0;
  std::uint64_t rng_seed = 1;

  // Contact thresholds the waveforms are built around (kPa, group sum).
  double contact_on_kpa = 30.0;
  double contact_off_kpa = 15.0;
  double ramp_ms = 40.0;
  // Foot flat and heel rise as fractions of the stance phase.
  double foot_flat_fraction = 0.20;
  double heel_rise_fraction = 0.55;
  // First left heel strike.
  double first_strike_s = 0.5;

  // Protocol extras.
  std::optional<double> turn_at_s;  // 180-degree turn
  double turn_duration_s = 2.0;
  double sit_to_stand_s = 0.0;  // TUG: ramped bilateral standing load before gait onset

  double right_stance() const { return right_stance_fraction.value_or(stance_fraction); }
  double stride_s() const { return 120.0 / cadence_steps_per_min; }
  void validate() const;  // throws InvalidParams
};

struct TruthEvent {
  FootSide foot = FootSide::Left;
  gait::EventKind kind = gait::EventKind::HeelStrike;
  double t_ms = 0.0;  // exact threshold-crossing time
};

struct TruthCycle {
  FootSide foot = FootSide::Left;
  double hs_ms = 0.0;
  double next_hs_ms = 0.0;
  gait::CycleParameters parameters;
};

struct GaitTruth {
  std::vector<TruthEvent> left;
  std::vector<TruthEvent> right;
  std::vector<TruthCycle> cycles;  // strides fully inside the recording
};

struct GeneratedWalk {
  std::vector<SensorFrame> left;
  std::vector<SensorFrame> right;
  GaitTruth truth;
};

// Periodic raised-cosine pressure pulses: the heel group is loaded over
// [HS, HR] and the forefoot over [FF, TO], with edges placed so that the
// group force crosses contact_on_kpa exactly at HS / FF and falls through
// contact_off_kpa exactly at HR / TO. Throws InvalidParams.
GeneratedWalk generate_walk(const GaitGenParams& params,
                            const SensorLayout& layout = default_layout());

struct BalanceGenParams {
  double eyes_open_amplitude_mm = 4.0;
  double eyes_closed_amplitude_mm = 8.0;
  double duration_s = 20.0;
  double eyes_open_s = 10.0;
  double rate_hz = 100.0;
  double time_constant_s = 1.0;  // mean reversion
  double foot_load_kpa = 640.0;  // summed pressure per foot
  std::uint64_t rng_seed = 1;

  void validate() const;  // throws InvalidParams
};

struct CopTruth {
  std::uint64_t t_ms = 0;
  double sway_x_mm = 0.0;  // body sway displacement from the layout centroid
  double sway_y_mm = 0.0;
  std::array<Point2, 2> local{};  // per-foot insole-local COP [left, right]
};

struct GeneratedBalance {
  std::vector<SensorFrame> left;
  std::vector<SensorFrame> right;
  std::vector<CopTruth> truth;
};

// Mean-reverting (Ornstein-Uhlenbeck) sway clamped to +-3 amplitudes; the
// amplitude switches to the eyes-closed value after eyes_open_s. Pressures
// realize each foot's COP exactly via a non-negative least-norm distribution.
GeneratedBalance generate_balance(const BalanceGenParams& params,
                                  const SensorLayout& layout = default_layout());

// Minimum-norm non-negative pressures with sum = total and centroid =
// target. Sensors that would go negative are removed and the system re-solved.
std::array<double, kPressureChannels> distribute_pressure(const SensorLayout& layout,
                                                          Point2 target, double total);

}  // namespace gaitcloud::sim
