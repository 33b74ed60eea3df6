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

#include "gaitcloud/gait/contact.hpp"

#include <cmath>

#include "gaitcloud/error.hpp"

namespace gaitcloud::gait {

void ContactConfig::validate() const {
  if (!(theta_off < theta_on)) {
    throw Error(ErrorCode::InvalidParams, "theta_off must be below theta_on");
  }
  if (!(min_dwell_ms >= 0.0)) throw Error(ErrorCode::InvalidParams, "min_dwell_ms must be >= 0");
}

double group_force(const SensorFrame& frame, std::span<const std::size_t> group) {
  double sum = 0.0;
  for (auto idx : group) sum += frame.pressure[idx];
  return sum;
}

std::vector<bool> hysteresis(std::span<const double> force, double theta_on, double theta_off) {
  std::vector<bool> out(force.size());
  bool on = false;
  for (std::size_t i = 0; i < force.size(); ++i) {
    if (!on && force[i] > theta_on) {
      on = true;
    } else if (on && force[i] < theta_off) {
      on = false;
    }
    out[i] = on;
  }
  return out;
}

std::vector<bool> debounce(const std::vector<bool>& raw, std::size_t min_samples) {
  std::vector<bool> out(raw.size());
  bool accepted = false;
  std::size_t i = 0;
  while (i < raw.size()) {
    std::size_t end = i;
    while (end < raw.size() && raw[end] == raw[i]) ++end;
    if (raw[i] != accepted && end - i >= min_samples) accepted = raw[i];
    for (std::size_t k = i; k < end; ++k) out[k] = accepted;
    i = end;
  }
  return out;
}

std::size_t dwell_samples(double min_dwell_ms, double rate_hz) {
  const double samples = min_dwell_ms * rate_hz / 1000.0;
  return static_cast<std::size_t>(std::ceil(samples - 1e-9));
}

std::vector<ContactSample> contact_signal(const CuratedSegment& segment, const SensorLayout& layout,
                                          const ContactConfig& cfg) {
  cfg.validate();
  const auto n = segment.frames.size();
  std::vector<double> heel(n);
  std::vector<double> fore(n);
  for (std::size_t i = 0; i < n; ++i) {
    heel[i] = group_force(segment.frames[i], layout.heel_group);
    fore[i] = group_force(segment.frames[i], layout.forefoot_group);
  }
  const auto min_samples = dwell_samples(cfg.min_dwell_ms, segment.rate_hz);
  const auto heel_on = debounce(hysteresis(heel, cfg.theta_on, cfg.theta_off), min_samples);
  const auto fore_on = debounce(hysteresis(fore, cfg.theta_on, cfg.theta_off), min_samples);

  std::vector<ContactSample> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = {segment.frames[i].t_ms, heel_on[i], fore_on[i]};
  }
  return out;
}

}  // namespace gaitcloud::gait
