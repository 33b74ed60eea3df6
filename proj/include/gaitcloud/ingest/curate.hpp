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

namespace gaitcloud::ingest {

struct CurateOptions {
  double target_rate_hz = kCanonicalRateHz;
  // A larger inter-sample gap splits the stream into segments.
  double gap_threshold_ms = 200.0;
  // Per-sensor baseline, as a lower-order-statistic percentile over the stream.
  double baseline_percentile = 5.0;
  bool subtract_baseline = true;
  // Fraction of frames with non-finite values that may be dropped.
  double max_nonfinite_fraction = 0.10;
};

// Sorts, collapses duplicate timestamps (keeping the lowest seq), splits at
// gaps, resamples every channel linearly onto integer-ms grid points
// t0 + round(k * 1000 / rate), and subtracts the per-sensor baseline.
//
// Segment i > 0 records the excised interval that precedes it in `gaps`; the
// first segment carries the stream's dropped_count. The output does not
// depend on the input order.
//
// Throws EmptyInput, MixedFeet, NonFiniteData.
std::vector<CuratedSegment> curate(const std::vector<SensorFrame>& frames,
                                   const CurateOptions& options);
std::vector<CuratedSegment> curate(const std::vector<SensorFrame>& frames,
                                   double target_rate_hz);

// Linear interpolation of one frame at integer time `t_ms` between `a` and
// `b` (a.t_ms <= t_ms <= b.t_ms). Exact copy when t_ms hits a sample.
SensorFrame interpolate_frame(const SensorFrame& a, const SensorFrame& b, std::uint64_t t_ms);

// Lower-order-statistic percentile: sorted[floor(q/100 * (n - 1))].
double lower_percentile(std::vector<double> values, double q);

}  // namespace gaitcloud::ingest
