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

#include "gaitcloud/ingest/curate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "gaitcloud/error.hpp"

namespace gaitcloud::ingest {
namespace {

bool all_finite(const SensorFrame& f) {
  auto finite = [](const auto& arr) {
    return std::all_of(arr.begin(), arr.end(), [](double v) { return std::isfinite(v); });
  };
  return finite(f.pressure) && finite(f.accel) && finite(f.gyro) && finite(f.mag);
}

// Total order so that "keep first" among duplicate timestamps is independent
// of arrival order.
bool frame_less(const SensorFrame& a, const SensorFrame& b) {
  return std::tie(a.t_ms, a.seq, a.pressure, a.accel, a.gyro, a.mag) <
         std::tie(b.t_ms, b.seq, b.pressure, b.accel, b.gyro, b.mag);
}

template <std::size_t N>
void lerp_into(std::array<double, N>& out, const std::array<double, N>& a,
               const std::array<double, N>& b, double w) {
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i] + (b[i] - a[i]) * w;
}

std::vector<SensorFrame> resample_run(const std::vector<SensorFrame>& run, double rate_hz) {
  const double period = 1000.0 / rate_hz;
  const std::uint64_t t0 = run.front().t_ms;
  const std::uint64_t t_last = run.back().t_ms;
  std::vector<SensorFrame> out;
  std::size_t j = 0;
  for (std::uint64_t k = 0;; ++k) {
    const auto t = t0 + static_cast<std::uint64_t>(std::llround(static_cast<double>(k) * period));
    if (t > t_last) break;
    while (j + 1 < run.size() && run[j + 1].t_ms <= t) ++j;
    const auto& a = run[j];
    const auto& b = j + 1 < run.size() ? run[j + 1] : run[j];
    out.push_back(interpolate_frame(a, b, t));
  }
  return out;
}

}  // namespace

SensorFrame interpolate_frame(const SensorFrame& a, const SensorFrame& b, std::uint64_t t_ms) {
  if (t_ms == a.t_ms || b.t_ms == a.t_ms) {
    SensorFrame f = a;
    f.t_ms = t_ms;
    return f;
  }
  if (t_ms == b.t_ms) return b;
  const double w = static_cast<double>(t_ms - a.t_ms) / static_cast<double>(b.t_ms - a.t_ms);
  SensorFrame f;
  f.foot = a.foot;
  f.seq = a.seq;
  f.t_ms = t_ms;
  lerp_into(f.pressure, a.pressure, b.pressure, w);
  lerp_into(f.accel, a.accel, b.accel, w);
  lerp_into(f.gyro, a.gyro, b.gyro, w);
  lerp_into(f.mag, a.mag, b.mag, w);
  return f;
}

double lower_percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  const auto idx = static_cast<std::size_t>(
      std::floor(q / 100.0 * static_cast<double>(values.size() - 1)));
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx),
                   values.end());
  return values[idx];
}

std::vector<CuratedSegment> curate(const std::vector<SensorFrame>& frames, double target_rate_hz) {
  CurateOptions options;
  options.target_rate_hz = target_rate_hz;
  return curate(frames, options);
}

std::vector<CuratedSegment> curate(const std::vector<SensorFrame>& frames,
                                   const CurateOptions& options) {
  if (frames.empty()) throw Error(ErrorCode::EmptyInput, "no frames to curate");
  if (!(options.target_rate_hz > 0.0) || !std::isfinite(options.target_rate_hz)) {
    throw Error(ErrorCode::InvalidParams, "target rate must be positive");
  }
  const FootSide foot = frames.front().foot;

  std::vector<SensorFrame> clean;
  clean.reserve(frames.size());
  std::size_t non_finite = 0;
  for (const auto& f : frames) {
    if (f.foot != foot) throw Error(ErrorCode::MixedFeet, "curation input mixes both feet");
    if (all_finite(f)) {
      clean.push_back(f);
    } else {
      ++non_finite;
    }
  }
  if (static_cast<double>(non_finite) >
      options.max_nonfinite_fraction * static_cast<double>(frames.size())) {
    throw Error(ErrorCode::NonFiniteData,
                std::to_string(non_finite) + " of " + std::to_string(frames.size()) +
                    " frames carry non-finite values");
  }

  std::sort(clean.begin(), clean.end(), frame_less);
  const auto before = clean.size();
  clean.erase(std::unique(clean.begin(), clean.end(),
                          [](const SensorFrame& a, const SensorFrame& b) {
                            return a.t_ms == b.t_ms;
                          }),
              clean.end());
  const std::size_t dropped = non_finite + (before - clean.size());

  std::vector<std::vector<SensorFrame>> runs;
  runs.emplace_back();
  for (std::size_t i = 0; i < clean.size(); ++i) {
    if (i > 0 && static_cast<double>(clean[i].t_ms - clean[i - 1].t_ms) > options.gap_threshold_ms) {
      runs.emplace_back();
    }
    runs.back().push_back(clean[i]);
  }

  std::vector<CuratedSegment> segments;
  segments.reserve(runs.size());
  for (const auto& run : runs) {
    CuratedSegment seg;
    seg.foot = foot;
    seg.rate_hz = options.target_rate_hz;
    seg.frames = resample_run(run, options.target_rate_hz);
    seg.t0_ms = seg.frames.front().t_ms;
    if (!segments.empty()) {
      seg.gaps.emplace_back(segments.back().frames.back().t_ms, seg.t0_ms);
    }
    segments.push_back(std::move(seg));
  }
  segments.front().dropped_count = dropped;

  if (options.subtract_baseline) {
    for (std::size_t ch = 0; ch < kPressureChannels; ++ch) {
      std::vector<double> values;
      for (const auto& seg : segments) {
        for (const auto& f : seg.frames) values.push_back(f.pressure[ch]);
      }
      const double baseline = lower_percentile(std::move(values), options.baseline_percentile);
      for (auto& seg : segments) {
        for (auto& f : seg.frames) f.pressure[ch] = std::max(0.0, f.pressure[ch] - baseline);
      }
    }
  }
  return segments;
}

}  // namespace gaitcloud::ingest
