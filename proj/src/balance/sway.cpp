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

#include "gaitcloud/balance/sway.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gaitcloud/error.hpp"

namespace gaitcloud::balance {
namespace {

std::vector<CopPoint> window(const std::vector<CopPoint>& series, std::uint64_t from,
                             std::uint64_t to) {
  std::vector<CopPoint> out;
  for (const auto& p : series) {
    if (p.t_ms >= from && p.t_ms < to) out.push_back(p);
  }
  return out;
}

}  // namespace

SwayMetrics compute_sway(std::span<const CopPoint> cops) {
  SwayMetrics m;
  const std::size_t n = cops.size();
  if (n == 0) return m;
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : cops) {
    mx += p.x_mm;
    my += p.y_mm;
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  double ml_lo = std::numeric_limits<double>::infinity();
  double ml_hi = -ml_lo;
  double ap_lo = ml_lo;
  double ap_hi = -ml_lo;
  m.t_ms.reserve(n);
  m.ml_deviation.reserve(n);
  m.ap_deviation.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = cops[i].x_mm - mx;
    const double dy = cops[i].y_mm - my;
    m.t_ms.push_back(cops[i].t_ms);
    m.ml_deviation.push_back(dx);
    m.ap_deviation.push_back(dy);
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
    ml_lo = std::min(ml_lo, dx);
    ml_hi = std::max(ml_hi, dx);
    ap_lo = std::min(ap_lo, dy);
    ap_hi = std::max(ap_hi, dy);
    if (i > 0) {
      m.path_length_mm +=
          std::hypot(cops[i].x_mm - cops[i - 1].x_mm, cops[i].y_mm - cops[i - 1].y_mm);
    }
  }
  m.ml_range = ml_hi - ml_lo;
  m.ap_range = ap_hi - ap_lo;
  m.ml_rms = std::sqrt(sxx / static_cast<double>(n));
  m.ap_rms = std::sqrt(syy / static_cast<double>(n));
  const double duration_s = static_cast<double>(cops.back().t_ms - cops.front().t_ms) / 1000.0;
  m.mean_velocity_mm_s = duration_s > 0.0 ? m.path_length_mm / duration_s : 0.0;
  if (n >= 2) {
    const double d = static_cast<double>(n - 1);
    const double det = (sxx / d) * (syy / d) - (sxy / d) * (sxy / d);
    m.ellipse_area_mm2 = std::numbers::pi * kChiSquare95 * std::sqrt(std::max(0.0, det));
  }
  return m;
}

std::pair<SwayReport, SwayReport> sway_analysis(const Session& session, const SensorLayout& layout,
                                                const BalanceProtocol& protocol) {
  if (session.type.kind() != SessionType::Kind::StandingBalance) {
    throw Error(ErrorCode::WrongSessionType,
                "sway analysis needs a standing_balance session, got " +
                    std::string(session.type.name()));
  }
  std::uint64_t t0 = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t t1 = 0;
  for (FootSide foot : kBothFeet) {
    for (const auto& seg : session.segments(foot)) {
      if (seg.frames.empty()) continue;
      t0 = std::min(t0, seg.frames.front().t_ms);
      t1 = std::max(t1, seg.frames.back().t_ms);
    }
  }
  const double period_ms = 1000.0 / session.sample_rate_hz;
  const double needed_ms = 1000.0 * (protocol.eyes_open_s + protocol.eyes_closed_s);
  if (t1 < t0 || static_cast<double>(t1 - t0) + period_ms + 1e-6 < needed_ms) {
    throw Error(ErrorCode::TooShort, "standing balance needs " +
                                         std::to_string(needed_ms / 1000.0) + " s of data");
  }
  const auto split = t0 + static_cast<std::uint64_t>(std::llround(1000.0 * protocol.eyes_open_s));
  const auto end = t0 + static_cast<std::uint64_t>(std::llround(needed_ms));

  std::array<std::vector<CopPoint>, 2> per_foot;
  for (FootSide foot : kBothFeet) {
    for (const auto& seg : session.segments(foot)) {
      auto s = cop_series(seg.frames, layout);
      auto& dest = per_foot[static_cast<std::size_t>(foot)];
      dest.insert(dest.end(), s.begin(), s.end());
    }
  }
  const auto combined = global_cop_series(session, layout, protocol.stance_width_mm);

  auto report = [&](SwaySegment which, std::uint64_t from, std::uint64_t to) {
    SwayReport r;
    r.segment = which;
    r.left = compute_sway(window(per_foot[0], from, to));
    r.right = compute_sway(window(per_foot[1], from, to));
    r.combined = compute_sway(window(combined, from, to));
    return r;
  };
  auto eo = report(SwaySegment::EyesOpen, t0, split);
  auto ec = report(SwaySegment::EyesClosed, split, end);
  if (eo.combined.path_length_mm > 0.0) {
    const double ratio = ec.combined.path_length_mm / eo.combined.path_length_mm;
    eo.romberg_ratio = ratio;
    ec.romberg_ratio = ratio;
  }
  return {std::move(eo), std::move(ec)};
}

}  // namespace gaitcloud::balance
