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

#include "gaitcloud/sim/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gaitcloud/error.hpp"
#include "gaitcloud/random.hpp"

namespace gaitcloud::sim {
namespace {

constexpr double kGravity = 9.80665;
constexpr double kPi = std::numbers::pi;
constexpr Vec3 kMagField{22.0, 5.0, -40.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParams, what);
}

// Tukey-edged window with unit plateau. The rising edge passes on/peak at
// t = a, the falling edge passes off/peak at t = b.
struct Pulse {
  double rise_start = 0.0;
  double fall_start = 0.0;
  double ramp = 0.0;

  static Pulse make(double a, double b, double peak, double on, double off, double ramp) {
    Pulse p;
    p.ramp = ramp;
    p.rise_start = a - ramp / kPi * std::acos(1.0 - 2.0 * on / peak);
    p.fall_start = b - ramp / kPi * std::acos(2.0 * off / peak - 1.0);
    return p;
  }

  double at(double t) const {
    if (t <= rise_start || t >= fall_start + ramp) return 0.0;
    if (t < rise_start + ramp) return 0.5 * (1.0 - std::cos(kPi * (t - rise_start) / ramp));
    if (t <= fall_start) return 1.0;
    return 0.5 * (1.0 + std::cos(kPi * (t - fall_start) / ramp));
  }

  bool feasible() const { return rise_start + ramp <= fall_start; }
};

struct FootPlan {
  FootSide foot = FootSide::Left;
  double first_hs = 0.0;  // ms
  double stance = 0.0;    // fraction
  long first_cycle = 0;   // cycles before this index are not generated
  std::array<double, kPressureChannels> peak{};
  double heel_total = 0.0;
  double fore_total = 0.0;
  std::vector<std::size_t> midfoot;
  double standing_end = -1.0;  // ms; TUG standing load ends here
};

struct CycleTimes {
  double hs, ff, hr, to, next_hs;
};

CycleTimes cycle_times(const GaitGenParams& p, const FootPlan& plan, long k) {
  const double stride = 1000.0 * p.stride_s();
  const double hs = plan.first_hs + static_cast<double>(k) * stride;
  const double stance = plan.stance * stride;
  return {hs, hs + p.foot_flat_fraction * stance, hs + p.heel_rise_fraction * stance, hs + stance,
          hs + stride};
}

double group_total(const std::array<double, kPressureChannels>& peak,
                   const std::vector<std::size_t>& group) {
  double s = 0.0;
  for (auto i : group) s += peak[i];
  return s;
}

FootPlan plan_foot(const GaitGenParams& p, const SensorLayout& layout, FootSide foot,
                   double first_hs, double stance) {
  FootPlan plan;
  plan.foot = foot;
  plan.first_hs = first_hs;
  plan.stance = stance;
  std::vector<bool> grouped(kPressureChannels, false);
  std::array<double, kPressureChannels> base{};
  // Relative loading within each group: posterior heel and medial forefoot
  // carry more.
  const double heel_w[] = {1.0, 0.9, 0.8, 0.7};
  const double fore_w[] = {0.9, 1.0, 0.9, 0.6, 0.8, 0.5};
  for (std::size_t j = 0; j < layout.heel_group.size(); ++j) {
    base[layout.heel_group[j]] = p.heel_peak_kpa * heel_w[j % 4];
    grouped[layout.heel_group[j]] = true;
  }
  for (std::size_t j = 0; j < layout.forefoot_group.size(); ++j) {
    base[layout.forefoot_group[j]] = p.forefoot_peak_kpa * fore_w[j % 6];
    grouped[layout.forefoot_group[j]] = true;
  }
  const Point2 c = layout.centroid();
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    if (!grouped[i]) {
      plan.midfoot.push_back(i);
      base[i] = layout.positions[i].x > c.x ? 80.0 : 30.0;
    }
  }
  // Lateral bias tilts the load linearly in x about the centroid.
  double var_x = 0.0;
  for (const auto& q : layout.positions) var_x += (q.x - c.x) * (q.x - c.x);
  var_x /= static_cast<double>(kPressureChannels);
  const double beta = p.lateral_bias_mm[static_cast<std::size_t>(foot)] / var_x;
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    plan.peak[i] = base[i] * std::max(0.0, 1.0 + beta * (layout.positions[i].x - c.x));
  }
  plan.heel_total = group_total(plan.peak, layout.heel_group);
  plan.fore_total = group_total(plan.peak, layout.forefoot_group);
  return plan;
}

struct Sample {
  std::array<double, kPressureChannels> pressure{};
  Vec3 accel{0.0, 0.0, kGravity};
  Vec3 gyro{};
};

Sample evaluate(const GaitGenParams& p, const SensorLayout& layout, const FootPlan& plan,
                double t) {
  Sample s;
  const double stride = 1000.0 * p.stride_s();
  const long k0 = static_cast<long>(std::floor((t - plan.first_hs) / stride));
  for (long k = k0 - 1; k <= k0 + 1; ++k) {
    if (k < plan.first_cycle) continue;
    const auto c = cycle_times(p, plan, k);
    const auto heel = Pulse::make(c.hs, c.hr, plan.heel_total, p.contact_on_kpa,
                                  p.contact_off_kpa, p.ramp_ms);
    const auto fore = Pulse::make(c.ff, c.to, plan.fore_total, p.contact_on_kpa,
                                  p.contact_off_kpa, p.ramp_ms);
    const double h = heel.at(t);
    const double f = fore.at(t);
    for (auto i : layout.heel_group) s.pressure[i] += h * plan.peak[i];
    for (auto i : layout.forefoot_group) s.pressure[i] += f * plan.peak[i];
    // Midfoot loads between foot flat and heel rise.
    const Pulse mid{c.ff, c.hr - p.ramp_ms, p.ramp_ms};
    const double m = mid.feasible() ? mid.at(t) : 0.0;
    for (auto i : plan.midfoot) s.pressure[i] += m * plan.peak[i];

    const double dt = (t - c.hs) / 15.0;
    s.accel[2] += 1.5 * kGravity * std::exp(-0.5 * dt * dt);
    if (t >= c.to && t < c.next_hs) {
      s.gyro[0] += 300.0 * std::sin(kPi * (t - c.to) / (c.next_hs - c.to));
    }
  }
  if (p.sit_to_stand_s > 0.0 && plan.standing_end > 0.0) {
    const double rise_end = 1000.0 * p.sit_to_stand_s;
    double w = 0.0;
    if (t < rise_end) {
      w = 0.5 * (1.0 - std::cos(kPi * t / rise_end));
    } else if (t < plan.standing_end) {
      w = 1.0;
    } else if (t < plan.standing_end + p.ramp_ms) {
      w = 0.5 * (1.0 + std::cos(kPi * (t - plan.standing_end) / p.ramp_ms));
    }
    for (auto& v : s.pressure) v += 40.0 * w;
  }
  if (p.turn_at_s) {
    const double a = 1000.0 * *p.turn_at_s;
    const double b = a + 1000.0 * p.turn_duration_s;
    if (t >= a && t < b) s.gyro[2] += 180.0 / p.turn_duration_s;
  }
  return s;
}

std::vector<SensorFrame> render(const GaitGenParams& p, const SensorLayout& layout,
                                const FootPlan& plan, std::size_t count, Rng& rng) {
  std::vector<SensorFrame> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    SensorFrame f;
    f.foot = plan.foot;
    f.seq = static_cast<std::uint32_t>(k);
    f.t_ms = static_cast<std::uint64_t>(std::llround(static_cast<double>(k) * 1000.0 / p.rate_hz));
    const auto s = evaluate(p, layout, plan, static_cast<double>(f.t_ms));
    f.pressure = s.pressure;
    if (p.noise_sigma_kpa > 0.0) {
      for (auto& v : f.pressure) v += p.noise_sigma_kpa * rng.normal();
    }
    f.accel = s.accel;
    f.gyro = s.gyro;
    f.mag = kMagField;
    out.push_back(f);
  }
  return out;
}

}  // namespace

void GaitGenParams::validate() const {
  require(cadence_steps_per_min > 0.0 && cadence_steps_per_min <= 300.0,
          "cadence must be in (0, 300] steps/min");
  const double sl = stance_fraction;
  const double sr = right_stance();
  require(sl > 0.0 && sl < 1.0 && sr > 0.0 && sr < 1.0, "stance fractions must be in (0, 1)");
  if (double_support_fraction) {
    require(std::fabs(*double_support_fraction - (sl + sr - 1.0)) < 1e-6,
            "double_support_fraction must equal left + right stance - 1 (" +
                std::to_string(sl + sr - 1.0) + ")");
  }
  require(std::fabs(step_time_asymmetry) < 1.0, "step_time_asymmetry must be in (-1, 1)");
  require(duration_s > 0.0 && rate_hz > 0.0, "duration and rate must be positive");
  require(noise_sigma_kpa >= 0.0, "noise sigma must be non-negative");
  require(contact_off_kpa > 0.0 && contact_off_kpa < contact_on_kpa,
          "contact thresholds must satisfy 0 < off < on");
  require(heel_peak_kpa > 0.0 && forefoot_peak_kpa > 0.0, "peak pressures must be positive");
  require(ramp_ms > 0.0, "ramp must be positive");
  require(foot_flat_fraction > 0.0 && foot_flat_fraction < heel_rise_fraction &&
              heel_rise_fraction < 1.0,
          "need 0 < foot_flat_fraction < heel_rise_fraction < 1");
  require(first_strike_s >= 0.0 && sit_to_stand_s >= 0.0, "start offsets must be non-negative");
  require(turn_duration_s > 0.0, "turn duration must be positive");
}

void BalanceGenParams::validate() const {
  require(eyes_open_amplitude_mm >= 0.0 && eyes_closed_amplitude_mm >= 0.0,
          "sway amplitudes must be non-negative");
  require(duration_s > 0.0 && rate_hz > 0.0, "duration and rate must be positive");
  require(eyes_open_s >= 0.0, "eyes_open_s must be non-negative");
  require(time_constant_s > 0.0, "time constant must be positive");
  require(foot_load_kpa > 0.0, "foot load must be positive");
}

GeneratedWalk generate_walk(const GaitGenParams& p, const SensorLayout& layout) {
  p.validate();
  layout.validate();
  const double stride = 1000.0 * p.stride_s();
  const double phase = 0.5 * (1.0 + p.step_time_asymmetry);

  double first_left = 1000.0 * p.first_strike_s;
  if (p.sit_to_stand_s > 0.0) first_left = std::max(first_left, 1000.0 * p.sit_to_stand_s + stride);
  auto left = plan_foot(p, layout, FootSide::Left, first_left, p.stance_fraction);
  auto right = plan_foot(p, layout, FootSide::Right, first_left + phase * stride, p.right_stance());
  // Continuous gait extends back before t = 0; a TUG starts from standing.
  const long history = static_cast<long>(std::ceil(first_left / stride)) + 2;
  left.first_cycle = -history;
  right.first_cycle = -history;
  if (p.sit_to_stand_s > 0.0) {
    left.first_cycle = 0;
    right.first_cycle = 0;
    left.standing_end = left.first_hs - (1.0 - left.stance) * stride;
    right.standing_end = right.first_hs - (1.0 - right.stance) * stride;
  }
  for (const auto* plan : {&left, &right}) {
    const auto c = cycle_times(p, *plan, 0);
    const auto heel = Pulse::make(c.hs, c.hr, plan->heel_total, p.contact_on_kpa,
                                  p.contact_off_kpa, p.ramp_ms);
    const auto fore = Pulse::make(c.ff, c.to, plan->fore_total, p.contact_on_kpa,
                                  p.contact_off_kpa, p.ramp_ms);
    require(plan->heel_total > p.contact_on_kpa && plan->fore_total > p.contact_on_kpa,
            "group peak must exceed the contact threshold");
    require(heel.feasible() && fore.feasible(), "contact windows are shorter than the ramps");
  }

  const auto count = static_cast<std::size_t>(std::floor(p.duration_s * p.rate_hz));
  require(count >= 2, "duration too short for the sample rate");
  Rng rng(p.rng_seed);
  GeneratedWalk out;
  out.left = render(p, layout, left, count, rng);
  out.right = render(p, layout, right, count, rng);

  // Events whose detection is not cut short by either end of the recording.
  const double t_last = static_cast<double>(out.left.back().t_ms);
  const double margin = 100.0;
  auto in_range = [&](double t) { return t >= margin && t <= t_last - margin; };
  for (const auto* plan : {&left, &right}) {
    auto& events = plan->foot == FootSide::Left ? out.truth.left : out.truth.right;
    for (long k = plan->first_cycle; ; ++k) {
      const auto c = cycle_times(p, *plan, k);
      if (c.hs > t_last) break;
      const std::pair<gait::EventKind, double> ev[] = {{gait::EventKind::HeelStrike, c.hs},
                                                       {gait::EventKind::FootFlat, c.ff},
                                                       {gait::EventKind::HeelRise, c.hr},
                                                       {gait::EventKind::ToeOff, c.to}};
      for (const auto& [kind, t] : ev) {
        if (in_range(t)) events.push_back({plan->foot, kind, t});
      }
    }
  }
  for (const auto* plan : {&left, &right}) {
    const auto& opp = plan == &left ? out.truth.right : out.truth.left;
    for (long k = std::max(0L, plan->first_cycle); ; ++k) {
      const auto c = cycle_times(p, *plan, k);
      if (c.next_hs > t_last - margin) break;
      if (c.hs < margin) continue;
      double opp_to = -1.0;
      double opp_hs = -1.0;
      for (const auto& e : opp) {
        if (e.kind == gait::EventKind::ToeOff && opp_to < 0.0 && e.t_ms >= c.hs &&
            e.t_ms < c.next_hs) {
          opp_to = e.t_ms;
        }
        if (e.kind == gait::EventKind::HeelStrike && opp_to >= 0.0 && opp_hs < 0.0 &&
            e.t_ms > opp_to) {
          opp_hs = e.t_ms;
        }
      }
      if (opp_to < 0.0 || opp_hs < 0.0) continue;
      TruthCycle tc;
      tc.foot = plan->foot;
      tc.hs_ms = c.hs;
      tc.next_hs_ms = c.next_hs;
      auto pct = [&](double a, double b) { return 100.0 * (b - a) / stride; };
      auto& q = tc.parameters;
      q.cycle_time_s = stride / 1000.0;
      q.cadence_steps_per_min = 120.0 / q.cycle_time_s;
      q.stance_pct = pct(c.hs, c.to);
      q.load_response_pct = pct(c.hs, opp_to);
      q.pre_swing_pct = pct(opp_hs, c.to);
      q.double_support_pct = q.load_response_pct + q.pre_swing_pct;
      q.single_support_pct = q.stance_pct - q.double_support_pct;
      q.terminal_stance_pct = pct(c.hr, opp_hs);
      out.truth.cycles.push_back(tc);
    }
  }
  return out;
}

std::array<double, kPressureChannels> distribute_pressure(const SensorLayout& layout,
                                                          Point2 target, double total) {
  std::array<bool, kPressureChannels> active{};
  active.fill(true);
  std::array<double, kPressureChannels> p{};
  for (int round = 0; round < static_cast<int>(kPressureChannels); ++round) {
    // Normal equations for p_i = l0 + l1 x_i + l2 y_i over the active set.
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < kPressureChannels; ++i) {
      if (!active[i]) continue;
      const auto& q = layout.positions[i];
      n += 1;
      sx += q.x;
      sy += q.y;
      sxx += q.x * q.x;
      sxy += q.x * q.y;
      syy += q.y * q.y;
    }
    const double m[3][3] = {{n, sx, sy}, {sx, sxx, sxy}, {sy, sxy, syy}};
    const double b[3] = {total, total * target.x, total * target.y};
    auto det3 = [](const double a[3][3]) {
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    const double d = det3(m);
    require(n >= 3 && std::fabs(d) > 1e-9, "COP target unreachable with non-negative pressures");
    double l[3];
    for (int c = 0; c < 3; ++c) {
      double mc[3][3];
      for (int r = 0; r < 3; ++r) {
        for (int k = 0; k < 3; ++k) mc[r][k] = k == c ? b[r] : m[r][k];
      }
      l[c] = det3(mc) / d;
    }
    bool any_negative = false;
    for (std::size_t i = 0; i < kPressureChannels; ++i) {
      if (!active[i]) {
        p[i] = 0.0;
        continue;
      }
      const auto& q = layout.positions[i];
      p[i] = l[0] + l[1] * q.x + l[2] * q.y;
      if (p[i] < 0.0) {
        active[i] = false;
        any_negative = true;
      }
    }
    if (!any_negative) return p;
  }
  throw Error(ErrorCode::InvalidParams, "COP target unreachable with non-negative pressures");
}

GeneratedBalance generate_balance(const BalanceGenParams& p, const SensorLayout& layout) {
  p.validate();
  layout.validate();
  const auto count = static_cast<std::size_t>(std::floor(p.duration_s * p.rate_hz));
  require(count >= 2, "duration too short for the sample rate");
  const Point2 c = layout.centroid();
  const double dt = 1.0 / p.rate_hz;
  Rng rng(p.rng_seed);
  GeneratedBalance out;
  out.left.reserve(count);
  out.right.reserve(count);
  out.truth.reserve(count);
  double dx = 0.0;
  double dy = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const auto t_ms =
        static_cast<std::uint64_t>(std::llround(static_cast<double>(k) * 1000.0 / p.rate_hz));
    const double amp = static_cast<double>(t_ms) < 1000.0 * p.eyes_open_s
                           ? p.eyes_open_amplitude_mm
                           : p.eyes_closed_amplitude_mm;
    if (k > 0) {
      const double sigma = amp * std::sqrt(2.0 / p.time_constant_s);
      const double decay = dt / p.time_constant_s;
      dx += -decay * dx + sigma * std::sqrt(dt) * rng.normal();
      dy += -decay * dy + sigma * std::sqrt(dt) * rng.normal();
      dx = std::clamp(dx, -3.0 * amp, 3.0 * amp);
      dy = std::clamp(dy, -3.0 * amp, 3.0 * amp);
    }
    CopTruth truth;
    truth.t_ms = t_ms;
    truth.sway_x_mm = dx;
    truth.sway_y_mm = dy;
    // Local +x is lateral on both insoles, so body-frame sway to the right
    // moves the right COP laterally and the left COP medially.
    truth.local[0] = {c.x - dx, c.y + dy};
    truth.local[1] = {c.x + dx, c.y + dy};
    for (FootSide foot : kBothFeet) {
      const auto idx = static_cast<std::size_t>(foot);
      SensorFrame f;
      f.foot = foot;
      f.seq = static_cast<std::uint32_t>(k);
      f.t_ms = t_ms;
      f.pressure = distribute_pressure(layout, truth.local[idx], p.foot_load_kpa);
      f.accel = {0.0, 0.0, kGravity};
      f.mag = kMagField;
      (foot == FootSide::Left ? out.left : out.right).push_back(f);
    }
    out.truth.push_back(truth);
  }
  return out;
}

}  // namespace gaitcloud::sim
