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

#include "gaitcloud/decision/features.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

#include "gaitcloud/error.hpp"

namespace gaitcloud::decision {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_byte(std::uint64_t& h, unsigned char b) {
  h ^= b;
  h *= kFnvPrime;
}

void add_sway(FeatureVector& fv, const char* prefix, const balance::SwayMetrics& m) {
  const std::string p = prefix;
  fv.add(p + "path_length", m.path_length_mm);
  fv.add(p + "mean_velocity", m.mean_velocity_mm_s);
  fv.add(p + "ellipse_area", m.ellipse_area_mm2);
  fv.add(p + "ml_rms", m.ml_rms);
  fv.add(p + "ap_rms", m.ap_rms);
  fv.add(p + "ml_range", m.ml_range);
  fv.add(p + "ap_range", m.ap_range);
}

}  // namespace

void FeatureVector::add(std::string name, double value) {
  if (contains(name)) throw Error(ErrorCode::BadRequest, "duplicate feature " + name);
  names_.push_back(std::move(name));
  values_.push_back(value);
}

void FeatureVector::set(std::string_view name, double value) {
  if (auto i = index_of(name)) {
    values_[*i] = value;
  } else {
    add(std::string(name), value);
  }
}

std::optional<double> FeatureVector::get(std::string_view name) const {
  if (auto i = index_of(name)) return values_[*i];
  return std::nullopt;
}

std::optional<std::size_t> FeatureVector::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

std::uint64_t FeatureVector::hash() const {
  std::uint64_t h = kFnvOffset;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (unsigned char c : names_[i]) fnv_byte(h, c);
    fnv_byte(h, 0);
    const auto bits = std::bit_cast<std::uint64_t>(values_[i]);
    for (int b = 0; b < 8; ++b) fnv_byte(h, static_cast<unsigned char>(bits >> (8 * b)));
  }
  return h;
}

std::string FeatureVector::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

double asymmetry_index(double left, double right) {
  const double denom = 0.5 * (left + right);
  if (denom == 0.0) return 0.0;
  return std::fabs(left - right) / std::fabs(denom);
}

std::vector<std::string> walking_feature_names() {
  std::vector<std::string> out;
  for (auto name : gait::kParameterNames) {
    out.push_back(std::string(name) + "_mean");
    out.push_back(std::string(name) + "_std");
    out.push_back(std::string(name) + "_asym");
  }
  out.emplace_back("session_cadence");
  out.emplace_back("turn_cycle_count");
  return out;
}

FeatureVector extract_features(
    const gait::WalkingSummary& summary,
    const std::optional<std::pair<balance::SwayReport, balance::SwayReport>>& sway) {
  if (summary.cycle_count_left < kMinCyclesPerFoot ||
      summary.cycle_count_right < kMinCyclesPerFoot) {
    throw Error(ErrorCode::TooFewCycles,
                "need " + std::to_string(kMinCyclesPerFoot) + " cycles per foot, got " +
                    std::to_string(summary.cycle_count_left) + " left / " +
                    std::to_string(summary.cycle_count_right) + " right");
  }
  FeatureVector fv;
  for (const auto& p : summary.parameters) {
    fv.add(p.name + "_mean", p.mean);
    fv.add(p.name + "_std", p.std);
    fv.add(p.name + "_asym", asymmetry_index(p.left_mean, p.right_mean));
  }
  fv.add("session_cadence", summary.session_cadence.value_or(summary.parameter("cadence").mean));
  fv.add("turn_cycle_count", static_cast<double>(summary.turn_excluded_count));
  if (sway) {
    add_sway(fv, "sway_eo_", sway->first.combined);
    add_sway(fv, "sway_ec_", sway->second.combined);
    fv.add("romberg_ratio", sway->first.romberg_ratio.value_or(0.0));
  }
  for (double v : fv.values()) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteData, "non-finite feature value");
  }
  return fv;
}

}  // namespace gaitcloud::decision
