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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaitcloud/balance/sway.hpp"
#include "gaitcloud/gait/summary.hpp"

namespace gaitcloud::decision {

// Named feature values in insertion order.
class FeatureVector {
 public:
  // Throws BadRequest on a duplicate name.
  void add(std::string name, double value);
  void set(std::string_view name, double value);  // adds when absent
  std::optional<double> get(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return names_.size(); }

  // FNV-1a over names and the IEEE bit patterns of the values.
  std::uint64_t hash() const;
  std::string hash_hex() const;

  bool operator==(const FeatureVector&) const = default;

 private:
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::vector<std::string> names_;
  std::vector<double> values_;
};

inline constexpr std::size_t kMinCyclesPerFoot = 3;

// |L - R| / (0.5 (L + R)); 0 when both are zero.
double asymmetry_index(double left, double right);

// Per parameter: <name>_mean, <name>_std, <name>_asym; then session_cadence
// and turn_cycle_count. With a balance report pair the sway scalars follow
// (sway_eo_* / sway_ec_* and romberg_ratio). Throws TooFewCycles.
FeatureVector extract_features(
    const gait::WalkingSummary& summary,
    const std::optional<std::pair<balance::SwayReport, balance::SwayReport>>& sway = std::nullopt);

// Walking feature names in extraction order.
std::vector<std::string> walking_feature_names();

}  // namespace gaitcloud::decision
