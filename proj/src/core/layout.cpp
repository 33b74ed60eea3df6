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

#include "gaitcloud/core/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "gaitcloud/error.hpp"

namespace gaitcloud {
namespace {

SensorLayout make_default_layout() {
  SensorLayout layout;
  layout.insole_model_id = "gaitcloud-default-260";
  layout.length_mm = 260.0;
  layout.positions = {{
      // heel block
      {-14.0, 22.0}, {14.0, 22.0}, {-16.0, 50.0}, {16.0, 50.0},
      // lateral midfoot column
      {26.0, 85.0}, {30.0, 115.0}, {32.0, 145.0},
      // medial arch column
      {-10.0, 95.0}, {-14.0, 125.0}, {-20.0, 152.0},
      // metatarsal heads 1, 2, 3, 5
      {-30.0, 182.0}, {-12.0, 190.0}, {6.0, 188.0}, {32.0, 172.0},
      // hallux, lesser toes
      {-28.0, 232.0}, {4.0, 226.0},
  }};
  layout.heel_group = {0, 1, 2, 3};
  layout.forefoot_group = {10, 11, 12, 13, 14, 15};
  return layout;
}

void check_group(const std::vector<std::size_t>& group, const char* name) {
  if (group.empty()) throw Error(ErrorCode::InvalidLayout, std::string(name) + " is empty");
  std::set<std::size_t> seen;
  for (auto idx : group) {
    if (idx >= kPressureChannels) {
      throw Error(ErrorCode::InvalidLayout,
                  std::string(name) + " index " + std::to_string(idx) + " out of range");
    }
    if (!seen.insert(idx).second) {
      throw Error(ErrorCode::InvalidLayout,
                  std::string(name) + " repeats index " + std::to_string(idx));
    }
  }
}

}  // namespace

void SensorLayout::validate() const {
  if (!(length_mm > 0.0) || !std::isfinite(length_mm)) {
    throw Error(ErrorCode::InvalidLayout, "length_mm must be positive");
  }
  check_group(heel_group, "heel_group");
  check_group(forefoot_group, "forefoot_group");
  for (auto idx : heel_group) {
    if (std::find(forefoot_group.begin(), forefoot_group.end(), idx) != forefoot_group.end()) {
      throw Error(ErrorCode::InvalidLayout,
                  "sensor " + std::to_string(idx) + " is in both heel and forefoot groups");
    }
  }
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const auto& p = positions[i];
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || p.x < -60.0 || p.x > 60.0 ||
        p.y < 0.0 || p.y > length_mm) {
      throw Error(ErrorCode::InvalidLayout,
                  "sensor " + std::to_string(i) + " lies outside the insole outline");
    }
  }
}

SensorLayout SensorLayout::mirrored() const {
  SensorLayout out = *this;
  for (auto& p : out.positions) p.x = -p.x;
  return out;
}

SensorLayout SensorLayout::scaled_to_length(double new_length_mm) const {
  if (!(new_length_mm > 0.0)) throw Error(ErrorCode::InvalidLayout, "length must be positive");
  SensorLayout out = *this;
  const double k = new_length_mm / length_mm;
  for (auto& p : out.positions) p.y *= k;
  out.length_mm = new_length_mm;
  return out;
}

Point2 SensorLayout::centroid() const {
  Point2 c;
  for (const auto& p : positions) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(positions.size());
  c.y /= static_cast<double>(positions.size());
  return c;
}

const SensorLayout& default_layout() {
  static const SensorLayout layout = make_default_layout();
  return layout;
}

SensorLayout layout_from_json(const nlohmann::json& doc) {
  SensorLayout layout;
  try {
    layout.insole_model_id = doc.at("insole_model_id").get<std::string>();
    layout.length_mm = doc.at("length_mm").get<double>();
    const auto& positions = doc.at("positions");
    if (!positions.is_array() || positions.size() != kPressureChannels) {
      throw Error(ErrorCode::InvalidLayout, "positions must hold exactly 16 points");
    }
    for (std::size_t i = 0; i < kPressureChannels; ++i) {
      const auto& p = positions[i];
      if (!p.is_array() || p.size() != 2) {
        throw Error(ErrorCode::InvalidLayout, "position " + std::to_string(i) + " is not [x, y]");
      }
      layout.positions[i] = {p[0].get<double>(), p[1].get<double>()};
    }
    layout.heel_group = doc.at("heel_group").get<std::vector<std::size_t>>();
    layout.forefoot_group = doc.at("forefoot_group").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidLayout, e.what());
  }
  layout.validate();
  return layout;
}

nlohmann::json layout_to_json(const SensorLayout& layout) {
  nlohmann::json positions = nlohmann::json::array();
  for (const auto& p : layout.positions) positions.push_back({p.x, p.y});
  return {
      {"insole_model_id", layout.insole_model_id},
      {"length_mm", layout.length_mm},
      {"positions", positions},
      {"heel_group", layout.heel_group},
      {"forefoot_group", layout.forefoot_group},
  };
}

SensorLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open layout " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidLayout, e.what());
  }
  return layout_from_json(doc);
}

}  // namespace gaitcloud
