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

#include "gaitcloud/ingest/mapping.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>

#include "gaitcloud/error.hpp"

namespace gaitcloud::ingest {
namespace {

struct Target {
  enum class Field { Pressure, Accel, Gyro, Mag, Seq, Time } field;
  std::size_t index = 0;
};

std::optional<Target> parse_target(const std::string& name) {
  static constexpr std::array<const char*, 3> axes{"x", "y", "z"};
  if (name == "seq") return Target{Target::Field::Seq, 0};
  if (name == "t_ms") return Target{Target::Field::Time, 0};
  if (name.rfind("pressure.", 0) == 0) {
    const auto idx_text = name.substr(9);
    if (idx_text.empty() || idx_text.size() > 2 ||
        idx_text.find_first_not_of("0123456789") != std::string::npos) {
      return std::nullopt;
    }
    const auto idx = static_cast<std::size_t>(std::stoul(idx_text));
    if (idx >= kPressureChannels) return std::nullopt;
    return Target{Target::Field::Pressure, idx};
  }
  const std::array<std::pair<const char*, Target::Field>, 3> vectors{{
      {"accel.", Target::Field::Accel},
      {"gyro.", Target::Field::Gyro},
      {"mag.", Target::Field::Mag},
  }};
  for (const auto& [prefix, field] : vectors) {
    const std::string p(prefix);
    if (name.rfind(p, 0) != 0) continue;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      if (name.substr(p.size()) == axes[a]) return Target{field, a};
    }
  }
  return std::nullopt;
}

}  // namespace

void MappingSpec::validate() const {
  std::array<int, kPressureChannels> pressure_sources{};
  std::set<std::string> targets;
  for (const auto& ch : channels) {
    const auto target = parse_target(ch.target);
    if (!target) throw Error(ErrorCode::InvalidMapping, "unknown target '" + ch.target + "'");
    if (!targets.insert(ch.target).second) {
      throw Error(ErrorCode::InvalidMapping, "target '" + ch.target + "' mapped twice");
    }
    if (!std::isfinite(ch.scale) || ch.scale == 0.0 || !std::isfinite(ch.offset)) {
      throw Error(ErrorCode::InvalidMapping, "bad scale/offset for '" + ch.target + "'");
    }
    if (target->field == Target::Field::Pressure) ++pressure_sources[target->index];
  }
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    if (pressure_sources[i] == 0) {
      throw Error(ErrorCode::UnmappedChannel, "pressure channel " + std::to_string(i));
    }
  }
  layout.validate();
}

MappingSpec MappingSpec::identity() {
  MappingSpec spec;
  spec.source_model_id = "identity";
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    spec.channels.push_back({"p" + std::to_string(i), "pressure." + std::to_string(i), 1.0, 0.0});
  }
  for (const char* axis : {"x", "y", "z"}) {
    spec.channels.push_back({std::string("a") + axis, std::string("accel.") + axis, 1.0, 0.0});
    spec.channels.push_back({std::string("g") + axis, std::string("gyro.") + axis, 1.0, 0.0});
    spec.channels.push_back({std::string("m") + axis, std::string("mag.") + axis, 1.0, 0.0});
  }
  spec.channels.push_back({"seq", "seq", 1.0, 0.0});
  spec.channels.push_back({"t_ms", "t_ms", 1.0, 0.0});
  return spec;
}

SensorFrame map_external(const ExternalRecord& record, const MappingSpec& spec, FootSide foot) {
  SensorFrame frame;
  frame.foot = foot;
  std::array<bool, kPressureChannels> mapped{};
  for (const auto& ch : spec.channels) {
    const auto target = parse_target(ch.target);
    if (!target) throw Error(ErrorCode::InvalidMapping, "unknown target '" + ch.target + "'");
    const auto it = record.find(ch.source);
    if (it == record.end()) throw Error(ErrorCode::MissingField, ch.source);
    const double value = it->second * ch.scale + ch.offset;
    switch (target->field) {
      case Target::Field::Pressure:
        frame.pressure[target->index] = value;
        mapped[target->index] = true;
        break;
      case Target::Field::Accel: frame.accel[target->index] = value; break;
      case Target::Field::Gyro: frame.gyro[target->index] = value; break;
      case Target::Field::Mag: frame.mag[target->index] = value; break;
      case Target::Field::Seq: frame.seq = static_cast<std::uint32_t>(std::llround(value)); break;
      case Target::Field::Time: frame.t_ms = static_cast<std::uint64_t>(std::llround(value)); break;
    }
  }
  for (std::size_t i = 0; i < kPressureChannels; ++i) {
    if (!mapped[i]) throw Error(ErrorCode::UnmappedChannel, std::to_string(i));
  }
  return frame;
}

MappingSpec mapping_from_json(const nlohmann::json& doc) {
  MappingSpec spec;
  try {
    spec.source_model_id = doc.at("source_model_id").get<std::string>();
    for (const auto& ch : doc.at("channels")) {
      spec.channels.push_back({ch.at("source").get<std::string>(), ch.at("target").get<std::string>(),
                               ch.value("scale", 1.0), ch.value("offset", 0.0)});
    }
    if (doc.contains("layout")) spec.layout = layout_from_json(doc.at("layout"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidMapping, e.what());
  }
  spec.validate();
  return spec;
}

nlohmann::json mapping_to_json(const MappingSpec& spec) {
  nlohmann::json channels = nlohmann::json::array();
  for (const auto& ch : spec.channels) {
    channels.push_back(
        {{"source", ch.source}, {"target", ch.target}, {"scale", ch.scale}, {"offset", ch.offset}});
  }
  return {{"source_model_id", spec.source_model_id},
          {"channels", channels},
          {"layout", layout_to_json(spec.layout)}};
}

MappingSpec load_mapping(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open mapping " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidMapping, e.what());
  }
  return mapping_from_json(doc);
}

}  // namespace gaitcloud::ingest
