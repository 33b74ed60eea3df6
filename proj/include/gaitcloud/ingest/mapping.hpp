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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "json.hpp"

namespace gaitcloud::ingest {

// Canonical targets: "pressure.0" .. "pressure.15", "accel.{x,y,z}",
// "gyro.{x,y,z}", "mag.{x,y,z}", "seq", "t_ms".
struct ChannelMapping {
  std::string source;
  std::string target;
  double scale = 1.0;
  double offset = 0.0;
};

// Describes how a third-party insole's records map onto SensorFrame.
struct MappingSpec {
  std::string source_model_id;
  std::vector<ChannelMapping> channels;
  SensorLayout layout = default_layout();

  // Throws UnmappedChannel (a pressure channel has no source) or
  // InvalidMapping (unknown target, duplicate target, zero/non-finite scale).
  void validate() const;

  // Sources named p0..p15, ax..az, gx..gz, mx..mz, seq, t_ms; scale 1, offset 0.
  static MappingSpec identity();
};

using ExternalRecord = std::map<std::string, double>;

// canonical = record[source] * scale + offset. Throws MissingField(name) and
// UnmappedChannel(index).
SensorFrame map_external(const ExternalRecord& record, const MappingSpec& spec, FootSide foot);

MappingSpec mapping_from_json(const nlohmann::json& doc);
nlohmann::json mapping_to_json(const MappingSpec& spec);
MappingSpec load_mapping(const std::filesystem::path& path);

}  // namespace gaitcloud::ingest
