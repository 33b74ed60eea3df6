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

#include "gaitcloud/ingest/batch.hpp"

#include <string>

#include "gaitcloud/error.hpp"

namespace gaitcloud::ingest {
namespace {

template <std::size_t N>
void read_array(const nlohmann::json& obj, const char* key, std::array<double, N>& out) {
  const auto& arr = obj.at(key);
  if (!arr.is_array() || arr.size() != N) {
    throw Error(ErrorCode::BadRequest,
                std::string(key) + " must hold " + std::to_string(N) + " numbers");
  }
  for (std::size_t i = 0; i < N; ++i) out[i] = arr[i].get<double>();
}

}  // namespace

nlohmann::json frame_to_json(const SensorFrame& frame) {
  return {
      {"foot", std::string(to_string(frame.foot))},
      {"seq", frame.seq},
      {"t_ms", frame.t_ms},
      {"pressure", frame.pressure},
      {"accel", frame.accel},
      {"gyro", frame.gyro},
      {"mag", frame.mag},
  };
}

SensorFrame frame_from_json(const nlohmann::json& obj) {
  if (!obj.is_object()) throw Error(ErrorCode::BadRequest, "frame must be an object");
  SensorFrame frame;
  try {
    const auto& foot = obj.at("foot");
    if (foot.is_number_integer()) {
      const auto v = foot.get<int>();
      if (v != 0 && v != 1) throw Error(ErrorCode::BadRequest, "foot must be 0 or 1");
      frame.foot = static_cast<FootSide>(v);
    } else {
      frame.foot = foot_from_string(foot.get<std::string>());
    }
    frame.seq = obj.at("seq").get<std::uint32_t>();
    frame.t_ms = obj.at("t_ms").get<std::uint64_t>();
    read_array(obj, "pressure", frame.pressure);
    read_array(obj, "accel", frame.accel);
    read_array(obj, "gyro", frame.gyro);
    read_array(obj, "mag", frame.mag);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadRequest, e.what());
  }
  return frame;
}

nlohmann::json frames_to_json(const std::vector<SensorFrame>& frames) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& f : frames) out.push_back(frame_to_json(f));
  return out;
}

std::vector<SensorFrame> frames_from_json(const nlohmann::json& batch) {
  if (!batch.is_array()) throw Error(ErrorCode::BadRequest, "batch must be a JSON array");
  std::vector<SensorFrame> frames;
  frames.reserve(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    try {
      frames.push_back(frame_from_json(batch[i]));
    } catch (const Error& e) {
      throw Error(ErrorCode::BadRequest, "frame " + std::to_string(i) + ": " + e.detail());
    }
  }
  return frames;
}

}  // namespace gaitcloud::ingest
