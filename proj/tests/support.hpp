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

// Shared test helpers: hand-rolled random generators and scratch dirs.

#include <filesystem>
#include <string>
#include <vector>

#include "gaitcloud/core/types.hpp"
#include "gaitcloud/ingest/curate.hpp"
#include "gaitcloud/random.hpp"
#include "gaitcloud/service/util.hpp"

namespace gaitcloud::testing {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Values stay inside the wire format's representable range.
inline SensorFrame random_frame(Rng& rng, FootSide foot, std::uint32_t seq, std::uint64_t t_ms) {
  SensorFrame f;
  f.foot = foot;
  f.seq = seq;
  f.t_ms = t_ms;
  for (auto& p : f.pressure) p = uniform(rng, 0.0, 1199.0);
  for (auto& a : f.accel) a = uniform(rng, -150.0, 150.0);
  for (auto& g : f.gyro) g = uniform(rng, -1990.0, 1990.0);
  for (auto& m : f.mag) m = uniform(rng, -99.0, 99.0);
  return f;
}

inline SensorFrame random_frame(Rng& rng) {
  const auto foot = rng.below(2) == 0 ? FootSide::Left : FootSide::Right;
  return random_frame(rng, foot, static_cast<std::uint32_t>(rng.next_u64()),
                      rng.next_u64() >> 20);
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() / ("gaitcloud-test-" + service::random_hex(8));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Session curated without baseline removal, so synthetic pressures survive
// unchanged.
inline Session curated_session(const std::vector<SensorFrame>& left,
                               const std::vector<SensorFrame>& right, SessionType type,
                               bool subtract_baseline = true) {
  Session s;
  s.type = type;
  ingest::CurateOptions opts;
  opts.subtract_baseline = subtract_baseline;
  if (!left.empty()) s.left = ingest::curate(left, opts);
  if (!right.empty()) s.right = ingest::curate(right, opts);
  return s;
}

inline std::filesystem::path source_dir() { return GAITCLOUD_SOURCE_DIR; }

}  // namespace gaitcloud::testing
