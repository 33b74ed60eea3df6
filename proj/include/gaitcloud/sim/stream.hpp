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

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "gaitcloud/core/types.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "json.hpp"

namespace gaitcloud::sim {

enum class Pacing : std::uint8_t { Fast, Realtime };

struct StreamTarget {
  enum class Kind : std::uint8_t { Tcp, Http } kind = Kind::Http;
  std::string host = "127.0.0.1";
  int port = 0;
  std::string token;
  std::string session_id;
};

struct StreamOptions {
  Pacing pacing = Pacing::Fast;
  double loss_pct = 0.0;   // chance that a frame is lost on each transmission attempt
  double jitter_ms = 0.0;  // uniform extra delay before each batch
  std::size_t batch_frames = 200;
  int max_attempts = 20;  // per batch
  // Buffer mode keeps unsent batches while the server is unreachable and
  // reconnects until reconnect_deadline; otherwise an unreachable server
  // raises ConnectionRefused.
  bool buffer_mode = false;
  std::chrono::milliseconds reconnect_interval{200};
  std::chrono::milliseconds reconnect_deadline{30000};
  std::uint64_t rng_seed = 1;
};

struct StreamReport {
  std::size_t frames = 0;     // distinct frames handed to stream()
  std::size_t sent = 0;       // frame transmissions that left the client
  std::size_t lost = 0;       // simulated losses
  std::size_t acked = 0;      // frames the server confirmed as new
  std::size_t batches = 0;
  std::size_t retries = 0;     // batch re-sends after a nack
  std::size_t reconnects = 0;  // successful reconnects after a failure
};

// Both feet merged in timestamp order (left first on ties).
std::vector<SensorFrame> interleave(const std::vector<SensorFrame>& left,
                                    const std::vector<SensorFrame>& right);

// Sends frames in order. A batch counts as delivered once every frame in it
// has been acknowledged; the server dedups on (foot, seq), so re-sending a
// whole batch after a nack is safe. Throws ConnectionRefused, AuthFailed,
// or the server's error code for a rejected batch.
StreamReport stream(const std::vector<SensorFrame>& frames, const StreamTarget& target,
                    const StreamOptions& options = {});

// Ground-truth documents written next to generated recordings.
nlohmann::json walk_truth_json(const GaitGenParams& params, const GaitTruth& truth);
nlohmann::json balance_truth_json(const BalanceGenParams& params,
                                  const std::vector<CopTruth>& truth);

}  // namespace gaitcloud::sim
