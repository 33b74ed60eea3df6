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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaitcloud/core/types.hpp"

namespace gaitcloud::ingest {

// Packet layout (big-endian):
//   0  magic "SI" (0x5349)      2  version (1)      3  foot (0 = L, 1 = R)
//   4  seq u32                  8  t_ms u64
//   16 pressure 16 x u16        48 accel 3 x i16    54 gyro 3 x i16
//   60 mag 3 x i16              66 crc16 over bytes [0, 66)
inline constexpr std::size_t kPacketSize = 68;
inline constexpr std::uint16_t kPacketMagic = 0x5349;
inline constexpr std::uint8_t kPacketVersion = 1;

using Packet = std::array<std::uint8_t, kPacketSize>;

// ADC count -> physical unit factors.
struct WireScales {
  double pressure_kpa = 1200.0 / 65535.0;
  double accel_ms2 = 16.0 * 9.80665 / 32768.0;
  double gyro_dps = 2000.0 / 32768.0;
  double mag_ut = 100.0 / 32768.0;
};

// Quantizes to ADC counts (round to nearest, saturating).
Packet serialize_packet(const SensorFrame& frame, const WireScales& scales = {});

// Checks, in order: length, CRC, magic, version. Throws BadLength,
// CrcMismatch, BadMagic or BadVersion.
SensorFrame parse_packet(std::span<const std::uint8_t> bytes, const WireScales& scales = {});

// TCP framing: [u16 big-endian length][packet]. Length is always 68 for a
// packet; a zero length marks end-of-batch.
std::array<std::uint8_t, 2 + kPacketSize> frame_for_stream(const Packet& packet);

// Incremental decoder for the TCP framing.
class StreamDecoder {
 public:
  struct Item {
    bool end_of_batch = false;
    std::vector<std::uint8_t> payload;
  };

  void feed(std::span<const std::uint8_t> bytes);
  // Next complete item, if buffered.
  std::optional<Item> next();
  std::size_t buffered() const { return buffer_.size() - offset_; }

 private:
  std::vector<std::uint8_t> buffer_;
  std::size_t offset_ = 0;
};

// Concatenated packets (the blob format); throws on any malformed packet.
std::vector<std::uint8_t> serialize_frames(std::span<const SensorFrame> frames,
                                           const WireScales& scales = {});
std::vector<SensorFrame> parse_frames(std::span<const std::uint8_t> bytes,
                                      const WireScales& scales = {});

}  // namespace gaitcloud::ingest
