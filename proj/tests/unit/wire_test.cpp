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

#include <gtest/gtest.h>

#include <cmath>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/batch.hpp"
#include "gaitcloud/ingest/crc16.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "support.hpp"

namespace gaitcloud::ingest {
namespace {

// Bit-at-a-time reference, independent of the table-driven implementation.
std::uint16_t crc_reference(std::span<const std::uint8_t> bytes) {
  std::uint16_t crc = 0xFFFF;
  for (auto b : bytes) {
    crc ^= static_cast<std::uint16_t>(b << 8);
    for (int i = 0; i < 8; ++i) {
      crc = (crc & 0x8000) ? static_cast<std::uint16_t>((crc << 1) ^ 0x1021)
                           : static_cast<std::uint16_t>(crc << 1);
    }
  }
  return crc;
}

ErrorCode code_of(std::span<const std::uint8_t> bytes) {
  try {
    parse_packet(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;  // parsed fine
}

TEST(Crc16, PublishedCheckValue) {
  EXPECT_EQ(crc16_ccitt_false(std::string_view("123456789")), 0x29B1);
}

TEST(Crc16, MatchesBitwiseReference) {
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    std::vector<std::uint8_t> bytes(rng.below(100));
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.below(256));
    EXPECT_EQ(crc16_ccitt_false(bytes), crc_reference(bytes));
  }
}

TEST(WirePacket, LayoutIsBigEndian) {
  SensorFrame f;
  f.foot = FootSide::Right;
  f.seq = 0x01020304;
  f.t_ms = 0x0A0B0C0D0E0F1011ULL;
  const auto p = serialize_packet(f);
  EXPECT_EQ(p[0], 0x53);
  EXPECT_EQ(p[1], 0x49);
  EXPECT_EQ(p[2], 1);
  EXPECT_EQ(p[3], 1);
  EXPECT_EQ(p[4], 0x01);
  EXPECT_EQ(p[7], 0x04);
  EXPECT_EQ(p[8], 0x0A);
  EXPECT_EQ(p[15], 0x11);
  const std::uint16_t crc = static_cast<std::uint16_t>((p[66] << 8) | p[67]);
  EXPECT_EQ(crc, crc_reference(std::span(p).first(66)));
}

TEST(WirePacket, AdcScales) {
  SensorFrame f;
  f.pressure[0] = 1200.0;
  f.accel[0] = -16.0 * 9.80665;
  f.gyro[1] = 1000.0;
  f.mag[2] = 50.0;
  const auto back = parse_packet(serialize_packet(f));
  EXPECT_DOUBLE_EQ(back.pressure[0], 65535 * (1200.0 / 65535.0));
  EXPECT_DOUBLE_EQ(back.accel[0], -32768 * (16.0 * 9.80665 / 32768.0));
  EXPECT_DOUBLE_EQ(back.gyro[1], 16384 * (2000.0 / 32768.0));
  EXPECT_DOUBLE_EQ(back.mag[2], 16384 * (100.0 / 32768.0));
}

TEST(WirePacket, RoundTripProperty) {
  Rng rng(11);
  const WireScales s;
  for (int n = 0; n < 100000; ++n) {
    const auto f = testing::random_frame(rng);
    const auto packet = serialize_packet(f);
    const auto back = parse_packet(packet);
    ASSERT_EQ(back.foot, f.foot);
    ASSERT_EQ(back.seq, f.seq);
    ASSERT_EQ(back.t_ms, f.t_ms);
    for (std::size_t i = 0; i < kPressureChannels; ++i) {
      ASSERT_LE(std::abs(back.pressure[i] - f.pressure[i]), s.pressure_kpa / 2 + 1e-9);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      ASSERT_LE(std::abs(back.accel[i] - f.accel[i]), s.accel_ms2 / 2 + 1e-9);
      ASSERT_LE(std::abs(back.gyro[i] - f.gyro[i]), s.gyro_dps / 2 + 1e-9);
      ASSERT_LE(std::abs(back.mag[i] - f.mag[i]), s.mag_ut / 2 + 1e-9);
    }
    // Quantized frames are a fixed point.
    ASSERT_EQ(serialize_packet(back), packet);
  }
}

TEST(WirePacket, EverySingleByteCorruptionIsRejected) {
  Rng rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto packet = serialize_packet(testing::random_frame(rng));
    for (std::size_t pos = 0; pos < kPacketSize; ++pos) {
      for (int x = 1; x < 256; ++x) {
        auto bad = packet;
        bad[pos] ^= static_cast<std::uint8_t>(x);
        ASSERT_EQ(code_of(bad), ErrorCode::CrcMismatch) << "pos " << pos << " xor " << x;
      }
    }
  }
}

TEST(WirePacket, NamesEachFailingCheck) {
  const auto packet = serialize_packet(SensorFrame{});
  EXPECT_EQ(code_of(std::span(packet).first(67)), ErrorCode::BadLength);
  std::vector<std::uint8_t> longer(packet.begin(), packet.end());
  longer.push_back(0);
  EXPECT_EQ(code_of(longer), ErrorCode::BadLength);

  auto resign = [](Packet p) {
    const auto crc = crc_reference(std::span(p).first(66));
    p[66] = static_cast<std::uint8_t>(crc >> 8);
    p[67] = static_cast<std::uint8_t>(crc);
    return p;
  };
  auto magic = packet;
  magic[0] = 'X';
  EXPECT_EQ(code_of(resign(magic)), ErrorCode::BadMagic);
  auto version = packet;
  version[2] = 2;
  EXPECT_EQ(code_of(resign(version)), ErrorCode::BadVersion);
}

TEST(WirePacket, QuantizationSaturates) {
  SensorFrame f;
  f.pressure[0] = -20.0;
  f.pressure[1] = 5000.0;
  f.gyro[0] = 1e6;
  const auto back = parse_packet(serialize_packet(f));
  EXPECT_EQ(back.pressure[0], 0.0);
  EXPECT_DOUBLE_EQ(back.pressure[1], 1200.0);
  EXPECT_DOUBLE_EQ(back.gyro[0], 32767 * (2000.0 / 32768.0));
}

TEST(StreamDecoder, SplitsArbitraryChunks) {
  Rng rng(9);
  std::vector<SensorFrame> frames;
  std::vector<std::uint8_t> bytes;
  for (int i = 0; i < 20; ++i) {
    frames.push_back(parse_packet(serialize_packet(testing::random_frame(rng))));
    const auto item = frame_for_stream(serialize_packet(frames.back()));
    bytes.insert(bytes.end(), item.begin(), item.end());
  }
  bytes.push_back(0);
  bytes.push_back(0);

  StreamDecoder d;
  std::vector<SensorFrame> got;
  int ends = 0;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const auto n = std::min<std::size_t>(bytes.size() - pos, 1 + rng.below(90));
    d.feed(std::span(bytes).subspan(pos, n));
    pos += n;
    while (auto item = d.next()) {
      if (item->end_of_batch) {
        ++ends;
      } else {
        got.push_back(parse_packet(item->payload));
      }
    }
  }
  EXPECT_EQ(got, frames);
  EXPECT_EQ(ends, 1);
  EXPECT_EQ(d.buffered(), 0u);
}

TEST(StreamDecoder, RejectsBadLengthPrefix) {
  StreamDecoder d;
  const std::uint8_t bad[] = {0, 67};
  d.feed(bad);
  EXPECT_THROW(d.next(), Error);
}

TEST(BlobFormat, ConcatenatedPacketsRoundTrip) {
  Rng rng(2);
  std::vector<SensorFrame> frames;
  for (int i = 0; i < 50; ++i) frames.push_back(parse_packet(serialize_packet(testing::random_frame(rng))));
  EXPECT_EQ(parse_frames(serialize_frames(frames)), frames);
  auto bytes = serialize_frames(frames);
  bytes.pop_back();
  EXPECT_THROW(parse_frames(bytes), Error);
}

TEST(JsonBatch, RoundTripAndErrors) {
  Rng rng(4);
  std::vector<SensorFrame> frames;
  for (int i = 0; i < 10; ++i) frames.push_back(testing::random_frame(rng));
  const auto doc = frames_to_json(frames);
  ASSERT_TRUE(doc.is_array());
  EXPECT_EQ(frames_from_json(doc), frames);

  auto numeric_foot = doc;
  numeric_foot[0]["foot"] = 1;
  EXPECT_EQ(frames_from_json(numeric_foot)[0].foot, FootSide::Right);

  auto short_pressure = doc;
  short_pressure[3]["pressure"].erase(0);
  try {
    frames_from_json(short_pressure);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadRequest);
    EXPECT_NE(e.detail().find("frame 3"), std::string::npos);
  }
  EXPECT_THROW(frames_from_json(nlohmann::json::object()), Error);
}

}  // namespace
}  // namespace gaitcloud::ingest
