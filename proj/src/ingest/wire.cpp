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

#include "gaitcloud/ingest/wire.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/crc16.hpp"

namespace gaitcloud::ingest {
namespace {

class Writer {
 public:
  explicit Writer(Packet& out) : out_(out) {}
  void u8(std::uint8_t v) { out_[pos_++] = v; }
  void u16(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v));
  }
  void u32(std::uint32_t v) {
    u16(static_cast<std::uint16_t>(v >> 16));
    u16(static_cast<std::uint16_t>(v));
  }
  void u64(std::uint64_t v) {
    u32(static_cast<std::uint32_t>(v >> 32));
    u32(static_cast<std::uint32_t>(v));
  }
  void i16(std::int16_t v) { u16(static_cast<std::uint16_t>(v)); }
  std::size_t pos() const { return pos_; }

 private:
  Packet& out_;
  std::size_t pos_ = 0;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint8_t u8() { return in_[pos_++]; }
  std::uint16_t u16() {
    const auto hi = u8();
    return static_cast<std::uint16_t>((hi << 8) | u8());
  }
  std::uint32_t u32() {
    const std::uint32_t hi = u16();
    return (hi << 16) | u16();
  }
  std::uint64_t u64() {
    const std::uint64_t hi = u32();
    return (hi << 32) | u32();
  }
  std::int16_t i16() { return static_cast<std::int16_t>(u16()); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint16_t to_unsigned_counts(double value, double scale) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteData, "cannot quantize a non-finite pressure");
  }
  const double counts = std::round(value / scale);
  return static_cast<std::uint16_t>(std::clamp(counts, 0.0, 65535.0));
}

std::int16_t to_signed_counts(double value, double scale) {
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::NonFiniteData, "cannot quantize a non-finite IMU value");
  }
  const double counts = std::round(value / scale);
  return static_cast<std::int16_t>(std::clamp(counts, -32768.0, 32767.0));
}

}  // namespace

Packet serialize_packet(const SensorFrame& frame, const WireScales& scales) {
  Packet out{};
  Writer w(out);
  w.u16(kPacketMagic);
  w.u8(kPacketVersion);
  w.u8(static_cast<std::uint8_t>(frame.foot));
  w.u32(frame.seq);
  w.u64(frame.t_ms);
  for (double p : frame.pressure) w.u16(to_unsigned_counts(p, scales.pressure_kpa));
  for (double a : frame.accel) w.i16(to_signed_counts(a, scales.accel_ms2));
  for (double g : frame.gyro) w.i16(to_signed_counts(g, scales.gyro_dps));
  for (double m : frame.mag) w.i16(to_signed_counts(m, scales.mag_ut));
  w.u16(crc16_ccitt_false(std::span<const std::uint8_t>(out.data(), kPacketSize - 2)));
  return out;
}

SensorFrame parse_packet(std::span<const std::uint8_t> bytes, const WireScales& scales) {
  if (bytes.size() != kPacketSize) {
    throw Error(ErrorCode::BadLength,
                "packet is " + std::to_string(bytes.size()) + " bytes, expected 68");
  }
  const std::uint16_t stored =
      static_cast<std::uint16_t>((bytes[kPacketSize - 2] << 8) | bytes[kPacketSize - 1]);
  const std::uint16_t computed = crc16_ccitt_false(bytes.first(kPacketSize - 2));
  if (stored != computed) throw Error(ErrorCode::CrcMismatch, "frame check failed");

  Reader r(bytes);
  if (r.u16() != kPacketMagic) throw Error(ErrorCode::BadMagic, "magic is not 'SI'");
  const auto version = r.u8();
  if (version != kPacketVersion) {
    throw Error(ErrorCode::BadVersion, "unsupported version " + std::to_string(version));
  }
  const auto foot = r.u8();
  if (foot > 1) throw Error(ErrorCode::FootMismatch, "foot byte " + std::to_string(foot));

  SensorFrame frame;
  frame.foot = static_cast<FootSide>(foot);
  frame.seq = r.u32();
  frame.t_ms = r.u64();
  for (auto& p : frame.pressure) p = r.u16() * scales.pressure_kpa;
  for (auto& a : frame.accel) a = r.i16() * scales.accel_ms2;
  for (auto& g : frame.gyro) g = r.i16() * scales.gyro_dps;
  for (auto& m : frame.mag) m = r.i16() * scales.mag_ut;
  return frame;
}

std::array<std::uint8_t, 2 + kPacketSize> frame_for_stream(const Packet& packet) {
  std::array<std::uint8_t, 2 + kPacketSize> out{};
  out[0] = 0;
  out[1] = static_cast<std::uint8_t>(kPacketSize);
  std::copy(packet.begin(), packet.end(), out.begin() + 2);
  return out;
}

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
  if (offset_ > 0 && offset_ == buffer_.size()) {
    buffer_.clear();
    offset_ = 0;
  }
  buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
}

std::optional<StreamDecoder::Item> StreamDecoder::next() {
  if (buffered() < 2) return std::nullopt;
  const std::size_t len = (static_cast<std::size_t>(buffer_[offset_]) << 8) | buffer_[offset_ + 1];
  if (len != 0 && len != kPacketSize) {
    throw Error(ErrorCode::BadLength, "stream frame length " + std::to_string(len));
  }
  if (buffered() < 2 + len) return std::nullopt;
  Item item;
  item.end_of_batch = len == 0;
  item.payload.assign(buffer_.begin() + static_cast<std::ptrdiff_t>(offset_ + 2),
                      buffer_.begin() + static_cast<std::ptrdiff_t>(offset_ + 2 + len));
  offset_ += 2 + len;
  return item;
}

std::vector<std::uint8_t> serialize_frames(std::span<const SensorFrame> frames,
                                           const WireScales& scales) {
  std::vector<std::uint8_t> out;
  out.reserve(frames.size() * kPacketSize);
  for (const auto& f : frames) {
    const auto packet = serialize_packet(f, scales);
    out.insert(out.end(), packet.begin(), packet.end());
  }
  return out;
}

std::vector<SensorFrame> parse_frames(std::span<const std::uint8_t> bytes,
                                      const WireScales& scales) {
  if (bytes.size() % kPacketSize != 0) {
    throw Error(ErrorCode::BadLength, "blob is not a whole number of packets");
  }
  std::vector<SensorFrame> frames;
  frames.reserve(bytes.size() / kPacketSize);
  for (std::size_t off = 0; off < bytes.size(); off += kPacketSize) {
    frames.push_back(parse_packet(bytes.subspan(off, kPacketSize), scales));
  }
  return frames;
}

}  // namespace gaitcloud::ingest
