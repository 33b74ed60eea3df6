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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gaitcloud {

inline constexpr std::size_t kPressureChannels = 16;
inline constexpr double kPressureFullScaleKpa = 1200.0;
inline constexpr double kCanonicalRateHz = 100.0;

enum class FootSide : std::uint8_t { Left = 0, Right = 1 };

inline constexpr std::array<FootSide, 2> kBothFeet{FootSide::Left, FootSide::Right};

inline FootSide opposite(FootSide foot) {
  return foot == FootSide::Left ? FootSide::Right : FootSide::Left;
}
std::string_view to_string(FootSide foot);
FootSide foot_from_string(std::string_view text);

using Vec3 = std::array<double, 3>;

// One sample of one insole: pressures in kPa, accel in m/s^2, gyro in deg/s,
// mag in uT.
struct SensorFrame {
  FootSide foot = FootSide::Left;
  std::uint32_t seq = 0;
  std::uint64_t t_ms = 0;
  std::array<double, kPressureChannels> pressure{};
  Vec3 accel{};
  Vec3 gyro{};
  Vec3 mag{};

  bool operator==(const SensorFrame&) const = default;
};

enum class WalkSpeed : std::uint8_t { Slow, Normal, High };

std::string_view to_string(WalkSpeed speed);
WalkSpeed walk_speed_from_string(std::string_view text);

class SessionType {
 public:
  enum class Kind : std::uint8_t { FreeWalk, Walk10m, Tug, StandingBalance };

  static SessionType free_walk() { return SessionType(Kind::FreeWalk, std::nullopt); }
  static SessionType walk10m(WalkSpeed speed) { return SessionType(Kind::Walk10m, speed); }
  static SessionType tug() { return SessionType(Kind::Tug, std::nullopt); }
  static SessionType standing_balance() {
    return SessionType(Kind::StandingBalance, std::nullopt);
  }
  // "walk10m" requires a speed; every other kind rejects one.
  static SessionType parse(std::string_view kind, std::optional<std::string_view> speed);

  Kind kind() const { return kind_; }
  std::optional<WalkSpeed> speed() const { return speed_; }
  bool is_walking() const { return kind_ != Kind::StandingBalance; }
  std::string_view name() const;

  bool operator==(const SessionType&) const = default;

 private:
  SessionType(Kind kind, std::optional<WalkSpeed> speed) : kind_(kind), speed_(speed) {}

  Kind kind_;
  std::optional<WalkSpeed> speed_;
};

// A uniformly resampled run of frames from one foot.
struct CuratedSegment {
  FootSide foot = FootSide::Left;
  std::uint64_t t0_ms = 0;
  double rate_hz = kCanonicalRateHz;
  std::vector<SensorFrame> frames;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> gaps;
  std::size_t dropped_count = 0;

  bool operator==(const CuratedSegment&) const = default;
};

enum class SessionStatus : std::uint8_t { Open, Finalized, Analyzed };

std::string_view to_string(SessionStatus status);
SessionStatus session_status_from_string(std::string_view text);

struct Session {
  std::string session_id;
  std::string patient_id;
  std::string pairing_id;
  SessionType type = SessionType::free_walk();
  std::int64_t started_at_ms = 0;  // unix epoch
  double sample_rate_hz = kCanonicalRateHz;
  double stance_width_mm = 200.0;
  std::vector<CuratedSegment> left;
  std::vector<CuratedSegment> right;
  SessionStatus status = SessionStatus::Open;

  std::vector<CuratedSegment>& segments(FootSide foot) {
    return foot == FootSide::Left ? left : right;
  }
  const std::vector<CuratedSegment>& segments(FootSide foot) const {
    return foot == FootSide::Left ? left : right;
  }
  std::size_t frame_count(FootSide foot) const;
};

// Forward-only: Open -> Finalized -> Analyzed. Throws InvalidTransition.
void advance_status(Session& session, SessionStatus next);

// Body-frame separation of the feet when nothing else is configured.
double default_stance_width_mm(const SessionType& type);

struct Pairing {
  std::string pairing_id;
  std::string patient_id;
  std::string insole_model_id;
  bool active = true;
};

}  // namespace gaitcloud
