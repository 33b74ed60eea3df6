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

#include "gaitcloud/error.hpp"

namespace gaitcloud {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::BadLength: return "BadLength";
    case ErrorCode::CrcMismatch: return "CrcMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteData: return "NonFiniteData";
    case ErrorCode::MixedFeet: return "MixedFeet";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnmappedChannel: return "UnmappedChannel";
    case ErrorCode::InvalidMapping: return "InvalidMapping";
    case ErrorCode::SessionFinalized: return "SessionFinalized";
    case ErrorCode::FootMismatch: return "FootMismatch";
    case ErrorCode::InvalidLayout: return "InvalidLayout";
    case ErrorCode::InvalidTransition: return "InvalidTransition";
    case ErrorCode::DegenerateCycle: return "DegenerateCycle";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::NoCycles: return "NoCycles";
    case ErrorCode::EmptySession: return "EmptySession";
    case ErrorCode::NoData: return "NoData";
    case ErrorCode::InsufficientCycles: return "InsufficientCycles";
    case ErrorCode::WrongSessionType: return "WrongSessionType";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooFewCycles: return "TooFewCycles";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::DegenerateDataset: return "DegenerateDataset";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ConnectionRefused: return "ConnectionRefused";
    case ErrorCode::AuthFailed: return "AuthFailed";
    case ErrorCode::InvalidCredentials: return "InvalidCredentials";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::Forbidden: return "Forbidden";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UnknownPairing: return "UnknownPairing";
    case ErrorCode::AlreadyFinalized: return "AlreadyFinalized";
    case ErrorCode::NotReady: return "NotReady";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::PayloadTooLarge: return "PayloadTooLarge";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::Conflict: return "Conflict";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view text) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::Internal); ++i) {
    const auto code = static_cast<ErrorCode>(i);
    if (to_string(code) == text) return code;
  }
  return std::nullopt;
}

}  // namespace gaitcloud
