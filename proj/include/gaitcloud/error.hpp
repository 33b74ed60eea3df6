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

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gaitcloud {

// Every failure surfaced by the library. The service maps these onto HTTP
// status codes, so new codes need a mapping in service/http_api.cpp.
enum class ErrorCode {
  // ingestion
  BadMagic,
  BadVersion,
  BadLength,
  CrcMismatch,
  EmptyInput,
  NonFiniteData,
  MixedFeet,
  MissingField,
  UnmappedChannel,
  InvalidMapping,
  SessionFinalized,
  FootMismatch,
  // core
  InvalidLayout,
  InvalidTransition,
  // gait / balance
  DegenerateCycle,
  InsufficientData,
  NoCycles,
  EmptySession,
  NoData,
  InsufficientCycles,
  WrongSessionType,
  TooShort,
  // decision support
  TooFewCycles,
  MissingFeature,
  DegenerateDataset,
  SchemaViolation,
  UnsupportedVersion,
  LengthMismatch,
  // device sim
  InvalidParams,
  ConnectionRefused,
  AuthFailed,
  // platform service
  InvalidCredentials,
  RateLimited,
  Unauthorized,
  Forbidden,
  NotFound,
  UnknownPairing,
  AlreadyFinalized,
  NotReady,
  UnknownKind,
  PayloadTooLarge,
  BadRequest,
  Conflict,
  Internal,
};

std::string_view to_string(ErrorCode code);
// Inverse of to_string; nullopt for unknown names.
std::optional<ErrorCode> error_code_from_string(std::string_view text);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace gaitcloud
