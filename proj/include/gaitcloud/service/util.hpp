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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace gaitcloud::service {

// Milliseconds since the Unix epoch; injectable for tests.
using Clock = std::function<std::int64_t()>;
Clock system_clock();

// Idempotent; throws Internal if libsodium cannot initialize.
void ensure_sodium();

std::string random_hex(std::size_t bytes);
std::string new_uuid();  // RFC 4122 version 4
std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

// "2026-10-19T08:30:00.250Z". Millisecond precision, always UTC.
std::string format_rfc3339(std::int64_t ms);
// Accepts "Z" or a +hh:mm / -hh:mm offset and an optional fraction (digits
// beyond milliseconds are truncated). Throws BadRequest.
std::int64_t parse_rfc3339(std::string_view text);

}  // namespace gaitcloud::service
