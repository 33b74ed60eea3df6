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
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gaitcloud/service/domain.hpp"
#include "gaitcloud/service/util.hpp"

namespace gaitcloud::service {

// Argon2id cost. The defaults are libsodium's "interactive" limits.
struct PasswordPolicy {
  unsigned long long opslimit = 2;
  std::size_t memlimit = 64ULL << 20;

  // Minimum cost; for tests only.
  static PasswordPolicy fast() { return {1, 8192}; }
};

std::string hash_credential(std::string_view credential, const PasswordPolicy& policy);
bool verify_credential(std::string_view encoded_hash, std::string_view credential);

struct AuthToken {
  std::string token;  // 256-bit random, hex
  std::string user_id;
  std::int64_t expires_at_ms = 0;
  std::vector<std::string> scopes;
};

struct AuthConfig {
  std::int64_t token_ttl_ms = 24LL * 3600 * 1000;
  int max_failures = 5;
  std::int64_t failure_window_ms = 60 * 1000;
  PasswordPolicy policy;
};

// Token issue/lookup and failed-login throttling. Tokens live in memory.
class Authenticator {
 public:
  Authenticator(Clock clock, AuthConfig config);

  std::string hash(std::string_view credential) const;

  // user is null when the username is unknown; a dummy hash is verified in
  // that case so both paths cost the same. Throws InvalidCredentials,
  // RateLimited.
  AuthToken issue_token(const UserAccount* user, std::string_view username,
                        std::string_view credential);

  // Throws Unauthorized for unknown or expired tokens.
  AuthToken authenticate(std::string_view token);
  void revoke(std::string_view token);

  std::int64_t now() const { return clock_(); }
  const AuthConfig& config() const { return config_; }

 private:
  bool throttled(const std::string& username, std::int64_t now);

  Clock clock_;
  AuthConfig config_;
  std::string dummy_hash_;
  std::mutex mutex_;
  std::unordered_map<std::string, AuthToken> tokens_;
  std::unordered_map<std::string, std::deque<std::int64_t>> failures_;
};

}  // namespace gaitcloud::service
