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

#include "gaitcloud/service/auth.hpp"

#include <sodium.h>

#include "gaitcloud/error.hpp"

namespace gaitcloud::service {

std::string hash_credential(std::string_view credential, const PasswordPolicy& policy) {
  ensure_sodium();
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str_alg(out, credential.data(), credential.size(), policy.opslimit,
                            policy.memlimit, crypto_pwhash_ALG_ARGON2ID13) != 0) {
    throw Error(ErrorCode::Internal, "credential hashing failed");
  }
  return out;
}

bool verify_credential(std::string_view encoded_hash, std::string_view credential) {
  ensure_sodium();
  const std::string h(encoded_hash);
  return crypto_pwhash_str_verify(h.c_str(), credential.data(), credential.size()) == 0;
}

Authenticator::Authenticator(Clock clock, AuthConfig config)
    : clock_(std::move(clock)), config_(config) {
  dummy_hash_ = hash_credential(random_hex(16), config_.policy);
}

std::string Authenticator::hash(std::string_view credential) const {
  return hash_credential(credential, config_.policy);
}

bool Authenticator::throttled(const std::string& username, std::int64_t now) {
  auto& q = failures_[username];
  while (!q.empty() && q.front() <= now - config_.failure_window_ms) q.pop_front();
  return static_cast<int>(q.size()) >= config_.max_failures;
}

AuthToken Authenticator::issue_token(const UserAccount* user, std::string_view username,
                                     std::string_view credential) {
  const std::string name(username);
  {
    std::lock_guard lock(mutex_);
    if (throttled(name, clock_())) {
      throw Error(ErrorCode::RateLimited, "too many failed attempts, retry later");
    }
  }
  const bool ok = user ? verify_credential(user->credential_hash, credential)
                       : (verify_credential(dummy_hash_, credential), false);
  std::lock_guard lock(mutex_);
  const auto now = clock_();
  if (!ok) {
    failures_[name].push_back(now);
    throw Error(ErrorCode::InvalidCredentials, "invalid username or credential");
  }
  failures_.erase(name);
  AuthToken t;
  t.token = random_hex(32);
  t.user_id = user->user_id;
  t.expires_at_ms = now + config_.token_ttl_ms;
  t.scopes = {std::string(to_string(user->role))};
  tokens_[t.token] = t;
  return t;
}

AuthToken Authenticator::authenticate(std::string_view token) {
  std::lock_guard lock(mutex_);
  auto it = tokens_.find(std::string(token));
  if (it == tokens_.end()) throw Error(ErrorCode::Unauthorized, "missing or unknown token");
  if (it->second.expires_at_ms <= clock_()) {
    tokens_.erase(it);
    throw Error(ErrorCode::Unauthorized, "token expired");
  }
  return it->second;
}

void Authenticator::revoke(std::string_view token) {
  std::lock_guard lock(mutex_);
  tokens_.erase(std::string(token));
}

}  // namespace gaitcloud::service
