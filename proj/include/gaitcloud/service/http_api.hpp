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

#include <memory>
#include <string>

#include "gaitcloud/error.hpp"
#include "gaitcloud/service/platform.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace gaitcloud::service {

inline constexpr const char* kApiBase = "/api/v1";

int http_status(ErrorCode code);
nlohmann::json error_envelope(ErrorCode code, const std::string& message);

nlohmann::json session_to_json(const SessionInfo& info);
nlohmann::json patient_to_json(const Patient& patient);
nlohmann::json pairing_to_json(const Pairing& pairing);
nlohmann::json user_to_json(const UserAccount& user);
nlohmann::json job_to_json(const Job& job);

// REST front end over a Platform. Every route except POST /auth/token and
// GET /healthz requires "Authorization: Bearer <token>".
class HttpApi {
 public:
  explicit HttpApi(Platform& platform);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool serve();
  void stop();
  void wait_until_ready() const;

  httplib::Server& server() { return *server_; }

 private:
  void install_routes();

  Platform& platform_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace gaitcloud::service
