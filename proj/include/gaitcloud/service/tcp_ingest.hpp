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

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "gaitcloud/service/platform.hpp"

namespace gaitcloud::service {

// Device link. The client opens with one text line
//   SIHELLO <token> <session_id>\n
// and gets "OK\n" or "ERR <code> <message>\n" (then the socket closes).
// After that it sends [u16 length][68-byte packet] items; a zero length ends
// a batch, which is ingested and answered with
//   ACK <accepted> <received> <rejected>\n
// where rejected counts packets that failed wire validation. Errors while
// ingesting a batch are answered with an ERR line and the connection closes.
class TcpIngestServer {
 public:
  explicit TcpIngestServer(Platform& platform);
  ~TcpIngestServer();
  TcpIngestServer(const TcpIngestServer&) = delete;
  TcpIngestServer& operator=(const TcpIngestServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Internal.
  int bind(const std::string& host, int port);
  // Accept loop; returns after stop().
  void serve();
  void stop();

 private:
  void handle(int fd);

  Platform& platform_;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::mutex mutex_;
  std::vector<int> clients_;
  std::vector<std::thread> threads_;
};

}  // namespace gaitcloud::service
