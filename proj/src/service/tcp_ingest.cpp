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

#include "gaitcloud/service/tcp_ingest.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <sstream>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/wire.hpp"

namespace gaitcloud::service {
namespace {

constexpr std::size_t kMaxHelloLine = 1024;

bool send_all(int fd, const std::string& text) {
  std::size_t off = 0;
  while (off < text.size()) {
    const auto n = ::send(fd, text.data() + off, text.size() - off, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

std::string err_line(ErrorCode code, const std::string& message) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  return "ERR " + std::string(to_string(code)) + " " + flat + "\n";
}

}  // namespace

TcpIngestServer::TcpIngestServer(Platform& platform) : platform_(platform) {}

TcpIngestServer::~TcpIngestServer() {
  stop();
  for (auto& t : threads_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int TcpIngestServer::bind(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const auto service = std::to_string(port);
  if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), service.c_str(), &hints, &res) != 0) {
    throw Error(ErrorCode::Internal, "cannot resolve " + host);
  }
  const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  const bool ok = fd >= 0 && ::bind(fd, res->ai_addr, res->ai_addrlen) == 0 && ::listen(fd, 64) == 0;
  ::freeaddrinfo(res);
  if (!ok) {
    const std::string why = std::strerror(errno);
    if (fd >= 0) ::close(fd);
    throw Error(ErrorCode::Internal, "tcp ingest bind failed: " + why);
  }
  sockaddr_in addr{};
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  listen_fd_ = fd;
  return ntohs(addr.sin_port);
}

void TcpIngestServer::serve() {
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;
    }
    std::lock_guard lock(mutex_);
    if (stopping_) {
      ::close(fd);
      break;
    }
    clients_.push_back(fd);
    threads_.emplace_back([this, fd] { handle(fd); });
  }
}

void TcpIngestServer::stop() {
  stopping_ = true;
  if (listen_fd_ >= 0) ::shutdown(listen_fd_, SHUT_RDWR);
  std::lock_guard lock(mutex_);
  for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
}

void TcpIngestServer::handle(int fd) {
  std::string line;
  ingest::StreamDecoder decoder;
  std::uint8_t buf[4096];
  bool hello_done = false;
  Caller caller;
  std::string session_id;
  std::vector<SensorFrame> batch;
  std::size_t received = 0;
  std::size_t rejected = 0;

  auto finish = [&] {
    ::shutdown(fd, SHUT_RDWR);
    std::lock_guard lock(mutex_);
    clients_.erase(std::remove(clients_.begin(), clients_.end(), fd), clients_.end());
    ::close(fd);
  };

  for (;;) {
    const auto n = ::recv(fd, buf, sizeof buf, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    std::span<const std::uint8_t> chunk(buf, static_cast<std::size_t>(n));
    if (!hello_done) {
      const auto nl = std::find(chunk.begin(), chunk.end(), std::uint8_t{'\n'});
      line.append(chunk.begin(), nl);
      if (nl == chunk.end()) {
        if (line.size() > kMaxHelloLine) break;
        continue;
      }
      chunk = chunk.subspan(static_cast<std::size_t>(nl - chunk.begin()) + 1);
      std::istringstream in(line);
      std::string verb;
      std::string token;
      in >> verb >> token >> session_id;
      try {
        if (verb != "SIHELLO" || token.empty() || session_id.empty()) {
          throw Error(ErrorCode::BadRequest, "expected SIHELLO <token> <session_id>");
        }
        caller = platform_.authenticate(token);
        platform_.get_session(caller, session_id);
      } catch (const Error& e) {
        send_all(fd, err_line(e.code(), e.detail()));
        break;
      }
      hello_done = true;
      if (!send_all(fd, "OK\n")) break;
    }
    decoder.feed(chunk);
    bool closing = false;
    for (;;) {
      std::optional<ingest::StreamDecoder::Item> item;
      try {
        item = decoder.next();
      } catch (const Error& e) {
        // Length prefix out of sync; nothing after it can be trusted.
        send_all(fd, err_line(e.code(), e.detail()));
        closing = true;
        break;
      }
      if (!item) break;
      if (!item->end_of_batch) {
        ++received;
        try {
          batch.push_back(ingest::parse_packet(item->payload));
        } catch (const Error&) {
          ++rejected;
        }
        continue;
      }
      try {
        const auto accepted = platform_.ingest_batch(caller, session_id, batch);
        closing = !send_all(fd, "ACK " + std::to_string(accepted) + " " + std::to_string(received) +
                                    " " + std::to_string(rejected) + "\n");
      } catch (const Error& e) {
        send_all(fd, err_line(e.code(), e.detail()));
        closing = true;
      }
      batch.clear();
      received = 0;
      rejected = 0;
      if (closing) break;
    }
    if (closing) break;
  }
  finish();
}

}  // namespace gaitcloud::service
