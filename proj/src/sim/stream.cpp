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

#include "gaitcloud/sim/stream.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <optional>
#include <sstream>
#include <thread>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/batch.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "gaitcloud/random.hpp"
#include "httplib.h"

namespace gaitcloud::sim {
namespace {

using nlohmann::json;
using SteadyClock = std::chrono::steady_clock;

struct Ack {
  std::size_t accepted = 0;
  std::size_t received = 0;
};

// Thrown for transport failures that buffer mode may ride out.
struct Unreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Error server_error(int status, const std::string& body) {
  auto j = json::parse(body, nullptr, false);
  if (!j.is_discarded() && j.contains("error")) {
    const auto code = error_code_from_string(j["error"].value("code", ""));
    const auto message = j["error"].value("message", "");
    if (code == ErrorCode::Unauthorized || code == ErrorCode::InvalidCredentials) {
      return Error(ErrorCode::AuthFailed, message);
    }
    if (code) return Error(*code, message);
  }
  if (status == 401) return Error(ErrorCode::AuthFailed, "server rejected the token");
  return Error(ErrorCode::Internal, "HTTP " + std::to_string(status) + ": " + body);
}

class Link {
 public:
  virtual ~Link() = default;
  virtual Ack send(const std::vector<SensorFrame>& frames) = 0;
};

class HttpLink : public Link {
 public:
  explicit HttpLink(const StreamTarget& t)
      : client_(t.host, t.port),
        path_("/api/v1/sessions/" + t.session_id + "/frames"),
        token_(t.token) {
    client_.set_connection_timeout(std::chrono::seconds(5));
    client_.set_read_timeout(std::chrono::seconds(60));
  }

  Ack send(const std::vector<SensorFrame>& frames) override {
    httplib::Headers headers{{"Authorization", "Bearer " + token_}};
    auto res = client_.Post(path_, headers, ingest::frames_to_json(frames).dump(),
                            "application/json");
    if (!res) throw Unreachable(httplib::to_string(res.error()));
    if (res->status != 200) throw server_error(res->status, res->body);
    const auto j = json::parse(res->body);
    return {j.at("accepted").get<std::size_t>(), j.at("received").get<std::size_t>()};
  }

 private:
  httplib::Client client_;
  std::string path_;
  std::string token_;
};

class TcpLink : public Link {
 public:
  explicit TcpLink(const StreamTarget& t) : target_(t) {}
  ~TcpLink() override { close_socket(); }

  Ack send(const std::vector<SensorFrame>& frames) override {
    if (fd_ < 0) open();
    std::vector<std::uint8_t> bytes;
    bytes.reserve(frames.size() * (2 + ingest::kPacketSize) + 2);
    for (const auto& f : frames) {
      const auto item = ingest::frame_for_stream(ingest::serialize_packet(f));
      bytes.insert(bytes.end(), item.begin(), item.end());
    }
    bytes.push_back(0);
    bytes.push_back(0);
    write_all(bytes.data(), bytes.size());
    const auto line = read_line();
    std::istringstream in(line);
    std::string verb;
    in >> verb;
    if (verb == "ACK") {
      Ack ack;
      in >> ack.accepted >> ack.received;
      return ack;
    }
    close_socket();
    throw line_error(line);
  }

 private:
  static Error line_error(const std::string& line) {
    std::istringstream in(line);
    std::string verb;
    std::string code;
    in >> verb >> code;
    std::string message;
    std::getline(in, message);
    if (!message.empty() && message.front() == ' ') message.erase(0, 1);
    const auto parsed = error_code_from_string(code);
    if (parsed == ErrorCode::Unauthorized) return Error(ErrorCode::AuthFailed, message);
    if (verb == "ERR" && parsed) return Error(*parsed, message);
    return Error(ErrorCode::Internal, "unexpected server line: " + line);
  }

  void open() {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    const auto port = std::to_string(target_.port);
    if (::getaddrinfo(target_.host.c_str(), port.c_str(), &hints, &res) != 0) {
      throw Unreachable("cannot resolve " + target_.host);
    }
    const int fd = ::socket(res->ai_family, res->ai_socktype, res->ai_protocol);
    const bool ok = fd >= 0 && ::connect(fd, res->ai_addr, res->ai_addrlen) == 0;
    ::freeaddrinfo(res);
    if (!ok) {
      if (fd >= 0) ::close(fd);
      throw Unreachable("connect to " + target_.host + ":" + port + " failed");
    }
    fd_ = fd;
    const auto hello = "SIHELLO " + target_.token + " " + target_.session_id + "\n";
    write_all(reinterpret_cast<const std::uint8_t*>(hello.data()), hello.size());
    const auto line = read_line();
    if (line != "OK") {
      close_socket();
      throw line_error(line);
    }
  }

  void write_all(const std::uint8_t* data, std::size_t size) {
    std::size_t off = 0;
    while (off < size) {
      const auto n = ::send(fd_, data + off, size - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        close_socket();
        throw Unreachable("connection lost while sending");
      }
      off += static_cast<std::size_t>(n);
    }
  }

  std::string read_line() {
    for (;;) {
      const auto nl = pending_.find('\n');
      if (nl != std::string::npos) {
        auto line = pending_.substr(0, nl);
        pending_.erase(0, nl + 1);
        return line;
      }
      char buf[256];
      const auto n = ::recv(fd_, buf, sizeof buf, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) {
        close_socket();
        throw Unreachable("connection closed by server");
      }
      pending_.append(buf, static_cast<std::size_t>(n));
    }
  }

  void close_socket() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
    pending_.clear();
  }

  StreamTarget target_;
  int fd_ = -1;
  std::string pending_;
};

}  // namespace

std::vector<SensorFrame> interleave(const std::vector<SensorFrame>& left,
                                    const std::vector<SensorFrame>& right) {
  std::vector<SensorFrame> out;
  out.reserve(left.size() + right.size());
  out.insert(out.end(), left.begin(), left.end());
  out.insert(out.end(), right.begin(), right.end());
  std::stable_sort(out.begin(), out.end(), [](const SensorFrame& a, const SensorFrame& b) {
    if (a.t_ms != b.t_ms) return a.t_ms < b.t_ms;
    return a.foot < b.foot;
  });
  return out;
}

StreamReport stream(const std::vector<SensorFrame>& frames, const StreamTarget& target,
                    const StreamOptions& options) {
  if (options.batch_frames == 0 || options.max_attempts <= 0 || options.loss_pct < 0.0 ||
      options.loss_pct >= 100.0 || options.jitter_ms < 0.0) {
    throw Error(ErrorCode::InvalidParams, "invalid stream options");
  }
  std::unique_ptr<Link> link;
  if (target.kind == StreamTarget::Kind::Http) {
    link = std::make_unique<HttpLink>(target);
  } else {
    link = std::make_unique<TcpLink>(target);
  }
  Rng rng(options.rng_seed);
  StreamReport report;
  report.frames = frames.size();
  const auto start = SteadyClock::now();
  const std::uint64_t t0 = frames.empty() ? 0 : frames.front().t_ms;

  for (std::size_t begin = 0; begin < frames.size(); begin += options.batch_frames) {
    const std::size_t end = std::min(frames.size(), begin + options.batch_frames);
    const std::vector<SensorFrame> batch(frames.begin() + static_cast<std::ptrdiff_t>(begin),
                                         frames.begin() + static_cast<std::ptrdiff_t>(end));
    ++report.batches;
    if (options.pacing == Pacing::Realtime) {
      std::this_thread::sleep_until(start + std::chrono::milliseconds(batch.back().t_ms - t0));
    }

    std::size_t confirmed = 0;
    std::optional<SteadyClock::time_point> outage;
    for (int attempt = 0;;) {
      if (options.jitter_ms > 0.0) {
        std::this_thread::sleep_for(
            std::chrono::duration<double, std::milli>(rng.uniform() * options.jitter_ms));
      }
      std::vector<SensorFrame> wire;
      wire.reserve(batch.size());
      for (const auto& f : batch) {
        if (options.loss_pct > 0.0 && rng.uniform() * 100.0 < options.loss_pct) {
          ++report.lost;
        } else {
          wire.push_back(f);
        }
      }
      Ack ack;
      try {
        ack = link->send(wire);
      } catch (const Unreachable& e) {
        const auto now = SteadyClock::now();
        if (!outage) outage = now;
        if (!options.buffer_mode || now - *outage > options.reconnect_deadline) {
          throw Error(ErrorCode::ConnectionRefused, e.what());
        }
        std::this_thread::sleep_for(options.reconnect_interval);
        continue;  // buffered batch is retried; not an attempt
      }
      if (outage) {
        ++report.reconnects;
        outage.reset();
      }
      report.sent += wire.size();
      report.acked += ack.accepted;
      confirmed += ack.accepted;
      // A loss-free attempt the server fully received proves delivery even
      // when an earlier, unacknowledged attempt already stored the frames.
      if (confirmed >= batch.size() || (wire.size() == batch.size() && ack.received == batch.size())) {
        break;
      }
      if (++attempt >= options.max_attempts) {
        throw Error(ErrorCode::ConnectionRefused,
                    "batch not acknowledged after " + std::to_string(attempt) + " attempts");
      }
      ++report.retries;
    }
  }
  return report;
}

nlohmann::json walk_truth_json(const GaitGenParams& p, const GaitTruth& truth) {
  json events = json::object();
  for (auto foot : kBothFeet) {
    json list = json::array();
    for (const auto& e : foot == FootSide::Left ? truth.left : truth.right) {
      list.push_back({{"kind", std::string(gait::to_string(e.kind))}, {"t_ms", e.t_ms}});
    }
    events[std::string(to_string(foot))] = std::move(list);
  }
  json cycles = json::array();
  for (const auto& c : truth.cycles) {
    json params = json::object();
    const auto values = c.parameters.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      params[std::string(gait::kParameterNames[i])] = values[i];
    }
    cycles.push_back({{"foot", std::string(to_string(c.foot))},
                      {"hs_ms", c.hs_ms},
                      {"next_hs_ms", c.next_hs_ms},
                      {"parameters", std::move(params)}});
  }
  json params = {{"cadence_steps_per_min", p.cadence_steps_per_min},
                 {"stance_fraction", p.stance_fraction},
                 {"right_stance_fraction", p.right_stance()},
                 {"step_time_asymmetry", p.step_time_asymmetry},
                 {"lateral_bias_mm", {p.lateral_bias_mm[0], p.lateral_bias_mm[1]}},
                 {"duration_s", p.duration_s},
                 {"rate_hz", p.rate_hz},
                 {"noise_sigma_kpa", p.noise_sigma_kpa},
                 {"heel_peak_kpa", p.heel_peak_kpa},
                 {"forefoot_peak_kpa", p.forefoot_peak_kpa},
                 {"rng_seed", p.rng_seed}};
  return {{"kind", "walk"}, {"params", std::move(params)}, {"events", std::move(events)},
          {"cycles", std::move(cycles)}};
}

nlohmann::json balance_truth_json(const BalanceGenParams& p, const std::vector<CopTruth>& truth) {
  json track = json::array();
  for (const auto& t : truth) {
    track.push_back({{"t_ms", t.t_ms},
                     {"sway_x_mm", t.sway_x_mm},
                     {"sway_y_mm", t.sway_y_mm},
                     {"left", {t.local[0].x, t.local[0].y}},
                     {"right", {t.local[1].x, t.local[1].y}}});
  }
  json params = {{"eyes_open_amplitude_mm", p.eyes_open_amplitude_mm},
                 {"eyes_closed_amplitude_mm", p.eyes_closed_amplitude_mm},
                 {"duration_s", p.duration_s},
                 {"eyes_open_s", p.eyes_open_s},
                 {"rate_hz", p.rate_hz},
                 {"time_constant_s", p.time_constant_s},
                 {"foot_load_kpa", p.foot_load_kpa},
                 {"rng_seed", p.rng_seed}};
  return {{"kind", "balance"}, {"params", std::move(params)}, {"cop", std::move(track)}};
}

}  // namespace gaitcloud::sim
