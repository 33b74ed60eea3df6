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

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "gaitcloud/ingest/batch.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "gaitcloud/service/http_api.hpp"
#include "gaitcloud/service/tcp_ingest.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "gaitcloud/sim/stream.hpp"
#include "httplib.h"
#include "support.hpp"

namespace gaitcloud::service {
namespace {

using nlohmann::json;
using namespace std::chrono_literals;

TEST(HttpStatus, MapsErrorCodes) {
  EXPECT_EQ(http_status(ErrorCode::BadRequest), 400);
  EXPECT_EQ(http_status(ErrorCode::CrcMismatch), 400);
  EXPECT_EQ(http_status(ErrorCode::Unauthorized), 401);
  EXPECT_EQ(http_status(ErrorCode::Forbidden), 403);
  EXPECT_EQ(http_status(ErrorCode::UnknownKind), 404);
  EXPECT_EQ(http_status(ErrorCode::NotReady), 409);
  EXPECT_EQ(http_status(ErrorCode::PayloadTooLarge), 413);
  EXPECT_EQ(http_status(ErrorCode::TooFewCycles), 422);
  EXPECT_EQ(http_status(ErrorCode::RateLimited), 429);
  EXPECT_EQ(http_status(ErrorCode::Internal), 500);
  const auto env = error_envelope(ErrorCode::NotFound, "gone");
  EXPECT_EQ(env.at("error").at("code"), "NotFound");
  EXPECT_EQ(env.at("error").at("message"), "gone");
}

// In-process platform with HTTP and TCP front ends on ephemeral ports.
class ApiTest : public ::testing::Test {
 protected:
  ApiTest() {
    PlatformConfig c;
    c.data_dir = dir_.path();
    c.models_dir = testing::source_dir() / "models";
    c.auth.policy = PasswordPolicy::fast();
    c.workers = 1;
    c.bootstrap_admin_credential = "root-pass";
    platform_ = std::make_unique<Platform>(c);
    http_ = std::make_unique<HttpApi>(*platform_);
    http_port_ = http_->bind("127.0.0.1", 0);
    http_thread_ = std::thread([this] { http_->serve(); });
    http_->wait_until_ready();
    tcp_ = std::make_unique<TcpIngestServer>(*platform_);
    tcp_port_ = tcp_->bind("127.0.0.1", 0);
    tcp_thread_ = std::thread([this] { tcp_->serve(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", http_port_);
    admin_ = token("admin", "root-pass");
  }

  ~ApiTest() override {
    tcp_->stop();
    http_->stop();
    tcp_thread_.join();
    http_thread_.join();
  }

  httplib::Headers auth(const std::string& tok) const {
    return {{"Authorization", "Bearer " + tok}};
  }

  std::string token(const std::string& user, const std::string& cred) {
    const auto r = client_->Post("/api/v1/auth/token",
                                 json{{"username", user}, {"credential", cred}}.dump(),
                                 "application/json");
    EXPECT_EQ(r->status, 200);
    return json::parse(r->body).at("token");
  }

  std::pair<int, json> post(const std::string& path, const json& body, const std::string& tok) {
    const auto r = client_->Post(path, auth(tok), body.dump(), "application/json");
    return {r->status, json::parse(r->body)};
  }

  std::pair<int, json> get(const std::string& path, const std::string& tok) {
    const auto r = client_->Get(path, auth(tok));
    return {r->status, json::parse(r->body)};
  }

  // Clinician, patient, pairing and an open walk session; returns {token, session id}.
  std::pair<std::string, std::string> open_session() {
    EXPECT_EQ(post("/api/v1/users",
                   {{"username", "dr-h"}, {"credential", "pw"}, {"role", "clinician"}}, admin_)
                  .first,
              201);
    const auto tok = token("dr-h", "pw");
    const auto patient = post("/api/v1/patients", {{"display_name", "P"}}, tok).second;
    const auto pairing = post("/api/v1/pairings",
                              {{"patient_id", patient.at("patient_id")}, {"insole_model_id", "i2"}},
                              tok)
                             .second;
    const auto [code, session] = post("/api/v1/sessions",
                                      {{"patient_id", patient.at("patient_id")},
                                       {"pairing_id", pairing.at("pairing_id")},
                                       {"type", "walk10m"},
                                       {"speed", "normal"},
                                       {"started_at", "2026-03-01T09:30:00Z"}},
                                      tok);
    EXPECT_EQ(code, 201);
    EXPECT_EQ(session.at("status"), "open");
    EXPECT_EQ(session.at("started_at"), "2026-03-01T09:30:00.000Z");
    return {tok, session.at("session_id")};
  }

  static std::vector<SensorFrame> frames(double seconds) {
    sim::GaitGenParams p;
    p.duration_s = seconds;
    const auto w = sim::generate_walk(p);
    return sim::interleave(w.left, w.right);
  }

  testing::TempDir dir_;
  std::unique_ptr<Platform> platform_;
  std::unique_ptr<HttpApi> http_;
  std::unique_ptr<TcpIngestServer> tcp_;
  std::thread http_thread_;
  std::thread tcp_thread_;
  int http_port_ = 0;
  int tcp_port_ = 0;
  std::unique_ptr<httplib::Client> client_;
  std::string admin_;
};

TEST_F(ApiTest, WalkSessionLifecycle) {
  const auto [tok, id] = open_session();
  const auto base = "/api/v1/sessions/" + id;
  const auto batch = frames(12.0);
  const auto [code, ack] = post(base + "/frames", ingest::frames_to_json(batch), tok);
  EXPECT_EQ(code, 200);
  EXPECT_EQ(ack.at("accepted"), batch.size());
  EXPECT_EQ(get(base + "/reports/raw", tok).first, 409);

  const auto [fcode, fin] = post(base + "/finalize", json::object(), tok);
  EXPECT_EQ(fcode, 202);
  EXPECT_EQ(fin.at("session").at("frames").at("left"), 1200);
  ASSERT_TRUE(platform_->wait_idle(30s));
  const auto job = get("/api/v1/jobs/" + fin.at("job_id").get<std::string>(), tok).second;
  EXPECT_EQ(job.at("state"), "done");

  const auto list = get("/api/v1/sessions?from=2026-03-01T00:00:00Z", tok).second;
  EXPECT_EQ(list.at("total"), 1);
  EXPECT_EQ(list.at("page_size"), 100);
  EXPECT_EQ(list.at("sessions")[0].at("status"), "analyzed");
  EXPECT_EQ(get("/api/v1/sessions?to=2026-02-01T00:00:00Z", tok).second.at("total"), 0);

  const auto raw = get(base + "/reports/raw?foot=left&sensors=0,15", tok);
  EXPECT_EQ(raw.first, 200);
  EXPECT_EQ(raw.second.at("feet").size(), 1u);
  EXPECT_EQ(raw.second.at("feet")[0].at("series").size(), 2u);
  EXPECT_EQ(get(base + "/reports/walking", tok).first, 200);
  EXPECT_EQ(get(base + "/reports/ai", tok).first, 200);
  EXPECT_EQ(get(base + "/reports/bogus", tok).first, 404);
}

TEST_F(ApiTest, ErrorEnvelopes) {
  const auto [tok, id] = open_session();
  const auto missing = get("/api/v1/sessions/nope", tok);
  EXPECT_EQ(missing.first, 404);
  EXPECT_EQ(missing.second.at("error").at("code"), "NotFound");
  const auto route = get("/api/v1/no/such/route", tok);
  EXPECT_EQ(route.first, 404);
  EXPECT_TRUE(route.second.contains("error"));
  const auto bad = client_->Post("/api/v1/patients", auth(tok), "{not json", "application/json");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(json::parse(bad->body).at("error").at("code"), "BadRequest");
  const auto noauth = client_->Get("/api/v1/sessions");
  EXPECT_EQ(noauth->status, 401);
  const auto field = post("/api/v1/patients", json::object(), tok);
  EXPECT_EQ(field.first, 400);
  EXPECT_EQ(post("/api/v1/users", {{"username", "x"}, {"credential", "y"}, {"role", "admin"}}, tok)
                .first,
            403);
}

TEST_F(ApiTest, OctetStreamUpload) {
  const auto [tok, id] = open_session();
  const auto batch = frames(1.0);
  const auto bytes = ingest::serialize_frames(batch);
  const std::string body(bytes.begin(), bytes.end());
  const auto path = "/api/v1/sessions/" + id + "/frames";
  auto r = client_->Post(path, auth(tok), body, "application/octet-stream");
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json::parse(r->body).at("accepted"), batch.size());
  auto corrupt = body;
  corrupt[10] ^= 0x01;
  r = client_->Post(path, auth(tok), corrupt, "application/octet-stream");
  EXPECT_EQ(r->status, 400);
  EXPECT_EQ(json::parse(r->body).at("error").at("code"), "CrcMismatch");
}

// Minimal blocking TCP client for the device protocol.
class Socket {
 public:
  explicit Socket(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<std::uint16_t>(port));
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    EXPECT_EQ(::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
  }
  ~Socket() { ::close(fd_); }
  void send(std::span<const std::uint8_t> bytes) {
    ASSERT_EQ(::send(fd_, bytes.data(), bytes.size(), MSG_NOSIGNAL),
              static_cast<ssize_t>(bytes.size()));
  }
  void send(const std::string& text) {
    send(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  }
  std::string line() {
    std::string out;
    char c;
    while (::recv(fd_, &c, 1, 0) == 1 && c != '\n') out += c;
    return out;
  }

 private:
  int fd_ = -1;
};

TEST_F(ApiTest, TcpHandshakeAndAck) {
  const auto [tok, id] = open_session();
  {
    Socket s(tcp_port_);
    s.send("SIHELLO badtoken " + id + "\n");
    EXPECT_EQ(s.line().rfind("ERR Unauthorized", 0), 0u);
  }
  Socket s(tcp_port_);
  s.send("SIHELLO " + tok + " " + id + "\n");
  EXPECT_EQ(s.line(), "OK");
  const auto batch = frames(0.5);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto packet = ingest::serialize_packet(batch[i]);
    if (i == 3) packet[20] ^= 0xFF;  // one corrupted packet is rejected, not fatal
    s.send(ingest::frame_for_stream(packet));
  }
  const std::uint8_t end[2] = {0, 0};
  s.send(end);
  EXPECT_EQ(s.line(), "ACK 99 100 1");
  // Resending the same batch is acknowledged but adds nothing.
  for (const auto& f : batch) s.send(ingest::frame_for_stream(ingest::serialize_packet(f)));
  s.send(end);
  EXPECT_EQ(s.line(), "ACK 1 100 0");
}

TEST_F(ApiTest, SimulatorStreamsWithLossOverBothTransports) {
  const auto [tok, id] = open_session();
  const auto batch = frames(6.0);
  sim::StreamOptions opts;
  opts.loss_pct = 20.0;
  opts.batch_frames = 100;
  sim::StreamTarget http{sim::StreamTarget::Kind::Http, "127.0.0.1", http_port_, tok, id};
  const auto a = sim::stream(std::vector(batch.begin(), batch.begin() + 600), http, opts);
  EXPECT_EQ(a.acked, 600u);
  EXPECT_GT(a.lost, 0u);
  EXPECT_GT(a.retries, 0u);
  sim::StreamTarget tcp{sim::StreamTarget::Kind::Tcp, "127.0.0.1", tcp_port_, tok, id};
  const auto b = sim::stream(std::vector(batch.begin() + 600, batch.end()), tcp, opts);
  EXPECT_EQ(b.acked, batch.size() - 600);
  const auto info = get("/api/v1/sessions/" + id, tok).second;
  EXPECT_EQ(info.at("frames").at("left"), 600);
  EXPECT_EQ(info.at("frames").at("right"), 600);
}

}  // namespace
}  // namespace gaitcloud::service
