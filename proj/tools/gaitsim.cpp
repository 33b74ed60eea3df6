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

// Synthetic insole pair: generates walk / balance / TUG recordings and emits
// them to a file, the TCP ingest port, or the HTTP batch endpoint.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "gaitcloud/sim/stream.hpp"
#include "httplib.h"
#include "json.hpp"

namespace {

using namespace gaitcloud;
using nlohmann::json;

struct HostPort {
  std::string host;
  int port = 0;
};

HostPort parse_host_port(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidParams, "expected host:port");
  return {text.substr(0, colon), std::stoi(text.substr(colon + 1))};
}

// Accepts "http://host:port[/...]".
HostPort parse_http_url(const std::string& url) {
  std::string rest = url;
  if (rest.rfind("http://", 0) == 0) rest = rest.substr(7);
  const auto slash = rest.find('/');
  if (slash != std::string::npos) rest = rest.substr(0, slash);
  if (rest.find(':') == std::string::npos) return {rest, 80};
  return parse_host_port(rest);
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Internal, "cannot write " + path);
}

void finalize(const HostPort& hp, const std::string& token, const std::string& session) {
  httplib::Client client(hp.host, hp.port);
  auto res = client.Post("/api/v1/sessions/" + session + "/finalize",
                         httplib::Headers{{"Authorization", "Bearer " + token}}, "", "application/json");
  if (!res) throw Error(ErrorCode::ConnectionRefused, httplib::to_string(res.error()));
  if (res->status != 202) {
    throw Error(ErrorCode::Internal, "finalize failed: HTTP " + std::to_string(res->status) + " " + res->body);
  }
  std::cout << res->body << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaitsim: synthetic smart-insole pair"};
  app.require_subcommand(1);

  sim::GaitGenParams gait;
  sim::BalanceGenParams balance;
  std::optional<double> turn_at;
  bool no_turn = false;
  double sit_to_stand = 2.0;
  std::optional<double> double_support;

  std::string emit;
  std::string tcp;
  std::string http;
  std::string token;
  std::string session;
  std::string truth_path;
  bool realtime = false;
  bool do_finalize = false;
  sim::StreamOptions stream_opts;
  int buffer_deadline_s = 30;

  auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--emit", emit, "write concatenated 68-byte wire packets to this file");
    cmd->add_option("--tcp", tcp, "stream to the TCP ingest listener (host:port)");
    cmd->add_option("--http", http, "stream JSON batches to this server (http://host:port)");
    cmd->add_option("--token", token, "bearer token for --tcp / --http")->envname("GAITCLOUD_TOKEN");
    cmd->add_option("--session", session, "target session id for --tcp / --http");
    cmd->add_option("--loss", stream_opts.loss_pct, "per-frame loss percentage")->check(CLI::Range(0.0, 99.0));
    cmd->add_option("--jitter", stream_opts.jitter_ms, "uniform per-batch delay (ms)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--batch", stream_opts.batch_frames, "frames per batch")->check(CLI::PositiveNumber);
    cmd->add_flag("--realtime", realtime, "pace batches at recording speed");
    cmd->add_flag("--buffer", stream_opts.buffer_mode, "hold data while the server is unreachable");
    cmd->add_option("--buffer-deadline", buffer_deadline_s, "seconds to keep retrying in buffer mode");
    cmd->add_flag("--finalize", do_finalize, "finalize the session after streaming (--http only)");
    cmd->add_option("--truth", truth_path, "write ground truth JSON here");
  };
  auto add_gait = [&](CLI::App* cmd) {
    cmd->add_option("--cadence", gait.cadence_steps_per_min, "steps per minute");
    cmd->add_option("--stance", gait.stance_fraction, "stance fraction of the stride");
    cmd->add_option("--right-stance", gait.right_stance_fraction, "right-foot stance fraction");
    cmd->add_option("--double-support", double_support, "must equal left + right stance - 1");
    cmd->add_option("--asym", gait.step_time_asymmetry, "step-time asymmetry");
    cmd->add_option("--noise", gait.noise_sigma_kpa, "pressure noise sigma (kPa)");
    cmd->add_option("--duration", gait.duration_s, "seconds");
    cmd->add_option("--rate", gait.rate_hz, "sample rate (Hz)");
    cmd->add_option("--seed", gait.rng_seed, "rng seed");
    cmd->add_option("--bias-left", gait.lateral_bias_mm[0], "lateral load bias, left (mm)");
    cmd->add_option("--bias-right", gait.lateral_bias_mm[1], "lateral load bias, right (mm)");
    cmd->add_option("--turn-at", turn_at, "start of the 180-degree turn (s); default mid-recording");
    cmd->add_flag("--no-turn", no_turn, "walk without a turn");
    add_output(cmd);
  };

  auto* walk = app.add_subcommand("walk", "10-meter walk with a turn");
  add_gait(walk);
  auto* tug = app.add_subcommand("tug", "timed up and go");
  add_gait(tug);
  tug->add_option("--sit-to-stand", sit_to_stand, "seconds of standing load before gait");
  auto* bal = app.add_subcommand("balance", "quiet standing, eyes open then closed");
  bal->add_option("--eo", balance.eyes_open_amplitude_mm, "eyes-open sway amplitude (mm)");
  bal->add_option("--ec", balance.eyes_closed_amplitude_mm, "eyes-closed sway amplitude (mm)");
  bal->add_option("--duration", balance.duration_s, "seconds");
  bal->add_option("--eyes-open", balance.eyes_open_s, "seconds before the eyes close");
  bal->add_option("--rate", balance.rate_hz, "sample rate (Hz)");
  bal->add_option("--seed", balance.rng_seed, "rng seed");
  add_output(bal);

  CLI11_PARSE(app, argc, argv);

  try {
    std::vector<SensorFrame> left;
    std::vector<SensorFrame> right;
    json truth;
    if (bal->parsed()) {
      auto g = sim::generate_balance(balance);
      truth = sim::balance_truth_json(balance, g.truth);
      left = std::move(g.left);
      right = std::move(g.right);
    } else {
      gait.double_support_fraction = double_support;
      if (tug->parsed()) gait.sit_to_stand_s = sit_to_stand;
      if (!no_turn) gait.turn_at_s = turn_at.value_or(gait.duration_s / 2.0);
      auto g = sim::generate_walk(gait);
      truth = sim::walk_truth_json(gait, g.truth);
      left = std::move(g.left);
      right = std::move(g.right);
    }
    const auto frames = sim::interleave(left, right);

    if (!truth_path.empty()) write_file(truth_path, truth.dump(1) + "\n");
    if (!emit.empty()) {
      const auto bytes = ingest::serialize_frames(frames);
      write_file(emit, std::string(bytes.begin(), bytes.end()));
    }
    json out = {{"frames", frames.size()}, {"left", left.size()}, {"right", right.size()}};
    if (!tcp.empty() || !http.empty()) {
      if (session.empty()) throw Error(ErrorCode::InvalidParams, "--session is required for streaming");
      sim::StreamTarget target;
      HostPort hp;
      if (!tcp.empty()) {
        hp = parse_host_port(tcp);
        target.kind = sim::StreamTarget::Kind::Tcp;
      } else {
        hp = parse_http_url(http);
        target.kind = sim::StreamTarget::Kind::Http;
      }
      target.host = hp.host;
      target.port = hp.port;
      target.token = token;
      target.session_id = session;
      stream_opts.pacing = realtime ? sim::Pacing::Realtime : sim::Pacing::Fast;
      stream_opts.reconnect_deadline = std::chrono::seconds(buffer_deadline_s);
      const auto r = sim::stream(frames, target, stream_opts);
      out["stream"] = {{"sent", r.sent},     {"lost", r.lost},         {"acked", r.acked},
                       {"batches", r.batches}, {"retries", r.retries}, {"reconnects", r.reconnects}};
      if (do_finalize) {
        if (http.empty()) throw Error(ErrorCode::InvalidParams, "--finalize needs --http");
        finalize(hp, token, session);
      }
    }
    std::cout << out.dump() << "\n";
  } catch (const Error& e) {
    std::cerr << "gaitsim: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidParams ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "gaitsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
