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

#include "gaitcloud/service/http_api.hpp"

#include <charconv>

#include "gaitcloud/ingest/batch.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "gaitcloud/service/util.hpp"
#include "httplib.h"

namespace gaitcloud::service {
namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

std::string bearer_token(const httplib::Request& req) {
  const auto header = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (header.size() <= kPrefix.size() || header.compare(0, kPrefix.size(), kPrefix) != 0) {
    throw Error(ErrorCode::Unauthorized, "missing bearer token");
  }
  return header.substr(kPrefix.size());
}

json parse_body(const httplib::Request& req) {
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded()) throw Error(ErrorCode::BadRequest, "request body is not valid JSON");
  return body;
}

std::string required_string(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body.at(key).is_string()) {
    throw Error(ErrorCode::BadRequest, std::string("missing string field \"") + key + "\"");
  }
  return body.at(key).get<std::string>();
}

std::optional<std::string> optional_string(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || body.at(key).is_null()) return std::nullopt;
  if (!body.at(key).is_string()) {
    throw Error(ErrorCode::BadRequest, std::string("field \"") + key + "\" must be a string");
  }
  return body.at(key).get<std::string>();
}

std::optional<std::string> query(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return std::nullopt;
  auto v = req.get_param_value(key);
  if (v.empty()) return std::nullopt;
  return v;
}

std::size_t parse_index(std::string_view text) {
  std::size_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw Error(ErrorCode::BadRequest, "not a non-negative integer: " + std::string(text));
  }
  return v;
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    out.push_back(parse_index(std::string_view(text).substr(start, end - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::BadRequest:
    case ErrorCode::MissingField:
    case ErrorCode::BadMagic:
    case ErrorCode::BadVersion:
    case ErrorCode::BadLength:
    case ErrorCode::CrcMismatch:
      return 400;
    case ErrorCode::Unauthorized:
    case ErrorCode::InvalidCredentials:
    case ErrorCode::AuthFailed:
      return 401;
    case ErrorCode::Forbidden:
      return 403;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownKind:
      return 404;
    case ErrorCode::SessionFinalized:
    case ErrorCode::AlreadyFinalized:
    case ErrorCode::NotReady:
    case ErrorCode::Conflict:
    case ErrorCode::InvalidTransition:
      return 409;
    case ErrorCode::PayloadTooLarge:
      return 413;
    case ErrorCode::RateLimited:
      return 429;
    case ErrorCode::Internal:
    case ErrorCode::ConnectionRefused:
      return 500;
    default:
      return 422;
  }
}

json error_envelope(ErrorCode code, const std::string& message) {
  return {{"error", {{"code", std::string(to_string(code))}, {"message", message}}}};
}

json session_to_json(const SessionInfo& info) {
  const auto& s = info.meta;
  json j = {{"session_id", s.session_id},
            {"patient_id", s.patient_id},
            {"pairing_id", s.pairing_id},
            {"type", std::string(s.type.name())},
            {"speed", nullptr},
            {"started_at", format_rfc3339(s.started_at_ms)},
            {"started_at_ms", s.started_at_ms},
            {"status", std::string(to_string(s.status))},
            {"sample_rate_hz", s.sample_rate_hz},
            {"stance_width_mm", s.stance_width_mm},
            {"frames", {{"left", info.frames_left}, {"right", info.frames_right}}}};
  if (s.type.speed()) j["speed"] = std::string(to_string(*s.type.speed()));
  return j;
}

json patient_to_json(const Patient& p) {
  return {{"patient_id", p.patient_id},
          {"display_name", p.display_name},
          {"clinician_id", p.clinician_id},
          {"created_at", format_rfc3339(p.created_at_ms)}};
}

json pairing_to_json(const Pairing& p) {
  return {{"pairing_id", p.pairing_id},
          {"patient_id", p.patient_id},
          {"insole_model_id", p.insole_model_id},
          {"active", p.active}};
}

json user_to_json(const UserAccount& u) {
  json j = {{"user_id", u.user_id},
            {"username", u.username},
            {"role", std::string(to_string(u.role))},
            {"created_at", format_rfc3339(u.created_at_ms)}};
  if (!u.patient_id.empty()) j["patient_id"] = u.patient_id;
  return j;
}

json job_to_json(const Job& j) {
  return {{"job_id", j.job_id},
          {"session_id", j.session_id},
          {"state", std::string(to_string(j.state))},
          {"attempts", j.attempts},
          {"stages_done", j.stages_done},
          {"error", j.error}};
}

HttpApi::HttpApi(Platform& platform)
    : platform_(platform), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpApi::serve() { return server_->listen_after_bind(); }

void HttpApi::stop() { server_->stop(); }

void HttpApi::wait_until_ready() const { server_->wait_until_ready(); }

void HttpApi::install_routes() {
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;
  using Authed = std::function<void(const Caller&, const httplib::Request&, httplib::Response&)>;

  // Uniform error handling for every route.
  auto guarded = [](Handler h) -> Handler {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const Error& e) {
        send_json(res, http_status(e.code()), error_envelope(e.code(), e.detail()));
      } catch (const json::exception& e) {
        send_json(res, 400, error_envelope(ErrorCode::BadRequest, e.what()));
      } catch (const std::exception& e) {
        send_json(res, 500, error_envelope(ErrorCode::Internal, e.what()));
      }
    };
  };
  auto authed = [this, guarded](Authed h) -> Handler {
    return guarded([this, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      const Caller caller = platform_.authenticate(bearer_token(req));
      h(caller, req, res);
    });
  };
  const std::string base = kApiBase;
  auto& s = *server_;

  s.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  }));
  s.Get(base + "/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  }));

  s.Post(base + "/auth/token", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto body = parse_body(req);
    const auto token =
        platform_.issue_token(required_string(body, "username"), required_string(body, "credential"));
    send_json(res, 200,
              {{"token", token.token},
               {"token_type", "Bearer"},
               {"expires_at", format_rfc3339(token.expires_at_ms)}});
  }));

  s.Post(base + "/users", authed([this](const Caller& c, const httplib::Request& req,
                                        httplib::Response& res) {
    const auto body = parse_body(req);
    const auto user = platform_.create_user(
        c, required_string(body, "username"), required_string(body, "credential"),
        role_from_string(required_string(body, "role")),
        optional_string(body, "patient_id").value_or(""));
    send_json(res, 201, user_to_json(user));
  }));

  s.Post(base + "/patients", authed([this](const Caller& c, const httplib::Request& req,
                                           httplib::Response& res) {
    const auto body = parse_body(req);
    const auto p = platform_.create_patient(c, required_string(body, "display_name"),
                                            optional_string(body, "clinician_id").value_or(""));
    send_json(res, 201, patient_to_json(p));
  }));
  s.Get(base + "/patients", authed([this](const Caller& c, const httplib::Request&,
                                          httplib::Response& res) {
    json out = json::array();
    for (const auto& p : platform_.list_patients(c)) out.push_back(patient_to_json(p));
    send_json(res, 200, {{"patients", out}});
  }));

  s.Post(base + "/pairings", authed([this](const Caller& c, const httplib::Request& req,
                                           httplib::Response& res) {
    const auto body = parse_body(req);
    const auto p = platform_.create_pairing(c, required_string(body, "patient_id"),
                                            required_string(body, "insole_model_id"));
    send_json(res, 201, pairing_to_json(p));
  }));
  s.Get(base + "/pairings", authed([this](const Caller& c, const httplib::Request& req,
                                          httplib::Response& res) {
    json out = json::array();
    for (const auto& p : platform_.list_pairings(c, query(req, "patient"))) {
      out.push_back(pairing_to_json(p));
    }
    send_json(res, 200, {{"pairings", out}});
  }));
  s.Post(base + "/pairings/:id/deactivate",
         authed([this](const Caller& c, const httplib::Request& req, httplib::Response& res) {
           const auto p = platform_.set_pairing_active(c, req.path_params.at("id"), false);
           send_json(res, 200, pairing_to_json(p));
         }));

  s.Post(base + "/sessions", authed([this](const Caller& c, const httplib::Request& req,
                                           httplib::Response& res) {
    const auto body = parse_body(req);
    CreateSessionRequest r;
    r.patient_id = required_string(body, "patient_id");
    r.pairing_id = required_string(body, "pairing_id");
    const auto speed = optional_string(body, "speed");
    r.type = SessionType::parse(required_string(body, "type"),
                                speed ? std::optional<std::string_view>(*speed) : std::nullopt);
    if (body.contains("stance_width_mm")) r.stance_width_mm = body.at("stance_width_mm").get<double>();
    if (auto started = optional_string(body, "started_at")) r.started_at_ms = parse_rfc3339(*started);
    send_json(res, 201, session_to_json(platform_.create_session(c, r)));
  }));
  s.Get(base + "/sessions", authed([this](const Caller& c, const httplib::Request& req,
                                          httplib::Response& res) {
    std::optional<std::int64_t> from;
    std::optional<std::int64_t> to;
    if (auto v = query(req, "from")) from = parse_rfc3339(*v);
    if (auto v = query(req, "to")) to = parse_rfc3339(*v);
    std::size_t page = 1;
    if (auto v = query(req, "page")) page = parse_index(*v);
    const auto result = platform_.list_sessions(c, query(req, "patient"), from, to, page);
    json out = json::array();
    for (const auto& info : result.sessions) out.push_back(session_to_json(info));
    send_json(res, 200,
              {{"sessions", out},
               {"page", result.page},
               {"page_size", SessionPage::kPageSize},
               {"total", result.total}});
  }));
  s.Get(base + "/sessions/:id", authed([this](const Caller& c, const httplib::Request& req,
                                              httplib::Response& res) {
    send_json(res, 200, session_to_json(platform_.get_session(c, req.path_params.at("id"))));
  }));

  s.Post(base + "/sessions/:id/frames",
         authed([this](const Caller& c, const httplib::Request& req, httplib::Response& res) {
           std::vector<SensorFrame> frames;
           if (req.get_header_value("Content-Type") == "application/octet-stream") {
             frames = ingest::parse_frames(std::span(
                 reinterpret_cast<const std::uint8_t*>(req.body.data()), req.body.size()));
           } else {
             frames = ingest::frames_from_json(parse_body(req));
           }
           const auto accepted = platform_.ingest_batch(c, req.path_params.at("id"), frames);
           send_json(res, 200, {{"accepted", accepted}, {"received", frames.size()}});
         }));
  s.Post(base + "/sessions/:id/finalize",
         authed([this](const Caller& c, const httplib::Request& req, httplib::Response& res) {
           const auto r = platform_.finalize_session(c, req.path_params.at("id"));
           send_json(res, 202, {{"job_id", r.job_id}, {"session", session_to_json(r.session)}});
         }));

  s.Get(base + "/sessions/:id/reports/:kind",
        authed([this](const Caller& c, const httplib::Request& req, httplib::Response& res) {
          const auto kind = report_kind_from_string(req.path_params.at("kind"));
          std::optional<FootSide> foot;
          std::optional<std::vector<std::size_t>> sensors;
          if (kind == ReportKind::RawSensor) {
            if (auto v = query(req, "foot")) foot = foot_from_string(*v);
            if (auto v = query(req, "sensors")) sensors = parse_index_list(*v);
          }
          res.status = 200;
          res.set_content(platform_.get_report(c, req.path_params.at("id"), kind, foot, sensors),
                          "application/json");
        }));

  s.Get(base + "/jobs/:id", authed([this](const Caller& c, const httplib::Request& req,
                                          httplib::Response& res) {
    send_json(res, 200, job_to_json(platform_.get_job(c, req.path_params.at("id"))));
  }));

  // Unmatched paths under the API still answer with the envelope.
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      send_json(res, 404, error_envelope(ErrorCode::NotFound, "no such route"));
    }
  });
}

}  // namespace gaitcloud::service
