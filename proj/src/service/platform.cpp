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

#include "gaitcloud/service/platform.hpp"

#include <algorithm>

#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/wire.hpp"

namespace gaitcloud::service {
namespace {

using nlohmann::json;

std::uint64_t frame_key(const SensorFrame& f) {
  return (static_cast<std::uint64_t>(f.foot) << 32) | f.seq;
}

json user_json(const UserAccount& u) {
  return {{"type", "user"},
          {"user_id", u.user_id},
          {"username", u.username},
          {"role", std::string(to_string(u.role))},
          {"credential_hash", u.credential_hash},
          {"created_at_ms", u.created_at_ms},
          {"patient_id", u.patient_id}};
}

json patient_json(const Patient& p) {
  return {{"type", "patient"},
          {"patient_id", p.patient_id},
          {"display_name", p.display_name},
          {"clinician_id", p.clinician_id},
          {"created_at_ms", p.created_at_ms}};
}

json pairing_json(const Pairing& p) {
  return {{"type", "pairing"},
          {"pairing_id", p.pairing_id},
          {"patient_id", p.patient_id},
          {"insole_model_id", p.insole_model_id},
          {"active", p.active}};
}

json session_json(const Session& s) {
  json j = {{"type", "session"},
            {"session_id", s.session_id},
            {"patient_id", s.patient_id},
            {"pairing_id", s.pairing_id},
            {"session_type", std::string(s.type.name())},
            {"started_at_ms", s.started_at_ms},
            {"sample_rate_hz", s.sample_rate_hz},
            {"stance_width_mm", s.stance_width_mm}};
  if (s.type.speed()) j["speed"] = std::string(to_string(*s.type.speed()));
  return j;
}

json job_json(const Job& j) {
  return {{"type", "job"},          {"job_id", j.job_id},
          {"session_id", j.session_id}, {"state", std::string(to_string(j.state))},
          {"attempts", j.attempts},  {"error", j.error}};
}

}  // namespace

Platform::Platform(PlatformConfig config, Clock clock)
    : config_(std::move(config)),
      clock_(std::move(clock)),
      store_(config_.data_dir),
      auth_(clock_, config_.auth),
      models_(load_models(config_.models_dir)) {
  replay();
  if (config_.bootstrap_admin_credential &&
      !user_by_name_.contains(config_.bootstrap_admin_username)) {
    UserAccount admin;
    admin.user_id = new_uuid();
    admin.username = config_.bootstrap_admin_username;
    admin.role = Role::Admin;
    admin.credential_hash = auth_.hash(*config_.bootstrap_admin_credential);
    admin.created_at_ms = clock_();
    persist(user_json(admin));
  }
  std::vector<std::string> pending;
  for (auto& [id, job] : jobs_) {
    if (job.state == JobState::Queued || job.state == JobState::Running) pending.push_back(id);
  }
  for (const auto& id : pending) enqueue(id);
  for (std::size_t i = 0; i < std::max<std::size_t>(1, config_.workers); ++i) {
    workers_.emplace_back([this] { worker_loop(); });
  }
}

Platform::~Platform() {
  {
    std::lock_guard lock(queue_mutex_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  for (auto& t : workers_) t.join();
}

// ---- persistence ----------------------------------------------------------

void Platform::replay() {
  for (const auto& record : store_.replay()) apply(record);
}

void Platform::persist(const json& record) {
  store_.append(record);
  apply(record);
}

void Platform::apply(const json& r) {
  const auto type = r.at("type").get<std::string>();
  std::unique_lock lock(mutex_);
  if (type == "user") {
    UserAccount u;
    u.user_id = r.at("user_id").get<std::string>();
    u.username = r.at("username").get<std::string>();
    u.role = role_from_string(r.at("role").get<std::string>());
    u.credential_hash = r.at("credential_hash").get<std::string>();
    u.created_at_ms = r.at("created_at_ms").get<std::int64_t>();
    u.patient_id = r.value("patient_id", "");
    user_by_name_[u.username] = u.user_id;
    users_[u.user_id] = std::move(u);
  } else if (type == "patient") {
    Patient p;
    p.patient_id = r.at("patient_id").get<std::string>();
    p.display_name = r.at("display_name").get<std::string>();
    p.clinician_id = r.at("clinician_id").get<std::string>();
    p.created_at_ms = r.at("created_at_ms").get<std::int64_t>();
    patients_[p.patient_id] = std::move(p);
  } else if (type == "pairing") {
    Pairing p;
    p.pairing_id = r.at("pairing_id").get<std::string>();
    p.patient_id = r.at("patient_id").get<std::string>();
    p.insole_model_id = r.at("insole_model_id").get<std::string>();
    p.active = r.at("active").get<bool>();
    pairings_[p.pairing_id] = std::move(p);
  } else if (type == "pairing_active") {
    pairings_.at(r.at("pairing_id").get<std::string>()).active = r.at("active").get<bool>();
  } else if (type == "session") {
    auto e = std::make_shared<SessionEntry>();
    auto& s = e->meta;
    s.session_id = r.at("session_id").get<std::string>();
    s.patient_id = r.at("patient_id").get<std::string>();
    s.pairing_id = r.at("pairing_id").get<std::string>();
    std::optional<std::string> speed;
    if (r.contains("speed")) speed = r.at("speed").get<std::string>();
    s.type = SessionType::parse(r.at("session_type").get<std::string>(), speed);
    s.started_at_ms = r.at("started_at_ms").get<std::int64_t>();
    s.sample_rate_hz = r.at("sample_rate_hz").get<double>();
    s.stance_width_mm = r.at("stance_width_mm").get<double>();
    sessions_[s.session_id] = std::move(e);
  } else if (type == "session_status") {
    auto e = sessions_.at(r.at("session_id").get<std::string>());
    lock.unlock();
    std::lock_guard w(e->write_mutex);
    e->meta.status = session_status_from_string(r.at("status").get<std::string>());
  } else if (type == "batch") {
    auto e = sessions_.at(r.at("session_id").get<std::string>());
    lock.unlock();
    const auto frames = ingest::parse_frames(store_.get_blob(r.at("blob").get<std::string>()));
    apply_frames(*e, frames);
  } else if (type == "report") {
    ReportRecord rec;
    rec.report_id = r.at("report_id").get<std::string>();
    rec.session_id = r.at("session_id").get<std::string>();
    rec.kind = report_kind_from_string(r.at("kind").get<std::string>());
    rec.blob = r.at("blob").get<std::string>();
    rec.generated_at_ms = r.at("generated_at_ms").get<std::int64_t>();
    rec.engine_version = r.at("engine_version").get<std::string>();
    rec.payload = store_.get_blob_text(rec.blob);
    reports_[{rec.session_id, rec.kind}] = std::move(rec);
  } else if (type == "job") {
    Job& j = jobs_[r.at("job_id").get<std::string>()];
    j.job_id = r.at("job_id").get<std::string>();
    j.session_id = r.at("session_id").get<std::string>();
    j.state = job_state_from_string(r.at("state").get<std::string>());
    j.attempts = r.at("attempts").get<int>();
    j.error = r.at("error").get<std::string>();
  } else if (type == "job_stage") {
    jobs_.at(r.at("job_id").get<std::string>())
        .stages_done.push_back(r.at("stage").get<std::string>());
  } else {
    throw Error(ErrorCode::Internal, "unknown catalog record type " + type);
  }
}

// Caller holds entry.write_mutex (or is replaying before workers start).
std::size_t Platform::apply_frames(SessionEntry& entry, const std::vector<SensorFrame>& frames) {
  std::size_t added = 0;
  for (const auto& f : frames) {
    if (!entry.seen.insert(frame_key(f)).second) continue;
    entry.raw[static_cast<std::size_t>(f.foot)].push_back(f);
    ++added;
  }
  return added;
}

// ---- access helpers -------------------------------------------------------

const Patient& Platform::patient_locked(const std::string& patient_id) const {
  auto it = patients_.find(patient_id);
  if (it == patients_.end()) throw Error(ErrorCode::NotFound, "patient " + patient_id);
  return it->second;
}

bool Platform::can_access_locked(const Caller& caller, const std::string& patient_id) const {
  const auto& p = patient_locked(patient_id);
  switch (caller.user.role) {
    case Role::Admin:
      return true;
    case Role::Clinician:
      return p.clinician_id == caller.user.user_id;
    case Role::Patient:
      return caller.user.patient_id == patient_id;
  }
  return false;
}

void Platform::require_access_locked(const Caller& caller, const std::string& patient_id) const {
  if (!can_access_locked(caller, patient_id)) {
    throw Error(ErrorCode::Forbidden, "no access to patient " + patient_id);
  }
}

std::shared_ptr<Platform::SessionEntry> Platform::session_entry(const std::string& session_id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) throw Error(ErrorCode::NotFound, "session " + session_id);
  return it->second;
}

SessionInfo Platform::info_of(const SessionEntry& entry) const {
  SessionInfo info;
  info.meta = entry.meta;
  info.frames_left = entry.raw[0].size();
  info.frames_right = entry.raw[1].size();
  return info;
}

// ---- auth & accounts ------------------------------------------------------

AuthToken Platform::issue_token(std::string_view username, std::string_view credential) {
  std::optional<UserAccount> user;
  {
    std::lock_guard lock(mutex_);
    auto it = user_by_name_.find(std::string(username));
    if (it != user_by_name_.end()) user = users_.at(it->second);
  }
  return auth_.issue_token(user ? &*user : nullptr, username, credential);
}

Caller Platform::authenticate(std::string_view token) {
  const auto t = auth_.authenticate(token);
  std::lock_guard lock(mutex_);
  auto it = users_.find(t.user_id);
  if (it == users_.end()) throw Error(ErrorCode::Unauthorized, "token owner no longer exists");
  return {it->second};
}

UserAccount Platform::create_user(const Caller& caller, const std::string& username,
                                  std::string_view credential, Role role,
                                  const std::string& patient_id) {
  if (caller.user.role != Role::Admin) throw Error(ErrorCode::Forbidden, "admin only");
  if (username.empty() || credential.empty()) {
    throw Error(ErrorCode::BadRequest, "username and credential are required");
  }
  {
    std::lock_guard lock(mutex_);
    if (user_by_name_.contains(username)) {
      throw Error(ErrorCode::Conflict, "username " + username + " is taken");
    }
    if (role == Role::Patient) patient_locked(patient_id);
  }
  if (role != Role::Patient && !patient_id.empty()) {
    throw Error(ErrorCode::BadRequest, "only patient accounts link to a patient record");
  }
  UserAccount u;
  u.user_id = new_uuid();
  u.username = username;
  u.role = role;
  u.credential_hash = auth_.hash(credential);
  u.created_at_ms = clock_();
  u.patient_id = patient_id;
  persist(user_json(u));
  return u;
}

// ---- patients & pairings --------------------------------------------------

Patient Platform::create_patient(const Caller& caller, const std::string& display_name,
                                 const std::string& clinician_id) {
  Patient p;
  p.patient_id = new_uuid();
  p.display_name = display_name;
  p.created_at_ms = clock_();
  {
    std::lock_guard lock(mutex_);
    if (caller.user.role == Role::Clinician) {
      if (!clinician_id.empty() && clinician_id != caller.user.user_id) {
        throw Error(ErrorCode::Forbidden, "clinicians create patients for themselves");
      }
      p.clinician_id = caller.user.user_id;
    } else if (caller.user.role == Role::Admin) {
      auto it = users_.find(clinician_id);
      if (it == users_.end() || it->second.role != Role::Clinician) {
        throw Error(ErrorCode::BadRequest, "clinician_id must name a clinician account");
      }
      p.clinician_id = clinician_id;
    } else {
      throw Error(ErrorCode::Forbidden, "patients cannot create patient records");
    }
  }
  persist(patient_json(p));
  return p;
}

std::vector<Patient> Platform::list_patients(const Caller& caller) {
  std::lock_guard lock(mutex_);
  std::vector<Patient> out;
  for (const auto& [id, p] : patients_) {
    if (can_access_locked(caller, id)) out.push_back(p);
  }
  return out;
}

Pairing Platform::create_pairing(const Caller& caller, const std::string& patient_id,
                                 const std::string& insole_model_id) {
  if (insole_model_id.empty()) throw Error(ErrorCode::BadRequest, "insole_model_id is required");
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, patient_id);
  }
  Pairing p;
  p.pairing_id = new_uuid();
  p.patient_id = patient_id;
  p.insole_model_id = insole_model_id;
  p.active = true;
  persist(pairing_json(p));
  return p;
}

Pairing Platform::set_pairing_active(const Caller& caller, const std::string& pairing_id,
                                     bool active) {
  Pairing p;
  {
    std::lock_guard lock(mutex_);
    auto it = pairings_.find(pairing_id);
    if (it == pairings_.end()) throw Error(ErrorCode::NotFound, "pairing " + pairing_id);
    require_access_locked(caller, it->second.patient_id);
    p = it->second;
  }
  persist({{"type", "pairing_active"}, {"pairing_id", pairing_id}, {"active", active}});
  p.active = active;
  return p;
}

std::vector<Pairing> Platform::list_pairings(const Caller& caller,
                                             const std::optional<std::string>& patient_id) {
  std::lock_guard lock(mutex_);
  if (patient_id) require_access_locked(caller, *patient_id);
  std::vector<Pairing> out;
  for (const auto& [id, p] : pairings_) {
    if (patient_id && p.patient_id != *patient_id) continue;
    if (can_access_locked(caller, p.patient_id)) out.push_back(p);
  }
  return out;
}

// ---- sessions -------------------------------------------------------------

SessionInfo Platform::create_session(const Caller& caller, const CreateSessionRequest& req) {
  Session s;
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, req.patient_id);
    auto it = pairings_.find(req.pairing_id);
    if (it == pairings_.end() || !it->second.active || it->second.patient_id != req.patient_id) {
      throw Error(ErrorCode::UnknownPairing,
                  "no active pairing " + req.pairing_id + " for patient " + req.patient_id);
    }
  }
  s.session_id = new_uuid();
  s.patient_id = req.patient_id;
  s.pairing_id = req.pairing_id;
  s.type = req.type;
  s.started_at_ms = req.started_at_ms.value_or(clock_());
  s.sample_rate_hz = kCanonicalRateHz;
  s.stance_width_mm = req.stance_width_mm.value_or(default_stance_width_mm(req.type));
  if (!(s.stance_width_mm > 0.0)) throw Error(ErrorCode::BadRequest, "stance width must be positive");
  persist(session_json(s));
  SessionInfo info;
  info.meta = s;
  return info;
}

std::size_t Platform::ingest_batch(const Caller& caller, const std::string& session_id,
                                   const std::vector<SensorFrame>& frames) {
  if (frames.size() > config_.max_batch_frames) {
    throw Error(ErrorCode::PayloadTooLarge,
                std::to_string(frames.size()) + " frames exceed the batch limit of " +
                    std::to_string(config_.max_batch_frames));
  }
  auto entry = session_entry(session_id);
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, entry->meta.patient_id);
  }
  std::lock_guard w(entry->write_mutex);
  if (entry->meta.status != SessionStatus::Open) {
    throw Error(ErrorCode::SessionFinalized, "session " + session_id + " no longer accepts data");
  }
  std::vector<SensorFrame> fresh;
  std::unordered_set<std::uint64_t> in_batch;
  for (const auto& f : frames) {
    const auto key = frame_key(f);
    if (entry->seen.contains(key) || !in_batch.insert(key).second) continue;
    fresh.push_back(f);
  }
  if (fresh.empty()) return 0;
  // The stored frames are what the wire format carries, so that replay
  // rebuilds exactly the same state.
  const auto bytes = ingest::serialize_frames(fresh);
  const auto stored = ingest::parse_frames(bytes);
  const auto blob = store_.put_blob(bytes);
  store_.append({{"type", "batch"},
                 {"session_id", session_id},
                 {"blob", blob},
                 {"frames", stored.size()}});
  return apply_frames(*entry, stored);
}

FinalizeResult Platform::finalize_session(const Caller& caller, const std::string& session_id) {
  auto entry = session_entry(session_id);
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, entry->meta.patient_id);
  }
  Job job;
  {
    std::lock_guard w(entry->write_mutex);
    if (entry->meta.status != SessionStatus::Open) {
      throw Error(ErrorCode::AlreadyFinalized, "session " + session_id + " is already finalized");
    }
    if (entry->raw[0].empty() || entry->raw[1].empty()) {
      throw Error(ErrorCode::EmptySession, "finalize needs at least one frame per foot");
    }
    store_.append({{"type", "session_status"},
                   {"session_id", session_id},
                   {"status", std::string(to_string(SessionStatus::Finalized))}});
    entry->meta.status = SessionStatus::Finalized;
    job.job_id = new_uuid();
    job.session_id = session_id;
    job.state = JobState::Queued;
    persist(job_json(job));
  }
  enqueue(job.job_id);
  FinalizeResult out;
  out.job_id = job.job_id;
  std::lock_guard w(entry->write_mutex);
  out.session = info_of(*entry);
  return out;
}

SessionInfo Platform::get_session(const Caller& caller, const std::string& session_id) {
  auto entry = session_entry(session_id);
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, entry->meta.patient_id);
  }
  std::lock_guard w(entry->write_mutex);
  return info_of(*entry);
}

SessionPage Platform::list_sessions(const Caller& caller,
                                    const std::optional<std::string>& patient_id,
                                    std::optional<std::int64_t> from_ms,
                                    std::optional<std::int64_t> to_ms, std::size_t page) {
  if (page == 0) throw Error(ErrorCode::BadRequest, "page numbers start at 1");
  std::vector<std::shared_ptr<SessionEntry>> candidates;
  {
    std::lock_guard lock(mutex_);
    if (patient_id) require_access_locked(caller, *patient_id);
    for (const auto& [id, e] : sessions_) {
      if (patient_id && e->meta.patient_id != *patient_id) continue;
      if (!can_access_locked(caller, e->meta.patient_id)) continue;
      const auto t = e->meta.started_at_ms;
      if (from_ms && t < *from_ms) continue;
      if (to_ms && t > *to_ms) continue;
      candidates.push_back(e);
    }
  }
  std::vector<SessionInfo> all;
  all.reserve(candidates.size());
  for (const auto& e : candidates) {
    std::lock_guard w(e->write_mutex);
    all.push_back(info_of(*e));
  }
  std::sort(all.begin(), all.end(), [](const SessionInfo& a, const SessionInfo& b) {
    if (a.meta.started_at_ms != b.meta.started_at_ms) {
      return a.meta.started_at_ms > b.meta.started_at_ms;
    }
    return a.meta.session_id < b.meta.session_id;
  });
  SessionPage out;
  out.page = page;
  out.total = all.size();
  const std::size_t begin = (page - 1) * SessionPage::kPageSize;
  for (std::size_t i = begin; i < all.size() && i < begin + SessionPage::kPageSize; ++i) {
    out.sessions.push_back(std::move(all[i]));
  }
  return out;
}

// ---- reports --------------------------------------------------------------

std::string Platform::get_report(const Caller& caller, const std::string& session_id,
                                 ReportKind kind, std::optional<FootSide> foot,
                                 const std::optional<std::vector<std::size_t>>& sensors) {
  auto entry = session_entry(session_id);
  {
    std::lock_guard lock(mutex_);
    require_access_locked(caller, entry->meta.patient_id);
  }
  const auto kinds = report_kinds_for(entry->meta.type);
  if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end()) {
    throw Error(ErrorCode::NotFound, "no " + std::string(to_string(kind)) + " report for " +
                                         std::string(entry->meta.type.name()) + " sessions");
  }
  std::unique_lock w(entry->write_mutex);
  if (kind == ReportKind::RawSensor) {
    if (entry->meta.status == SessionStatus::Open) {
      throw Error(ErrorCode::NotReady, "raw data is available once the session is finalized");
    }
    if (!foot && !sensors) {
      std::lock_guard lock(mutex_);
      auto it = reports_.find({session_id, kind});
      if (it != reports_.end()) return it->second.payload;
    }
    // Finalized frames never change, so the projection can be built from them.
    return raw_payload(entry->meta, entry->raw, foot, sensors).dump();
  }
  w.unlock();
  std::lock_guard lock(mutex_);
  auto it = reports_.find({session_id, kind});
  if (it == reports_.end()) {
    throw Error(ErrorCode::NotReady, std::string(to_string(kind)) + " report is not ready");
  }
  return it->second.payload;
}

std::optional<ReportRecord> Platform::report_record(const std::string& session_id,
                                                    ReportKind kind) {
  std::lock_guard lock(mutex_);
  auto it = reports_.find({session_id, kind});
  if (it == reports_.end()) return std::nullopt;
  return it->second;
}

std::map<ReportKind, std::string> Platform::recompute_reports(const std::string& session_id) {
  auto entry = session_entry(session_id);
  Session meta;
  RawFrames raw;
  {
    std::lock_guard w(entry->write_mutex);
    meta = entry->meta;
    raw = entry->raw;
  }
  return build_reports(meta, raw, config_.layout, models_);
}

Job Platform::get_job(const Caller& caller, const std::string& job_id) {
  std::lock_guard lock(mutex_);
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw Error(ErrorCode::NotFound, "job " + job_id);
  const auto s = sessions_.find(it->second.session_id);
  if (s != sessions_.end()) require_access_locked(caller, s->second->meta.patient_id);
  return it->second;
}

// ---- scheduler ------------------------------------------------------------

void Platform::set_stage_hook(std::function<void(std::string_view, int)> hook) {
  std::lock_guard lock(mutex_);
  stage_hook_ = std::move(hook);
}

void Platform::enqueue(const std::string& job_id) {
  {
    std::lock_guard lock(queue_mutex_);
    queue_.push_back(job_id);
  }
  queue_cv_.notify_one();
}

bool Platform::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(queue_mutex_);
  return idle_cv_.wait_for(lock, timeout, [this] { return queue_.empty() && running_ == 0; });
}

void Platform::worker_loop() {
  for (;;) {
    std::string job_id;
    {
      std::unique_lock lock(queue_mutex_);
      queue_cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      job_id = queue_.front();
      queue_.pop_front();
      ++running_;
    }
    run_job(job_id);
    {
      std::lock_guard lock(queue_mutex_);
      --running_;
    }
    idle_cv_.notify_all();
  }
}

void Platform::set_job_state(Job& job, JobState state, const std::string& error) {
  job.state = state;
  job.error = error;
  persist(job_json(job));
}

void Platform::run_job(const std::string& job_id) {
  Job job;
  std::function<void(std::string_view, int)> hook;
  {
    std::lock_guard lock(mutex_);
    job = jobs_.at(job_id);
    hook = stage_hook_;
  }
  if (job.state == JobState::Done || job.state == JobState::Failed) return;
  auto entry = session_entry(job.session_id);
  Session meta;
  RawFrames raw;
  {
    std::lock_guard w(entry->write_mutex);
    meta = entry->meta;
    raw = entry->raw;
  }
  while (job.attempts < config_.max_attempts) {
    ++job.attempts;
    set_job_state(job, JobState::Running);
    try {
      PipelineState st;
      for (const char* stage : kPipelineStages) {
        if (hook) hook(stage, job.attempts);
        run_stage(stage, st, meta, raw, config_.layout, models_);
        const bool first_time =
            std::find(job.stages_done.begin(), job.stages_done.end(), stage) ==
            job.stages_done.end();
        if (first_time) {
          persist({{"type", "job_stage"}, {"job_id", job.job_id}, {"stage", stage}});
          job.stages_done.emplace_back(stage);
        }
      }
      for (const auto& [kind, payload] : st.payloads) {
        {
          std::lock_guard lock(mutex_);
          auto it = reports_.find({job.session_id, kind});
          if (it != reports_.end() && it->second.engine_version == kEngineVersion) continue;
        }
        const auto blob = store_.put_blob(payload);
        persist({{"type", "report"},
                 {"report_id", new_uuid()},
                 {"session_id", job.session_id},
                 {"kind", std::string(to_string(kind))},
                 {"blob", blob},
                 {"generated_at_ms", clock_()},
                 {"engine_version", kEngineVersion}});
      }
      {
        std::lock_guard w(entry->write_mutex);
        if (entry->meta.status == SessionStatus::Finalized) {
          store_.append({{"type", "session_status"},
                         {"session_id", job.session_id},
                         {"status", std::string(to_string(SessionStatus::Analyzed))}});
          entry->meta.status = SessionStatus::Analyzed;
        }
      }
      set_job_state(job, JobState::Done);
      return;
    } catch (const std::exception& e) {
      if (job.attempts >= config_.max_attempts) {
        set_job_state(job, JobState::Failed, e.what());
        return;
      }
      set_job_state(job, JobState::Queued, e.what());
      std::this_thread::sleep_for(
          std::chrono::milliseconds(config_.retry_base_ms << (job.attempts - 1)));
    }
  }
  set_job_state(job, JobState::Failed, job.error);
}

}  // namespace gaitcloud::service
