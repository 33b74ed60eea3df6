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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "gaitcloud/service/auth.hpp"
#include "gaitcloud/service/domain.hpp"
#include "gaitcloud/service/reports.hpp"
#include "gaitcloud/service/store.hpp"

namespace gaitcloud::service {

struct PlatformConfig {
  std::filesystem::path data_dir = "gaitcloud-data";
  std::filesystem::path models_dir = "models";
  AuthConfig auth;
  std::size_t workers = 2;
  std::size_t max_batch_frames = 10000;
  int max_attempts = 3;
  std::int64_t retry_base_ms = 100;  // doubles per attempt
  SensorLayout layout = default_layout();
  // Creates this admin account on first start when the catalog has none.
  std::string bootstrap_admin_username = "admin";
  std::optional<std::string> bootstrap_admin_credential;
};

// Authenticated principal.
struct Caller {
  UserAccount user;
};

struct SessionInfo {
  Session meta;  // no segments
  std::size_t frames_left = 0;
  std::size_t frames_right = 0;
};

struct SessionPage {
  std::vector<SessionInfo> sessions;
  std::size_t page = 1;
  std::size_t total = 0;
  static constexpr std::size_t kPageSize = 100;
};

struct FinalizeResult {
  std::string job_id;
  SessionInfo session;
};

struct CreateSessionRequest {
  std::string patient_id;
  std::string pairing_id;
  SessionType type = SessionType::free_walk();
  std::optional<double> stance_width_mm;
  std::optional<std::int64_t> started_at_ms;  // defaults to now
};

// The platform's business logic: accounts, patients, pairings, session
// lifecycle, ingest, analysis scheduling and report access. All state is
// rebuilt from the store's catalog on construction.
class Platform {
 public:
  explicit Platform(PlatformConfig config, Clock clock = system_clock());
  ~Platform();
  Platform(const Platform&) = delete;
  Platform& operator=(const Platform&) = delete;

  AuthToken issue_token(std::string_view username, std::string_view credential);
  Caller authenticate(std::string_view token);

  UserAccount create_user(const Caller& caller, const std::string& username,
                          std::string_view credential, Role role,
                          const std::string& patient_id = {});

  Patient create_patient(const Caller& caller, const std::string& display_name,
                         const std::string& clinician_id = {});
  std::vector<Patient> list_patients(const Caller& caller);

  Pairing create_pairing(const Caller& caller, const std::string& patient_id,
                         const std::string& insole_model_id);
  Pairing set_pairing_active(const Caller& caller, const std::string& pairing_id, bool active);
  std::vector<Pairing> list_pairings(const Caller& caller,
                                     const std::optional<std::string>& patient_id);

  SessionInfo create_session(const Caller& caller, const CreateSessionRequest& request);
  // Returns the number of frames not seen before; (foot, seq) identifies a
  // frame. Throws SessionFinalized, PayloadTooLarge.
  std::size_t ingest_batch(const Caller& caller, const std::string& session_id,
                           const std::vector<SensorFrame>& frames);
  FinalizeResult finalize_session(const Caller& caller, const std::string& session_id);
  SessionInfo get_session(const Caller& caller, const std::string& session_id);
  SessionPage list_sessions(const Caller& caller, const std::optional<std::string>& patient_id,
                            std::optional<std::int64_t> from_ms, std::optional<std::int64_t> to_ms,
                            std::size_t page = 1);

  // Serialized payload. Raw projections are computed from the stored frames.
  std::string get_report(const Caller& caller, const std::string& session_id, ReportKind kind,
                         std::optional<FootSide> foot = std::nullopt,
                         const std::optional<std::vector<std::size_t>>& sensors = std::nullopt);
  Job get_job(const Caller& caller, const std::string& job_id);

  // Reruns the whole pipeline on the stored frames without persisting.
  std::map<ReportKind, std::string> recompute_reports(const std::string& session_id);
  std::optional<ReportRecord> report_record(const std::string& session_id, ReportKind kind);

  // Blocks until no job is queued or running. Returns false on timeout.
  bool wait_idle(std::chrono::milliseconds timeout);

  // Test hook called before each pipeline stage; throwing fails the attempt.
  void set_stage_hook(std::function<void(std::string_view stage, int attempt)> hook);

  Store& store() { return store_; }
  const PlatformConfig& config() const { return config_; }
  std::int64_t now() const { return clock_(); }

 private:
  struct SessionEntry {
    Session meta;
    RawFrames raw;
    std::unordered_set<std::uint64_t> seen;
    std::mutex write_mutex;
  };

  void replay();
  void apply(const nlohmann::json& record);
  void persist(const nlohmann::json& record);

  std::shared_ptr<SessionEntry> session_entry(const std::string& session_id);
  const Patient& patient_locked(const std::string& patient_id) const;
  bool can_access_locked(const Caller& caller, const std::string& patient_id) const;
  void require_access_locked(const Caller& caller, const std::string& patient_id) const;
  SessionInfo info_of(const SessionEntry& entry) const;
  std::size_t apply_frames(SessionEntry& entry, const std::vector<SensorFrame>& frames);

  void enqueue(const std::string& job_id);
  void worker_loop();
  void run_job(const std::string& job_id);
  void set_job_state(Job& job, JobState state, const std::string& error = {});

  PlatformConfig config_;
  Clock clock_;
  Store store_;
  Authenticator auth_;
  ModelSet models_;

  mutable std::mutex mutex_;
  std::unordered_map<std::string, UserAccount> users_;  // by user id
  std::unordered_map<std::string, std::string> user_by_name_;
  std::map<std::string, Patient> patients_;
  std::map<std::string, Pairing> pairings_;
  std::map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::map<std::pair<std::string, ReportKind>, ReportRecord> reports_;
  std::map<std::string, Job> jobs_;
  std::function<void(std::string_view, int)> stage_hook_;

  std::mutex queue_mutex_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::string> queue_;
  std::size_t running_ = 0;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
};

}  // namespace gaitcloud::service
