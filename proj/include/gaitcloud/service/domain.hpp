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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gaitcloud::service {

enum class Role : std::uint8_t { Clinician, Patient, Admin };

std::string_view to_string(Role role);
Role role_from_string(std::string_view text);  // throws BadRequest

struct UserAccount {
  std::string user_id;
  std::string username;
  Role role = Role::Clinician;
  std::string credential_hash;  // Argon2id encoded string
  std::int64_t created_at_ms = 0;
  std::string patient_id;  // Patient role: the patient record this user is
};

struct Patient {
  std::string patient_id;
  std::string display_name;
  std::string clinician_id;  // assigned clinician (user id)
  std::int64_t created_at_ms = 0;
};

enum class ReportKind : std::uint8_t { RawSensor, WalkingSummary, Balance, AiAssessment };

// URL names: raw, walking, balance, ai.
std::string_view to_string(ReportKind kind);
ReportKind report_kind_from_string(std::string_view text);  // throws UnknownKind

struct ReportRecord {
  std::string report_id;
  std::string session_id;
  ReportKind kind = ReportKind::RawSensor;
  std::string payload;  // JSON document
  std::string blob;     // content hash of payload
  std::int64_t generated_at_ms = 0;
  std::string engine_version;
};

enum class JobState : std::uint8_t { Queued, Running, Done, Failed };

std::string_view to_string(JobState state);
JobState job_state_from_string(std::string_view text);

struct Job {
  std::string job_id;
  std::string session_id;
  JobState state = JobState::Queued;
  int attempts = 0;
  std::vector<std::string> stages_done;
  std::string error;
};

}  // namespace gaitcloud::service
