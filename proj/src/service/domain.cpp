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

#include "gaitcloud/service/domain.hpp"

#include "gaitcloud/error.hpp"

namespace gaitcloud::service {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::Clinician:
      return "clinician";
    case Role::Patient:
      return "patient";
    case Role::Admin:
      return "admin";
  }
  return "?";
}

Role role_from_string(std::string_view text) {
  if (text == "clinician") return Role::Clinician;
  if (text == "patient") return Role::Patient;
  if (text == "admin") return Role::Admin;
  throw Error(ErrorCode::BadRequest, "unknown role '" + std::string(text) + "'");
}

std::string_view to_string(ReportKind kind) {
  switch (kind) {
    case ReportKind::RawSensor:
      return "raw";
    case ReportKind::WalkingSummary:
      return "walking";
    case ReportKind::Balance:
      return "balance";
    case ReportKind::AiAssessment:
      return "ai";
  }
  return "?";
}

ReportKind report_kind_from_string(std::string_view text) {
  if (text == "raw") return ReportKind::RawSensor;
  if (text == "walking") return ReportKind::WalkingSummary;
  if (text == "balance") return ReportKind::Balance;
  if (text == "ai") return ReportKind::AiAssessment;
  throw Error(ErrorCode::UnknownKind, "unknown report kind '" + std::string(text) + "'");
}

std::string_view to_string(JobState state) {
  switch (state) {
    case JobState::Queued:
      return "queued";
    case JobState::Running:
      return "running";
    case JobState::Done:
      return "done";
    case JobState::Failed:
      return "failed";
  }
  return "?";
}

JobState job_state_from_string(std::string_view text) {
  if (text == "queued") return JobState::Queued;
  if (text == "running") return JobState::Running;
  if (text == "done") return JobState::Done;
  if (text == "failed") return JobState::Failed;
  throw Error(ErrorCode::BadRequest, "unknown job state '" + std::string(text) + "'");
}

}  // namespace gaitcloud::service
