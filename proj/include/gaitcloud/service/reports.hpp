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

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"
#include "gaitcloud/decision/model.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/gait/analysis.hpp"
#include "gaitcloud/service/domain.hpp"
#include "json.hpp"

namespace gaitcloud::service {

inline constexpr const char* kEngineVersion = "gaitcloud-engine/1.0.0";
inline constexpr int kReportSchemaVersion = 1;

using RawFrames = std::array<std::vector<SensorFrame>, 2>;  // [left, right]

struct ModelSet {
  std::optional<decision::TreeEnsembleModel> binary;    // PD screen
  std::optional<decision::TreeEnsembleModel> severity;  // UPDRS 3.10
};

// Loads pd_screen.json and updrs310_severity.json when present.
ModelSet load_models(const std::filesystem::path& dir);

// Curated copy of a session built from its raw frames.
Session curate_session(const Session& meta, const RawFrames& raw);

// Pressure channels of the raw frames. No foot selects both feet; no sensor
// list selects all 16. Throws BadRequest for indices outside 0..15.
nlohmann::json raw_payload(const Session& meta, const RawFrames& raw,
                           std::optional<FootSide> foot = std::nullopt,
                           const std::optional<std::vector<std::size_t>>& sensors = std::nullopt);
nlohmann::json walking_payload(const gait::WalkAnalysis& walk);
// Plantar and COP heatmaps, the butterfly diagram for walks and sway for
// standing balance.
nlohmann::json balance_payload(const Session& curated, const SensorLayout& layout,
                               const gait::WalkAnalysis* walk);
nlohmann::json ai_payload(const gait::WalkingSummary& summary, const ModelSet& models);
nlohmann::json error_payload(ReportKind kind, const Error& error);

// Scheduler stages, run in order: curate, analyze (gait or balance),
// decision, reports.
struct PipelineState {
  Session curated;
  std::optional<gait::WalkAnalysis> walk;
  std::optional<Error> walk_error;
  std::map<ReportKind, std::string> payloads;
};

inline constexpr std::array<const char*, 4> kPipelineStages{"curate", "analyze", "decision",
                                                            "reports"};

void run_stage(std::string_view stage, PipelineState& state, const Session& meta,
               const RawFrames& raw, const SensorLayout& layout, const ModelSet& models);

// Every report the session type calls for, serialized. Pure: the same
// session, frames, layout and models give byte-identical payloads.
std::map<ReportKind, std::string> build_reports(const Session& meta, const RawFrames& raw,
                                                const SensorLayout& layout,
                                                const ModelSet& models);

// Kinds produced for a session type.
std::vector<ReportKind> report_kinds_for(const SessionType& type);

}  // namespace gaitcloud::service
