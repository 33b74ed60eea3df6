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

#include "gaitcloud/service/reports.hpp"

#include <algorithm>

#include "gaitcloud/balance/butterfly.hpp"
#include "gaitcloud/balance/heatmap.hpp"
#include "gaitcloud/balance/sway.hpp"
#include "gaitcloud/decision/features.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/ingest/curate.hpp"
#include "gaitcloud/ingest/integrate.hpp"

namespace gaitcloud::service {
namespace {

using nlohmann::json;

json header(ReportKind kind) {
  return {{"schema_version", kReportSchemaVersion}, {"kind", std::string(to_string(kind))}};
}

json box_json(const gait::FiveNumber& b) {
  return {{"min", b.min}, {"q1", b.q1}, {"median", b.median}, {"q3", b.q3}, {"max", b.max}};
}

std::string_view unit_of(std::string_view name) {
  if (name == "cycle_time") return "s";
  if (name == "cadence") return "steps/min";
  return "% of cycle";
}

json heatmap_json(const balance::Heatmap& h) {
  return {{"width", h.width},       {"height", h.height}, {"origin_x_mm", h.origin_x},
          {"origin_y_mm", h.origin_y}, {"cell_w_mm", h.cell_w}, {"cell_h_mm", h.cell_h},
          {"cells", h.cells}};
}

json sway_scalars(const balance::SwayMetrics& m) {
  return {{"ml_range_mm", m.ml_range},
          {"ap_range_mm", m.ap_range},
          {"ml_rms_mm", m.ml_rms},
          {"ap_rms_mm", m.ap_rms},
          {"path_length_mm", m.path_length_mm},
          {"mean_velocity_mm_s", m.mean_velocity_mm_s},
          {"ellipse_area_mm2", m.ellipse_area_mm2}};
}

json sway_segment(const balance::SwayReport& r) {
  json combined = sway_scalars(r.combined);
  combined["t_ms"] = r.combined.t_ms;
  combined["ml_deviation_mm"] = r.combined.ml_deviation;
  combined["ap_deviation_mm"] = r.combined.ap_deviation;
  return {{"left", sway_scalars(r.left)}, {"right", sway_scalars(r.right)}, {"combined", combined}};
}

json cop_polyline(const std::vector<balance::CopPoint>& line) {
  json pts = json::array();
  for (const auto& p : line) pts.push_back({p.t_ms, p.x_mm, p.y_mm});
  return pts;
}

template <typename F>
json guarded(ReportKind kind, F&& build) {
  try {
    return build();
  } catch (const Error& e) {
    return error_payload(kind, e);
  }
}

}  // namespace

ModelSet load_models(const std::filesystem::path& dir) {
  ModelSet set;
  if (std::filesystem::exists(dir / "pd_screen.json")) {
    set.binary = decision::load_model(dir / "pd_screen.json");
  }
  if (std::filesystem::exists(dir / "updrs310_severity.json")) {
    set.severity = decision::load_model(dir / "updrs310_severity.json");
  }
  return set;
}

Session curate_session(const Session& meta, const RawFrames& raw) {
  Session s = meta;
  s.left.clear();
  s.right.clear();
  for (FootSide foot : kBothFeet) {
    const auto& frames = raw[static_cast<std::size_t>(foot)];
    if (frames.empty()) continue;
    ingest::CurateOptions opts;
    opts.target_rate_hz = meta.sample_rate_hz;
    s.segments(foot) = ingest::curate(frames, opts);
  }
  return s;
}

json error_payload(ReportKind kind, const Error& error) {
  json j = header(kind);
  j["error"] = {{"code", std::string(to_string(error.code()))}, {"message", error.detail()}};
  return j;
}

json raw_payload(const Session& meta, const RawFrames& raw, std::optional<FootSide> foot,
                 const std::optional<std::vector<std::size_t>>& sensors) {
  std::vector<std::size_t> channels;
  if (sensors) {
    channels = *sensors;
    for (auto c : channels) {
      if (c >= kPressureChannels) {
        throw Error(ErrorCode::BadRequest, "sensor index " + std::to_string(c) + " outside 0..15");
      }
    }
  } else {
    for (std::size_t c = 0; c < kPressureChannels; ++c) channels.push_back(c);
  }
  json feet = json::array();
  for (FootSide f : kBothFeet) {
    if (foot && *foot != f) continue;
    auto frames = raw[static_cast<std::size_t>(f)];
    std::sort(frames.begin(), frames.end(), [](const auto& a, const auto& b) {
      return a.t_ms != b.t_ms ? a.t_ms < b.t_ms : a.seq < b.seq;
    });
    std::vector<std::uint64_t> t;
    t.reserve(frames.size());
    for (const auto& fr : frames) t.push_back(fr.t_ms);
    json series = json::array();
    for (auto c : channels) {
      std::vector<double> values;
      values.reserve(frames.size());
      for (const auto& fr : frames) values.push_back(fr.pressure[c]);
      series.push_back({{"name", "S" + std::to_string(c)},
                        {"sensor", c},
                        {"unit", "kPa"},
                        {"values", std::move(values)}});
    }
    feet.push_back({{"foot", std::string(to_string(f))}, {"t_ms", std::move(t)},
                    {"series", std::move(series)}});
  }
  json j = header(ReportKind::RawSensor);
  j["session_id"] = meta.session_id;
  j["feet"] = std::move(feet);
  return j;
}

json walking_payload(const gait::WalkAnalysis& walk) {
  const auto& s = walk.summary;
  json params = json::array();
  for (const auto& p : s.parameters) {
    params.push_back({
        {"name", p.name},
        {"unit", std::string(unit_of(p.name))},
        {"mean", p.mean},
        {"std", p.std},
        {"p_value", p.p_value ? json(*p.p_value) : json(nullptr)},
        {"left",
         {{"mean", p.left_mean}, {"std", p.left_std}, {"box", box_json(p.box_left)},
          {"values", p.left_values}}},
        {"right",
         {{"mean", p.right_mean}, {"std", p.right_std}, {"box", box_json(p.box_right)},
          {"values", p.right_values}}},
    });
  }
  auto events = [](const std::vector<gait::GaitEvent>& evs) {
    json arr = json::array();
    for (const auto& e : evs) {
      arr.push_back({{"kind", std::string(gait::to_string(e.kind))}, {"t_ms", e.t_ms},
                     {"atypical", e.atypical}});
    }
    return arr;
  };
  json turns = json::array();
  for (const auto& [a, b] : walk.turns) turns.push_back({{"from_ms", a}, {"to_ms", b}});

  json j = header(ReportKind::WalkingSummary);
  j["parameters"] = std::move(params);
  j["phase_fractions"] = {{"stance", s.phase_fractions.stance},
                          {"swing", s.phase_fractions.swing},
                          {"single_support", s.phase_fractions.single_support},
                          {"double_support", s.phase_fractions.double_support}};
  j["cycle_counts"] = {{"left", s.cycle_count_left}, {"right", s.cycle_count_right}};
  j["atypical_count"] = s.atypical_count;
  j["discarded_count"] = s.discarded_count;
  j["turn_excluded_count"] = s.turn_excluded_count;
  j["session_cadence"] = s.session_cadence ? json(*s.session_cadence) : json(nullptr);
  j["turns"] = std::move(turns);
  j["events"] = {{"left", events(walk.events_left)}, {"right", events(walk.events_right)}};
  return j;
}

json balance_payload(const Session& curated, const SensorLayout& layout,
                     const gait::WalkAnalysis* walk) {
  json j = header(ReportKind::Balance);
  j["stance_width_mm"] = curated.stance_width_mm;
  json plantar = json::object();
  for (FootSide f : kBothFeet) {
    plantar[std::string(to_string(f))] =
        guarded(ReportKind::Balance,
                [&] { return heatmap_json(balance::plantar_heatmap(curated, f, layout)); });
  }
  j["plantar_heatmaps"] = std::move(plantar);
  const auto cops = balance::global_cop_series(curated, layout, curated.stance_width_mm);
  j["cop_occupancy"] = guarded(ReportKind::Balance,
                               [&] { return heatmap_json(balance::cop_occupancy_heatmap(cops)); });
  j["sway"] = nullptr;
  j["butterfly"] = nullptr;
  if (curated.type.kind() == SessionType::Kind::StandingBalance) {
    j["sway"] = guarded(ReportKind::Balance, [&] {
      balance::BalanceProtocol protocol;
      protocol.stance_width_mm = curated.stance_width_mm;
      const auto [eo, ec] = balance::sway_analysis(curated, layout, protocol);
      return json{{"eyes_open", sway_segment(eo)},
                  {"eyes_closed", sway_segment(ec)},
                  {"romberg_ratio", eo.romberg_ratio ? json(*eo.romberg_ratio) : json(nullptr)}};
    });
  } else if (walk) {
    j["butterfly"] = guarded(ReportKind::Balance, [&] {
      const auto b = balance::butterfly(curated, layout, walk->cycles, curated.stance_width_mm);
      json lines = json::array();
      for (const auto& line : b.polylines) lines.push_back(cop_polyline(line));
      return json{{"polylines", std::move(lines)},
                  {"height_mm", b.height_mm},
                  {"symmetry_index", b.symmetry_index},
                  {"crossing_dispersion_mm", b.crossing_dispersion_mm}};
    });
  }
  return j;
}

json ai_payload(const gait::WalkingSummary& summary, const ModelSet& models) {
  if (!models.binary || !models.severity) {
    throw Error(ErrorCode::NotFound, "decision-support models are not installed");
  }
  const auto fv = decision::extract_features(summary);
  const auto b = decision::predict_binary(*models.binary, fv);
  const auto s = decision::predict_severity(*models.severity, fv);
  json features = json::object();
  for (std::size_t i = 0; i < fv.size(); ++i) features[fv.names()[i]] = fv.values()[i];
  json j = header(ReportKind::AiAssessment);
  j["binary"] = {{"probability", *b.probability}, {"label", b.label}, {"model_id", b.model_id}};
  j["severity"] = {
      {"distribution", s.class_distribution}, {"label", s.label}, {"model_id", s.model_id}};
  j["model_ids"] = {b.model_id, s.model_id};
  j["non_clinical"] = true;
  j["notice"] = "non-clinical placeholder model trained on synthetic data";
  j["feature_vector_hash"] = fv.hash_hex();
  j["features"] = std::move(features);
  return j;
}

std::vector<ReportKind> report_kinds_for(const SessionType& type) {
  if (type.is_walking()) {
    return {ReportKind::RawSensor, ReportKind::WalkingSummary, ReportKind::Balance,
            ReportKind::AiAssessment};
  }
  return {ReportKind::RawSensor, ReportKind::Balance};
}

void run_stage(std::string_view stage, PipelineState& st, const Session& meta,
               const RawFrames& raw, const SensorLayout& layout, const ModelSet& models) {
  if (stage == "curate") {
    st.curated = curate_session(meta, raw);
  } else if (stage == "analyze") {
    if (!meta.type.is_walking()) return;
    try {
      st.walk = gait::analyze_walk(st.curated, layout);
    } catch (const Error& e) {
      st.walk_error = e;
    }
  } else if (stage == "decision") {
    if (!meta.type.is_walking()) return;
    json ai = st.walk ? guarded(ReportKind::AiAssessment,
                                [&] { return ai_payload(st.walk->summary, models); })
                      : error_payload(ReportKind::AiAssessment,
                                      Error(ErrorCode::NoCycles, "no walking summary to assess"));
    st.payloads[ReportKind::AiAssessment] = ai.dump();
  } else if (stage == "reports") {
    st.payloads[ReportKind::RawSensor] = raw_payload(meta, raw).dump();
    if (meta.type.is_walking()) {
      st.payloads[ReportKind::WalkingSummary] =
          st.walk ? walking_payload(*st.walk).dump()
                  : error_payload(ReportKind::WalkingSummary, *st.walk_error).dump();
    }
    st.payloads[ReportKind::Balance] =
        balance_payload(st.curated, layout, st.walk ? &*st.walk : nullptr).dump();
  } else {
    throw Error(ErrorCode::Internal, "unknown pipeline stage " + std::string(stage));
  }
}

std::map<ReportKind, std::string> build_reports(const Session& meta, const RawFrames& raw,
                                                const SensorLayout& layout,
                                                const ModelSet& models) {
  PipelineState st;
  for (const char* stage : kPipelineStages) run_stage(stage, st, meta, raw, layout, models);
  return std::move(st.payloads);
}

}  // namespace gaitcloud::service
