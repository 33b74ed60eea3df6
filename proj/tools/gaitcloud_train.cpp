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

// Trains the two placeholder models shipped under models/ from a synthetic
// cohort. The cohort is generator output with hand-picked parameter shifts;
// the resulting models are plumbing fixtures, not clinical tools.

#include <cmath>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "gaitcloud/decision/features.hpp"
#include "gaitcloud/decision/metrics.hpp"
#include "gaitcloud/decision/model.hpp"
#include "gaitcloud/decision/train.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/gait/analysis.hpp"
#include "gaitcloud/ingest/wire.hpp"
#include "gaitcloud/random.hpp"
#include "gaitcloud/service/reports.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "json.hpp"

namespace {

using namespace gaitcloud;
using nlohmann::json;

constexpr const char* kDescription =
    "Placeholder trained on synthetic generator output; not a clinical model.";

struct Subject {
  bool parkinsonian = false;
  int severity = 0;  // 0..3, meaningful when parkinsonian
};

sim::GaitGenParams draw_params(const Subject& s, Rng& rng) {
  const double k = s.parkinsonian ? s.severity : -1.0;
  for (;;) {
    sim::GaitGenParams p;
    p.cadence_steps_per_min = rng.normal(s.parkinsonian ? 108.0 - 7.0 * k : 114.0, 5.0);
    p.stance_fraction = rng.normal(s.parkinsonian ? 0.625 + 0.02 * k : 0.605, 0.012);
    p.right_stance_fraction =
        p.stance_fraction + rng.normal(s.parkinsonian ? 0.01 * k : 0.0, 0.006);
    p.step_time_asymmetry = std::abs(rng.normal(s.parkinsonian ? 0.02 + 0.03 * k : 0.0, 0.012));
    p.duration_s = 30.0;
    p.turn_at_s = 15.0;
    p.first_strike_s = 0.3 + 0.4 * rng.uniform();
    p.rng_seed = rng.below(1u << 30);
    try {
      p.validate();
      return p;
    } catch (const Error&) {
      // redraw
    }
  }
}

// Same path the platform takes: wire quantization, curation, analysis.
std::optional<decision::FeatureVector> features_for(const sim::GaitGenParams& p) {
  auto walk = sim::generate_walk(p);
  service::RawFrames raw;
  raw[0] = ingest::parse_frames(ingest::serialize_frames(walk.left));
  raw[1] = ingest::parse_frames(ingest::serialize_frames(walk.right));
  Session meta;
  meta.type = SessionType::walk10m(WalkSpeed::Normal);
  try {
    const auto curated = service::curate_session(meta, raw);
    const auto analysis = gait::analyze_walk(curated, default_layout());
    return decision::extract_features(analysis.summary);
  } catch (const Error& e) {
    std::cerr << "skipping subject: " << e.what() << "\n";
    return std::nullopt;
  }
}

json metrics_json(const decision::Metrics& m) {
  return {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gaitcloud-train: synthetic placeholder models"};
  std::string out_dir = "models";
  int subjects = 240;
  std::uint64_t seed = 20260101;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--subjects", subjects, "cohort size")->check(CLI::Range(40, 100000));
  app.add_option("--seed", seed, "rng seed");
  CLI11_PARSE(app, argc, argv);

  try {
    Rng rng(seed);
    const auto names = decision::walking_feature_names();
    decision::Dataset screen_train{names, {}, {}};
    decision::Dataset screen_test{names, {}, {}};
    decision::Dataset severity_train{names, {}, {}};
    decision::Dataset severity_test{names, {}, {}};
    for (int i = 0; i < subjects; ++i) {
      Subject s;
      s.parkinsonian = i % 2 == 1;
      s.severity = (i / 2) % 4;
      const auto fv = features_for(draw_params(s, rng));
      if (!fv) continue;
      const bool test = (i / 8) % 4 == 3;  // every fourth block of 8 covers all labels
      (test ? screen_test : screen_train).add(*fv, s.parkinsonian ? 1 : 0);
      if (s.parkinsonian) (test ? severity_test : severity_train).add(*fv, s.severity);
    }

    decision::TrainParams gbdt;
    gbdt.type = decision::ModelType::GbdtBinary;
    gbdt.model_id = "pd_screen-synthetic-v1";
    auto screen = decision::train_ensemble(screen_train, gbdt);
    screen.description = kDescription;

    decision::TrainParams rf;
    rf.type = decision::ModelType::RfMulticlass;
    rf.model_id = "updrs310_severity-synthetic-v1";
    rf.max_depth = 6;
    rf.seed = seed;
    auto severity = decision::train_ensemble(severity_train, rf);
    severity.description = kDescription;

    std::filesystem::create_directories(out_dir);
    decision::save_model(screen, std::filesystem::path(out_dir) / "pd_screen.json");
    decision::save_model(severity, std::filesystem::path(out_dir) / "updrs310_severity.json");

    const auto sp = decision::predict_rows(screen, screen_test);
    const auto vp = decision::predict_rows(severity, severity_test);
    const json report = {
        {"subjects", subjects},
        {"screen_held_out",
         metrics_json(decision::evaluate(sp, screen_test.labels, decision::Averaging::Binary))},
        {"severity_held_out", metrics_json(decision::evaluate(vp, severity_test.labels,
                                                              decision::Averaging::Macro, 4))}};
    std::cout << report.dump(1) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "gaitcloud-train: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
