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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "gaitcloud/decision/features.hpp"
#include "gaitcloud/decision/metrics.hpp"
#include "gaitcloud/decision/model.hpp"
#include "gaitcloud/decision/train.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/gait/analysis.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "support.hpp"

namespace gaitcloud::decision {
namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

TreeEnsembleModel stump_model() {
  TreeEnsembleModel m;
  m.model_id = "stump";
  m.type = ModelType::GbdtBinary;
  m.feature_names = {"a", "b"};
  m.base_score = 0.5;
  Tree t;
  t.nodes = {{0, 1.0, 1, 2, 0.0, {}}, {-1, 0, -1, -1, -1.0, {}}, {-1, 0, -1, -1, 2.0, {}}};
  m.trees = {t};
  return m;
}

TreeEnsembleModel forest_model() {
  TreeEnsembleModel m;
  m.model_id = "forest";
  m.type = ModelType::RfMulticlass;
  m.num_classes = 3;
  m.feature_names = {"a", "b"};
  Tree t1;
  t1.nodes = {{1, 0.0, 1, 2, 0, {}}, {-1, 0, -1, -1, 0, {1.0, 0.0, 0.0}},
              {-1, 0, -1, -1, 0, {0.0, 0.5, 0.5}}};
  Tree t2;
  t2.nodes = {{-1, 0, -1, -1, 0, {0.0, 0.0, 1.0}}};
  m.trees = {t1, t2};
  return m;
}

FeatureVector ab(double a, double b) {
  FeatureVector fv;
  fv.add("a", a);
  fv.add("b", b);
  return fv;
}

TEST(Metrics, F1Arithmetic) {
  EXPECT_NEAR(f1_score(0.79, 0.65), 0.713, 5e-4);
  EXPECT_EQ(f1_score(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(f1_score(1.0, 1.0), 1.0);
}

TEST(Metrics, BinaryConfusion) {
  const std::vector<int> truth{1, 1, 1, 0, 0, 0, 0, 1};
  const std::vector<int> pred{1, 1, 0, 0, 0, 1, 0, 1};
  const auto m = evaluate(pred, truth, Averaging::Binary);
  EXPECT_DOUBLE_EQ(m.accuracy, 6.0 / 8.0);
  EXPECT_DOUBLE_EQ(m.precision, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(m.recall, 3.0 / 4.0);
  EXPECT_EQ(m.confusion[0][1], 1u);
  EXPECT_EQ(m.confusion[1][0], 1u);
  const auto direct = binary_metrics(3, 1, 1, 3);
  EXPECT_DOUBLE_EQ(direct.f1, m.f1);
}

TEST(Metrics, MacroAveraging) {
  const std::vector<int> truth{0, 0, 1, 1, 2, 2};
  const std::vector<int> pred{0, 0, 1, 0, 1, 1};
  const auto m = evaluate(pred, truth, Averaging::Macro, 3);
  // per-class precision 2/3, 1/3, 0 (never predicted); recall 1, 1/2, 0
  EXPECT_NEAR(m.precision, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(m.recall, 0.5, 1e-12);
  EXPECT_NEAR(m.f1, f1_score(1.0 / 3.0, 0.5), 1e-12);
  EXPECT_EQ(m.averaging, Averaging::Macro);
}

TEST(Metrics, Errors) {
  const std::vector<int> two{0, 1};
  const std::vector<int> three{0, 1, 1};
  EXPECT_EQ(code_of([&] { evaluate(two, three, Averaging::Binary); }), ErrorCode::LengthMismatch);
  const std::vector<int> neg{-1, 0};
  EXPECT_EQ(code_of([&] { evaluate(neg, two, Averaging::Binary); }), ErrorCode::InvalidParams);
  const std::vector<int> big{0, 3};
  EXPECT_EQ(code_of([&] { evaluate(big, two, Averaging::Macro, 2); }), ErrorCode::InvalidParams);
}

TEST(Model, GbdtPrediction) {
  const auto m = stump_model();
  EXPECT_NO_THROW(m.validate());
  const auto lo = predict_binary(m, ab(0.5, 0));
  EXPECT_DOUBLE_EQ(*lo.probability, 1.0 / (1.0 + std::exp(0.5)));
  EXPECT_EQ(lo.label, 0);
  // Exactly at the threshold routes right.
  const auto hi = predict_binary(m, ab(1.0, 0));
  EXPECT_DOUBLE_EQ(*hi.probability, 1.0 / (1.0 + std::exp(-2.5)));
  EXPECT_EQ(hi.label, 1);
  const auto nan = predict_binary(m, ab(std::numeric_limits<double>::quiet_NaN(), 0));
  EXPECT_EQ(*nan.probability, *lo.probability);
  EXPECT_EQ(hi.model_id, "stump");
  EXPECT_EQ(hi.feature_vector_hash, ab(1.0, 0).hash());
}

TEST(Model, ForestPrediction) {
  const auto m = forest_model();
  EXPECT_NO_THROW(m.validate());
  const auto p = predict_severity(m, ab(0, -1));
  EXPECT_EQ(p.class_distribution, (std::vector<double>{0.5, 0.0, 0.5}));
  EXPECT_EQ(p.label, 0);  // lowest index wins the tie
  const auto q = predict(m, ab(0, 1));
  EXPECT_EQ(q.class_distribution, (std::vector<double>{0.0, 0.25, 0.75}));
  EXPECT_EQ(q.label, 2);
  EXPECT_EQ(code_of([&] { predict_binary(m, ab(0, 0)); }), ErrorCode::InvalidParams);
}

TEST(Model, MissingFeature) {
  FeatureVector only_a;
  only_a.add("a", 1.0);
  try {
    predict(stump_model(), only_a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingFeature);
    EXPECT_EQ(e.detail(), "b");
  }
}

TEST(Model, SchemaViolations) {
  auto expect_schema = [](TreeEnsembleModel m) {
    EXPECT_EQ(code_of([&] { m.validate(); }), ErrorCode::SchemaViolation);
  };
  auto m = stump_model();
  m.trees[0].nodes[0].right = 7;
  expect_schema(m);
  m = stump_model();
  m.trees[0].nodes[0].right = 1;  // shared child, node 2 unreachable
  expect_schema(m);
  m = stump_model();
  m.trees[0].nodes[0].left = 0;  // cycle
  expect_schema(m);
  m = stump_model();
  m.trees[0].nodes[0].feature = 5;
  expect_schema(m);
  m = stump_model();
  m.feature_names = {"a", "a"};
  expect_schema(m);
  auto f = forest_model();
  f.trees[0].nodes[1].leaf_distribution = {0.5, 0.6, 0.0};
  expect_schema(f);
  f = forest_model();
  f.trees[1].nodes[0].leaf_distribution = {1.0};
  expect_schema(f);
}

TEST(Model, JsonRoundTripAndVersion) {
  for (const auto& m : {stump_model(), forest_model()}) {
    const auto back = deserialize_model(serialize_model(m));
    EXPECT_EQ(back, m);
  }
  auto doc = model_to_json(stump_model());
  EXPECT_EQ(doc.at("format"), std::string(kModelFormat));
  doc["version"] = 2;
  EXPECT_EQ(code_of([&] { model_from_json(doc); }), ErrorCode::UnsupportedVersion);
  auto broken = model_to_json(stump_model());
  broken["trees"][0]["nodes"][0].erase("threshold");
  EXPECT_EQ(code_of([&] { model_from_json(broken); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(argmax({0.2, 0.4, 0.4}), 1);
}

TEST(FeatureVector, AddSetHash) {
  FeatureVector fv;
  fv.add("x", 1.0);
  EXPECT_EQ(code_of([&] { fv.add("x", 2.0); }), ErrorCode::BadRequest);
  const auto h = fv.hash();
  fv.set("x", 1.0);
  EXPECT_EQ(fv.hash(), h);
  fv.set("x", std::nextafter(1.0, 2.0));
  EXPECT_NE(fv.hash(), h);
  fv.set("y", 3.0);
  EXPECT_EQ(fv.size(), 2u);
  EXPECT_EQ(*fv.get("y"), 3.0);
  EXPECT_FALSE(fv.get("z").has_value());
  EXPECT_EQ(fv.hash_hex().size(), 16u);
  EXPECT_DOUBLE_EQ(asymmetry_index(2.0, 1.0), 1.0 / 1.5);
  EXPECT_EQ(asymmetry_index(0.0, 0.0), 0.0);
}

TEST(Features, FromWalkingSummary) {
  const auto w = sim::generate_walk(sim::GaitGenParams{});
  const auto s = testing::curated_session(w.left, w.right, SessionType::free_walk(), false);
  const auto a = gait::analyze_walk(s, default_layout());
  const auto fv = extract_features(a.summary);
  EXPECT_EQ(fv.names(), walking_feature_names());
  EXPECT_NEAR(*fv.get("cadence_mean"), 110.0, 1.1);
  EXPECT_NEAR(*fv.get("stance_asym"), 0.0, 0.02);
  // Deterministic hash for identical input.
  EXPECT_EQ(extract_features(a.summary).hash(), fv.hash());

  auto few = a.summary;
  few.cycle_count_left = 2;
  EXPECT_EQ(code_of([&] { extract_features(few); }), ErrorCode::TooFewCycles);
}

Dataset separable(Rng& rng, int classes, int n) {
  Dataset d;
  d.feature_names = {"u", "v", "w"};
  for (int i = 0; i < n; ++i) {
    const int y = i % classes;
    d.rows.push_back({rng.normal(4.0 * y, 1.0), rng.normal(0, 1), rng.normal(-2.0 * y, 1.0)});
    d.labels.push_back(y);
  }
  return d;
}

TEST(Training, DeterministicForSeedAndAccurate) {
  Rng rng(12);
  const auto train = separable(rng, 3, 300);
  const auto test = separable(rng, 3, 150);
  TrainParams p;
  p.type = ModelType::RfMulticlass;
  p.trees = 30;
  p.seed = 9;
  const auto a = train_ensemble(train, p);
  const auto b = train_ensemble(train, p);
  EXPECT_EQ(a, b);
  EXPECT_NO_THROW(a.validate());
  const auto m = evaluate(predict_rows(a, test), test.labels, Averaging::Macro, 3);
  EXPECT_GE(m.accuracy, 0.9);

  TrainParams g;
  g.trees = 40;
  const auto bin = separable(rng, 2, 200);
  const auto gb = train_ensemble(bin, g);
  EXPECT_EQ(gb.type, ModelType::GbdtBinary);
  const auto mb = evaluate(predict_rows(gb, bin), bin.labels, Averaging::Binary);
  EXPECT_GE(mb.accuracy, 0.95);
}

TEST(Training, RejectsDegenerateData) {
  Dataset empty;
  empty.feature_names = {"u"};
  EXPECT_EQ(code_of([&] { train_ensemble(empty, TrainParams{}); }), ErrorCode::DegenerateDataset);
  Dataset one_class{{"u"}, {{1.0}, {2.0}}, {0, 0}};
  EXPECT_EQ(code_of([&] { train_ensemble(one_class, TrainParams{}); }),
            ErrorCode::DegenerateDataset);
  Dataset three{{"u"}, {{1.0}, {2.0}, {3.0}}, {0, 1, 2}};
  EXPECT_EQ(code_of([&] { train_ensemble(three, TrainParams{}); }), ErrorCode::DegenerateDataset);
  Dataset d;
  d.feature_names = {"u", "v"};
  FeatureVector fv;
  fv.add("u", 1.0);
  EXPECT_EQ(code_of([&] { d.add(fv, 0); }), ErrorCode::MissingFeature);
}

TEST(ShippedModels, LoadAndMatchFeatureNames) {
  const auto dir = testing::source_dir() / "models";
  const auto screen = load_model(dir / "pd_screen.json");
  const auto severity = load_model(dir / "updrs310_severity.json");
  EXPECT_EQ(screen.type, ModelType::GbdtBinary);
  EXPECT_EQ(severity.type, ModelType::RfMulticlass);
  EXPECT_EQ(severity.num_classes, 4);
  EXPECT_EQ(screen.feature_names, walking_feature_names());
  EXPECT_NE(screen.description.find("not a clinical model"), std::string::npos);
}

}  // namespace
}  // namespace gaitcloud::decision
