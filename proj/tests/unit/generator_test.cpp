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

#include "gaitcloud/balance/cop.hpp"
#include "gaitcloud/balance/sway.hpp"
#include "gaitcloud/error.hpp"
#include "gaitcloud/gait/contact.hpp"
#include "gaitcloud/sim/generator.hpp"
#include "gaitcloud/sim/stream.hpp"
#include "support.hpp"

namespace gaitcloud::sim {
namespace {

double heel_force(const SensorFrame& f) {
  return gait::group_force(f, default_layout().heel_group);
}
double fore_force(const SensorFrame& f) {
  return gait::group_force(f, default_layout().forefoot_group);
}

TEST(GaitGenerator, ValidatesParameters) {
  auto bad = [](auto mutate) {
    GaitGenParams p;
    mutate(p);
    try {
      generate_walk(p);
    } catch (const Error& e) {
      return e.code() == ErrorCode::InvalidParams;
    }
    return false;
  };
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.cadence_steps_per_min = 0; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.stance_fraction = 1.0; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.double_support_fraction = 0.3; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.step_time_asymmetry = 1.0; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.noise_sigma_kpa = -1; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.contact_off_kpa = 40; }));
  EXPECT_TRUE(bad([](GaitGenParams& p) { p.duration_s = 0.01; }));
  GaitGenParams ok;
  ok.double_support_fraction = 0.24;
  EXPECT_NO_THROW(generate_walk(ok));
}

TEST(GaitGenerator, DeterministicPerSeed) {
  GaitGenParams p;
  p.noise_sigma_kpa = 5.0;
  p.duration_s = 5.0;
  const auto a = generate_walk(p);
  const auto b = generate_walk(p);
  EXPECT_EQ(a.left, b.left);
  p.rng_seed = 2;
  EXPECT_NE(generate_walk(p).left, a.left);
}

TEST(GaitGenerator, FramesAreUniformAndLabelled) {
  GaitGenParams p;
  p.duration_s = 4.0;
  const auto w = generate_walk(p);
  ASSERT_EQ(w.left.size(), 400u);
  ASSERT_EQ(w.right.size(), 400u);
  for (std::size_t i = 0; i < w.left.size(); ++i) {
    EXPECT_EQ(w.left[i].t_ms, 10 * i);
    EXPECT_EQ(w.left[i].seq, i);
    EXPECT_EQ(w.left[i].foot, FootSide::Left);
    EXPECT_EQ(w.right[i].foot, FootSide::Right);
  }
}

// The truth times are exact threshold crossings of the group force.
TEST(GaitGenerator, TruthEventsSitOnThresholdCrossings) {
  for (double cadence : {80.0, 130.0}) {
    GaitGenParams p;
    p.cadence_steps_per_min = cadence;
    p.stance_fraction = 0.58;
    const auto w = generate_walk(p);
    for (const auto* pair : {&w.truth.left, &w.truth.right}) {
      const auto& frames = pair == &w.truth.left ? w.left : w.right;
      for (const auto& e : *pair) {
        const auto i = static_cast<std::size_t>(std::floor(e.t_ms / 10.0));
        ASSERT_LT(i + 1, frames.size());
        const auto& before = frames[i];
        const auto& after = frames[i + 1];
        switch (e.kind) {
          case gait::EventKind::HeelStrike:
            EXPECT_LE(heel_force(before), p.contact_on_kpa + 1e-9);
            EXPECT_GT(heel_force(after), p.contact_on_kpa - 1e-9);
            break;
          case gait::EventKind::FootFlat:
            EXPECT_LE(fore_force(before), p.contact_on_kpa + 1e-9);
            EXPECT_GT(fore_force(after), p.contact_on_kpa - 1e-9);
            break;
          case gait::EventKind::HeelRise:
            EXPECT_GE(heel_force(before), p.contact_off_kpa - 1e-9);
            EXPECT_LT(heel_force(after), p.contact_off_kpa + 1e-9);
            break;
          case gait::EventKind::ToeOff:
            EXPECT_GE(fore_force(before), p.contact_off_kpa - 1e-9);
            EXPECT_LT(fore_force(after), p.contact_off_kpa + 1e-9);
            break;
        }
      }
    }
  }
}

TEST(GaitGenerator, TruthCyclesEncodeParameters) {
  GaitGenParams p;
  p.cadence_steps_per_min = 100.0;
  p.stance_fraction = 0.60;
  p.right_stance_fraction = 0.64;
  p.step_time_asymmetry = 0.05;
  const auto w = generate_walk(p);
  ASSERT_GT(w.truth.cycles.size(), 20u);
  for (const auto& c : w.truth.cycles) {
    const double stance = c.foot == FootSide::Left ? 60.0 : 64.0;
    EXPECT_NEAR(c.parameters.cadence_steps_per_min, 100.0, 1e-9);
    EXPECT_NEAR(c.parameters.stance_pct, stance, 1e-9);
    EXPECT_NEAR(c.parameters.double_support_pct, 24.0, 1e-9);
    EXPECT_NEAR(c.parameters.single_support_pct + c.parameters.double_support_pct, stance, 1e-9);
  }
}

TEST(GaitGenerator, TurnAndSitToStand) {
  GaitGenParams p;
  p.turn_at_s = 10.0;
  p.sit_to_stand_s = 2.0;
  const auto w = generate_walk(p);
  EXPECT_NEAR(w.left[1050].gyro[2], 90.0, 1e-9);
  EXPECT_NEAR(w.left[900].gyro[2], 0.0, 1e-9);
  // Both feet loaded while standing up, before the first stride.
  EXPECT_GT(heel_force(w.left[150]), 30.0);
  EXPECT_GT(heel_force(w.right[150]), 30.0);
  for (const auto& e : w.truth.left) EXPECT_GT(e.t_ms, 2000.0);
}

TEST(Distribute, HitsTargetProperty) {
  const auto& layout = default_layout();
  Rng rng(4);
  for (int n = 0; n < 500; ++n) {
    // Interior of the sensor hull.
    const Point2 target{testing::uniform(rng, -8.0, 8.0), testing::uniform(rng, 60.0, 180.0)};
    const double total = testing::uniform(rng, 100.0, 1500.0);
    const auto p = distribute_pressure(layout, target, total);
    double sum = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < kPressureChannels; ++i) {
      ASSERT_GE(p[i], 0.0);
      sum += p[i];
      sx += p[i] * layout.positions[i].x;
      sy += p[i] * layout.positions[i].y;
    }
    ASSERT_NEAR(sum, total, 1e-9 * total);
    ASSERT_NEAR(sx / sum, target.x, 1e-9);
    ASSERT_NEAR(sy / sum, target.y, 1e-9);
  }
  // Outside the hull no non-negative distribution exists.
  EXPECT_THROW(distribute_pressure(layout, {80.0, 100.0}, 500.0), Error);
}

TEST(BalanceGenerator, FramesRealizeTruthCop) {
  BalanceGenParams p;
  p.duration_s = 5.0;
  p.eyes_open_s = 2.5;
  const auto g = generate_balance(p);
  ASSERT_EQ(g.truth.size(), g.left.size());
  for (std::size_t i = 0; i < g.truth.size(); i += 7) {
    const auto l = balance::cop_frame(g.left[i], default_layout()).value();
    const auto r = balance::cop_frame(g.right[i], default_layout()).value();
    EXPECT_NEAR(l.x_mm, g.truth[i].local[0].x, 1e-9);
    EXPECT_NEAR(l.y_mm, g.truth[i].local[0].y, 1e-9);
    EXPECT_NEAR(r.x_mm, g.truth[i].local[1].x, 1e-9);
    EXPECT_NEAR(r.y_mm, g.truth[i].local[1].y, 1e-9);
  }
}

TEST(BalanceGenerator, EyesClosedSwaysMore) {
  BalanceGenParams p;
  const auto g = generate_balance(p);
  double eo = 0.0;
  double ec = 0.0;
  for (const auto& t : g.truth) {
    const double r2 = t.sway_x_mm * t.sway_x_mm + t.sway_y_mm * t.sway_y_mm;
    (t.t_ms < 10000 ? eo : ec) += r2;
  }
  EXPECT_GT(ec, 2.0 * eo);
  for (const auto& t : g.truth) {
    const double amp = t.t_ms < 10000 ? p.eyes_open_amplitude_mm : p.eyes_closed_amplitude_mm;
    EXPECT_LE(std::fabs(t.sway_x_mm), 3.0 * amp + 1e-9);
  }
  BalanceGenParams bad;
  bad.time_constant_s = 0.0;
  EXPECT_THROW(generate_balance(bad), Error);
}

TEST(Stream, InterleaveOrdersByTimeThenFoot) {
  GaitGenParams p;
  p.duration_s = 2.0;
  const auto w = generate_walk(p);
  const auto all = interleave(w.left, w.right);
  ASSERT_EQ(all.size(), 400u);
  for (std::size_t i = 0; i + 1 < all.size(); ++i) {
    ASSERT_LE(all[i].t_ms, all[i + 1].t_ms);
    if (all[i].t_ms == all[i + 1].t_ms) {
      ASSERT_EQ(all[i].foot, FootSide::Left);
    }
  }
}

TEST(Stream, RejectsBadOptionsAndUnreachableServer) {
  StreamTarget target;
  target.port = 1;  // nothing listens here
  target.session_id = "s";
  std::vector<SensorFrame> frames(3);
  StreamOptions bad;
  bad.loss_pct = 100.0;
  try {
    stream(frames, target, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidParams);
  }
  try {
    stream(frames, target, StreamOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConnectionRefused);
  }
}

TEST(Stream, TruthDocuments) {
  GaitGenParams p;
  p.duration_s = 5.0;
  const auto w = generate_walk(p);
  const auto doc = walk_truth_json(p, w.truth);
  EXPECT_EQ(doc.at("kind"), "walk");
  EXPECT_EQ(doc.at("events").at("left").size(), w.truth.left.size());
  EXPECT_EQ(doc.at("cycles").size(), w.truth.cycles.size());
  BalanceGenParams bp;
  bp.duration_s = 1.0;
  const auto g = generate_balance(bp);
  EXPECT_EQ(balance_truth_json(bp, g.truth).at("cop").size(), g.truth.size());
}

}  // namespace
}  // namespace gaitcloud::sim
