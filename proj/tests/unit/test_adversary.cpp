// Copyright 2026 The dynclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "dynclust/adversary.hpp"
#include "dynclust/oblivious.hpp"
#include "test_support.hpp"

namespace dynclust {
namespace {

using Kind = AdversaryOp::Kind;

BudgetFn Constant(double f) {
  return [f](std::size_t, std::size_t) { return f; };
}

TEST(AdaptiveAdversary, InsertsFreshVerticesAndLinksActives) {
  AdaptiveAdversary adv(1, Constant(5.0));
  for (std::uint32_t i = 0; i < 3; ++i) {
    const AdversaryOp op = adv.NextOp();
    EXPECT_EQ(op.kind, Kind::kInsert);
    EXPECT_EQ(op.vertex, i);
  }
  EXPECT_EQ(adv.Answer(0, 1), 1.0);
  EXPECT_EQ(adv.degree(0), 1u);
  EXPECT_EQ(adv.Answer(1, 0), 1.0);
  EXPECT_EQ(adv.log().size(), 1u);
  EXPECT_EQ(adv.Answer(2, 2), 0.0);
  EXPECT_EQ(adv.active_count(), 3u);
  EXPECT_EQ(adv.Audit(), "");
}

TEST(AdaptiveAdversary, HighDegreeVerticesTurnPassiveAndAreDeletedNext) {
  // Threshold 100 * 0.02 = 2 edges.
  AdaptiveAdversary adv(1, Constant(0.02));
  for (int i = 0; i < 3; ++i) adv.NextOp();
  adv.Answer(0, 1);
  EXPECT_TRUE(adv.clean());
  adv.Answer(0, 2);
  EXPECT_EQ(adv.label(0), VertexLabel::kPassive);
  EXPECT_FALSE(adv.clean());
  const AdversaryOp del = adv.NextOp();
  EXPECT_EQ(del.kind, Kind::kDelete);
  EXPECT_EQ(del.vertex, 0u);
  EXPECT_EQ(adv.label(0), VertexLabel::kOff);
  EXPECT_FALSE(adv.clean_before_op().back());
  const AdversaryOp ins = adv.NextOp();
  EXPECT_EQ(ins.kind, Kind::kInsert);
  EXPECT_EQ(adv.Answer(3, 1), 1.0);
  // Through the graph 0-1-3 rather than a fresh hop.
  EXPECT_EQ(adv.Answer(0, 3), 2.0);
  EXPECT_EQ(adv.Audit(), "");
}

TEST(AdaptiveAdversary, DisconnectedPairsGetTheRangeCap) {
  AdaptiveAdversary adv(1, Constant(0.001), 1000.0);
  adv.NextOp();
  adv.NextOp();
  adv.Answer(0, 1);
  EXPECT_EQ(adv.passive_count(), 2u);
  EXPECT_EQ(adv.NextOp().kind, Kind::kDelete);
  EXPECT_EQ(adv.NextOp().kind, Kind::kDelete);
  const AdversaryOp ins = adv.NextOp();
  ASSERT_EQ(ins.kind, Kind::kInsert);
  EXPECT_EQ(adv.Answer(0, ins.vertex), 1000.0);
  EXPECT_EQ(adv.capped_answers(), 1u);
}

TEST(AdaptiveAdversary, SnapshotRequiresCleanOperation) {
  AdaptiveAdversary adv(1, Constant(0.001));
  adv.NextOp();
  adv.NextOp();
  adv.Answer(0, 1);
  EXPECT_THROW(TakeCleanSnapshot(adv, SnapshotOptions{}), ContractError);
}

TEST(AdaptiveAdversary, RejectsQueriesOnUnknownVertices) {
  AdaptiveAdversary adv(1, Constant(5.0));
  adv.NextOp();
  EXPECT_THROW(adv.Answer(0, 4), ContractError);
}

TEST(AugmentedGraphMetric, CliquesAddUnitEdges) {
  std::vector<std::vector<std::uint32_t>> path{{1}, {0, 2}, {1, 3}, {2}, {}};
  AugmentedGraphMetric plain(AugmentedGraphMetric::Kind::kUniform, path, {}, 50.0);
  EXPECT_EQ(plain.Distance(0, 3), 3.0);
  EXPECT_EQ(plain.Distance(0, 4), 50.0);
  AugmentedGraphMetric joined(AugmentedGraphMetric::Kind::kUniform, path, {{0, 3}}, 50.0);
  EXPECT_EQ(joined.Distance(0, 3), 1.0);
  EXPECT_EQ(joined.Distance(1, 3), 2.0);
  EXPECT_EQ(joined.CheckTriangle(150, 0, 0), "");
  const auto m = joined.Matrix();
  EXPECT_LE(testing::MatrixTriangleExcess(m), 0.0);
}

TEST(AugmentedGraphMetric, CheckAnswersFlagsMismatches) {
  std::vector<std::vector<std::uint32_t>> path{{1}, {0, 2}, {1}};
  AugmentedGraphMetric metric(AugmentedGraphMetric::Kind::kUniform, path, {}, 50.0);
  EXPECT_EQ(metric.CheckAnswers({{0, 2, 2.0, 1}}, 10, 0), "");
  EXPECT_NE(metric.CheckAnswers({{0, 2, 1.0, 1}}, 10, 0), "");
}

TEST(ForcedLayerCount, MatchesClosedForm) {
  EXPECT_EQ(ForcedLayerCount(10000, 500.0), 1);
  EXPECT_EQ(ForcedLayerCount(1000000, 500.0), 2);
  EXPECT_EQ(ForcedLayerCount(4, 500.0), 0);
  EXPECT_EQ(ForcedLayerCount(290, 10.0), 2);
}

TEST(AdaptiveHarness, ShortRunKeepsEveryInvariant) {
  AdaptiveRunConfig config;
  config.ops = 3000;
  config.budget = 5.0;
  config.seed = 3;
  config.snapshot_every = 1000;
  const AdaptiveRunReport r = RunAdaptiveHarness(config);
  EXPECT_FALSE(r.budget_violated);
  EXPECT_GE(r.min_active_margin, 1.0);
  EXPECT_LE(r.max_degree_ratio, 1.0);
  EXPECT_TRUE(r.clean_window_ok);
  EXPECT_EQ(r.audit_errors, "");
  ASSERT_FALSE(r.snapshots.empty());
  for (const SnapshotStats& s : r.snapshots) {
    EXPECT_EQ(s.audit_errors, "") << "snapshot at op " << s.op;
    EXPECT_GE(s.layered_cost, s.uniform_cost);
  }
  EXPECT_EQ(r.stream.size(), 3000u);
}

TEST(AdaptiveHarness, SameSeedSameStream) {
  AdaptiveRunConfig config;
  config.ops = 800;
  config.snapshot_every = 0;
  config.seed = 9;
  const auto a = RunAdaptiveHarness(config);
  const auto b = RunAdaptiveHarness(config);
  ASSERT_EQ(a.stream.size(), b.stream.size());
  for (std::size_t i = 0; i < a.stream.size(); ++i) {
    EXPECT_EQ(a.stream[i].kind, b.stream[i].kind);
    EXPECT_EQ(a.stream[i].vertex, b.stream[i].vertex);
  }
  EXPECT_EQ(a.queries, b.queries);
}

TEST(ObliviousStream, ValueVariantBlocksAreInsertQueryDelete) {
  ObliviousStream stream(3, 100.0, 4, 1);
  EXPECT_EQ(stream.num_anchors(), 3u);
  const auto script = stream.Script();
  ASSERT_EQ(script.size(), 3u + 3u * 4u);
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(script[a].kind, ScriptOp::Kind::kInsert);
    EXPECT_EQ(script[a].site, a);
  }
  for (std::size_t b = 0; b < 4; ++b) {
    const std::size_t at = 3 + 3 * b;
    EXPECT_EQ(script[at].kind, ScriptOp::Kind::kInsert);
    EXPECT_EQ(script[at].site, stream.ProbeSite(b));
    EXPECT_EQ(script[at + 1].kind, ScriptOp::Kind::kQueryValue);
    EXPECT_EQ(script[at + 2].kind, ScriptOp::Kind::kDelete);
    EXPECT_EQ(script[at + 2].site, stream.ProbeSite(b));
  }
}

TEST(ObliviousStream, CenterSetVariantBlocksHaveFiveOps) {
  ObliviousStream stream(3, 100.0, 2, 1, ObliviousStream::Variant::kCenterSet);
  EXPECT_EQ(stream.num_anchors(), 2u);
  const auto script = stream.Script();
  ASSERT_EQ(script.size(), 2u + 5u * 2u);
  EXPECT_EQ(script[4].kind, ScriptOp::Kind::kQuerySolution);
  for (std::size_t b = 0; b < 2; ++b) {
    EXPECT_TRUE(stream.near(b));
    EXPECT_DOUBLE_EQ(stream.BlockOptimum(b), 1.0);
  }
}

TEST(ObliviousStream, FullProbeFindsExactlyOneNearAnchor) {
  ObliviousStream stream(6, 100.0, 200, 17);
  for (std::size_t b = 0; b < stream.num_blocks(); ++b) {
    std::size_t unit = 0;
    for (std::size_t a = 0; a < stream.num_anchors(); ++a) {
      unit += stream.Distance(stream.ProbeSite(b), a) == 1.0 ? 1 : 0;
    }
    stream.CloseBlock(b);
    EXPECT_TRUE(stream.Identified(b));
    EXPECT_EQ(unit, stream.near(b) ? 1u : 0u);
    EXPECT_DOUBLE_EQ(stream.BlockOptimum(b), stream.near(b) ? 1.0 : 100.0);
  }
}

TEST(ObliviousStream, AnswersStayConsistentWithTheFinalMetric) {
  ObliviousStream stream(4, 50.0, 30, 5, ObliviousStream::Variant::kCenterSet);
  std::vector<std::vector<double>> seen(stream.num_sites(), std::vector<double>(stream.num_sites(), -1.0));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> site(0, stream.num_sites() - 1);
  for (int q = 0; q < 400; ++q) {
    const std::size_t a = site(rng);
    const std::size_t b = site(rng);
    seen[a][b] = seen[b][a] = stream.Distance(a, b);
  }
  stream.CloseAll();
  const auto m = stream.Matrix();
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = 0; b < m.size(); ++b) {
      if (seen[a][b] >= 0.0) EXPECT_EQ(seen[a][b], m[a][b]);
    }
  }
  EXPECT_LE(testing::MatrixTriangleExcess(m), 0.0);
}

TEST(ObliviousStream, RejectsTooFewCenters) {
  EXPECT_THROW(ObliviousStream(1, 100.0, 3, 0), ContractError);
  EXPECT_THROW(ObliviousStream(3, 1.0, 3, 0), ContractError);
}

TEST(ObliviousProber, FullProbingAlwaysIdentifies) {
  const auto r = RunObliviousProber(8, 300, 8, 1, 2);
  EXPECT_EQ(r.identified, r.blocks);
  EXPECT_EQ(r.correct_reports, r.blocks);
  EXPECT_EQ(r.queries, 300u * 8u);
}

TEST(ObliviousProber, QuarterProbingRarelyIdentifies) {
  const auto r = RunObliviousProber(32, 2000, 8, 4, 5);
  const double p = r.identified_rate();
  // Expected about half of 8/32.
  EXPECT_NEAR(p, 0.125, 0.05);
}

}  // namespace
}  // namespace dynclust
