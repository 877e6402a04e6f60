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

#include <algorithm>
#include <set>
#include <sstream>

#include "dynclust/common.hpp"
#include "dynclust/runner.hpp"
#include "dynclust/stream.hpp"
#include "dynclust/workloads.hpp"

namespace dynclust {
namespace {

using Kind = StreamOp::Kind;

std::vector<StreamOp> Parse(const std::string& text) {
  std::istringstream in(text);
  return ParseStream(in);
}

std::size_t ErrorLine(const std::string& text) {
  try {
    Parse(text);
  } catch (const StreamError& e) {
    return e.line();
  }
  return 0;
}

std::unique_ptr<MetricOracle> OracleFor(const Workload& w) {
  std::unique_ptr<MetricBackend> backend;
  if (!w.coords.empty()) {
    backend = std::make_unique<EuclideanBackend>(w.coords, w.keys);
  } else {
    backend = std::make_unique<MatrixBackend>(w.matrix);
  }
  auto oracle = std::make_unique<MetricOracle>(std::move(backend));
  oracle->RescaleToUnitMinimum();
  oracle->set_delta_bound(std::max(1.0, oracle->MaxSiteDistance()));
  return oracle;
}

ClustererConfig ConfigFor(const MetricOracle& oracle, RunObjective objective, std::size_t k) {
  ClustererConfig config;
  config.objective = objective;
  config.k = k;
  config.epsilon = 0.5;
  config.delta = oracle.delta_bound();
  config.seed = 7;
  return config;
}

TEST(StreamFormat, ParsesAllOperationKinds) {
  const auto ops = Parse("# header\n+ a\n\n+ b\n?v\n- a\n?s\n");
  ASSERT_EQ(ops.size(), 5u);
  EXPECT_EQ(ops[0].kind, Kind::kInsert);
  EXPECT_EQ(ops[0].key, "a");
  EXPECT_EQ(ops[0].line, 2u);
  EXPECT_EQ(ops[2].kind, Kind::kQueryValue);
  EXPECT_EQ(ops[3].kind, Kind::kDelete);
  EXPECT_EQ(ops[4].kind, Kind::kQuerySolution);
  EXPECT_EQ(ops[4].line, 7u);
}

TEST(StreamFormat, ReportsTheOffendingLine) {
  EXPECT_EQ(ErrorLine("+ a\n+\n"), 2u);
  EXPECT_EQ(ErrorLine("+ a\n\n* b\n"), 3u);
  EXPECT_EQ(ErrorLine("?v extra\n"), 1u);
  EXPECT_EQ(ErrorLine("+ a b\n"), 1u);
}

TEST(StreamFormat, WriteThenParseRoundTrips) {
  const std::vector<StreamOp> ops{{Kind::kInsert, "x", 0}, {Kind::kQueryValue, {}, 0},
                                  {Kind::kDelete, "x", 0}, {Kind::kQuerySolution, {}, 0}};
  std::ostringstream out;
  WriteStream(out, ops);
  EXPECT_EQ(Parse(out.str()), ops);
}

TEST(StreamFormat, ValidationRejectsDuplicateAndMissingKeys) {
  EXPECT_NO_THROW(ValidateStream(Parse("+ a\n- a\n+ a\n")));
  try {
    ValidateStream(Parse("+ a\n+ b\n+ a\n"));
    FAIL() << "duplicate insert accepted";
  } catch (const StreamError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    ValidateStream(Parse("+ a\n?v\n- b\n"));
    FAIL() << "delete of an absent key accepted";
  } catch (const StreamError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Workloads, SlidingWindowInsertsThenPairs) {
  WorkloadParams params;
  params.n = 30;
  params.window = 10;
  params.query_every = 0;
  const Workload w = GenerateWorkload(WorkloadKind::kSlidingWindow, params);
  ASSERT_EQ(w.ops.size(), 10u + 2u * 20u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(w.ops[i].kind, Kind::kInsert);
    EXPECT_EQ(w.ops[i].key, w.keys[i]);
  }
  for (std::size_t i = 10; i < 30; ++i) {
    const std::size_t at = 10 + 2 * (i - 10);
    EXPECT_EQ(w.ops[at].kind, Kind::kInsert);
    EXPECT_EQ(w.ops[at].key, w.keys[i]);
    EXPECT_EQ(w.ops[at + 1].kind, Kind::kDelete);
    EXPECT_EQ(w.ops[at + 1].key, w.keys[i - 10]);
  }
  EXPECT_NO_THROW(ValidateStream(w.ops));
}

TEST(Workloads, QueriesAlternateAtTheRequestedPace) {
  WorkloadParams params;
  params.n = 12;
  params.window = 100;
  params.query_every = 3;
  const Workload w = GenerateWorkload(WorkloadKind::kSlidingWindow, params);
  ASSERT_EQ(w.ops.size(), 16u);
  EXPECT_EQ(w.ops[3].kind, Kind::kQueryValue);
  EXPECT_EQ(w.ops[7].kind, Kind::kQuerySolution);
  EXPECT_EQ(w.ops[11].kind, Kind::kQueryValue);
}

TEST(Workloads, ObliviousStreamHasAnchorsThenBlocks) {
  WorkloadParams params;
  params.k = 3;
  params.blocks = 5;
  const Workload w = GenerateWorkload(WorkloadKind::kAdversaryOblivious, params);
  ASSERT_EQ(w.ops.size(), 3u + 3u * 5u);
  ASSERT_EQ(w.matrix.size(), w.keys.size());
  for (std::size_t b = 0; b < 5; ++b) {
    const std::size_t at = 3 + 3 * b;
    EXPECT_EQ(w.ops[at].kind, Kind::kInsert);
    EXPECT_EQ(w.ops[at + 1].kind, Kind::kQueryValue);
    EXPECT_EQ(w.ops[at + 2].kind, Kind::kDelete);
    EXPECT_EQ(w.ops[at + 2].key, w.ops[at].key);
  }
  EXPECT_NO_THROW(ValidateStream(w.ops));
}

TEST(Workloads, ClusteredPointsCarryLabels) {
  WorkloadParams params;
  params.n = 50;
  params.clusters = 4;
  const Workload w = GenerateWorkload(WorkloadKind::kClusteredGaussian, params);
  ASSERT_EQ(w.labels.size(), 50u);
  for (int label : w.labels) {
    EXPECT_GE(label, 0);
    EXPECT_LT(label, 4);
  }
  EXPECT_NO_THROW(ValidateStream(w.ops));
}

TEST(Workloads, SameSeedSameStream) {
  WorkloadParams params;
  params.n = 40;
  params.seed = 11;
  const Workload a = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  const Workload b = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  EXPECT_EQ(a.ops, b.ops);
  EXPECT_EQ(a.coords, b.coords);
  params.seed = 12;
  const Workload c = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  EXPECT_NE(a.coords, c.coords);
}

TEST(Workloads, InvalidParametersThrow) {
  WorkloadParams params;
  params.dim = 0;
  EXPECT_THROW(GenerateWorkload(WorkloadKind::kUniformEuclidean, params), ContractError);
  params = WorkloadParams{};
  params.delete_fraction = 1.5;
  EXPECT_THROW(GenerateWorkload(WorkloadKind::kUniformEuclidean, params), ContractError);
  params = WorkloadParams{};
  params.window = 0;
  EXPECT_THROW(GenerateWorkload(WorkloadKind::kSlidingWindow, params), ContractError);
  params = WorkloadParams{};
  params.sigma = 0.0;
  EXPECT_THROW(GenerateWorkload(WorkloadKind::kClusteredGaussian, params), ContractError);
  EXPECT_THROW(ParseWorkloadKind("nope"), ContractError);
}

TEST(RunStream, EmptyStreamHasNoRows) {
  WorkloadParams params;
  params.n = 3;
  const Workload w = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  auto oracle = OracleFor(w);
  const RunReport report = RunStream(*oracle, {}, ConfigFor(*oracle, RunObjective::kKCenter, 2), RunOptions{});
  EXPECT_TRUE(report.rows.empty());
  EXPECT_EQ(report.summary.ops, 0u);
  EXPECT_EQ(report.summary.distance_queries, 0u);
}

TEST(RunStream, KCenterStaysWithinItsGuarantee) {
  WorkloadParams params;
  params.n = 40;
  params.query_every = 4;
  params.seed = 3;
  const Workload w = GenerateWorkload(WorkloadKind::kClusteredGaussian, params);
  auto oracle = OracleFor(w);
  RunOptions options;
  options.oracle = true;
  const RunReport report = RunStream(*oracle, w.ops, ConfigFor(*oracle, RunObjective::kKCenter, 3), options);
  ASSERT_EQ(report.rows.size(), w.ops.size());
  EXPECT_GT(report.summary.queries_answered, 0u);
  EXPECT_EQ(report.summary.asserts, 0u);
  EXPECT_LE(report.summary.max_ratio, 6.0 * 1.5 + 1e-9);
  EXPECT_EQ(report.rows.back().queries, oracle->query_count());
  EXPECT_EQ(report.summary.distance_queries, oracle->query_count());
  for (std::size_t i = 1; i < report.rows.size(); ++i) EXPECT_GE(report.rows[i].queries, report.rows[i - 1].queries);
}

TEST(RunStream, EveryObjectiveAnswersQueries) {
  WorkloadParams params;
  params.n = 14;
  params.query_every = 3;
  params.seed = 5;
  const Workload w = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  for (RunObjective objective : {RunObjective::kKCenter, RunObjective::kKCenterDeterministic,
                                 RunObjective::kSumOfRadii, RunObjective::kSumOfDiameters}) {
    auto oracle = OracleFor(w);
    RunOptions options;
    options.oracle = true;
    const RunReport report = RunStream(*oracle, w.ops, ConfigFor(*oracle, objective, 2), options);
    EXPECT_GT(report.summary.queries_answered, 0u) << RunObjectiveName(objective);
    for (const RunRow& row : report.rows) {
      if (row.cost && row.oracle_cost) EXPECT_GE(*row.cost + 1e-9, *row.oracle_cost) << RunObjectiveName(objective);
    }
  }
}

TEST(RunStream, ReplayIsDeterministic) {
  WorkloadParams params;
  params.n = 30;
  params.query_every = 5;
  params.seed = 8;
  const Workload w = GenerateWorkload(WorkloadKind::kSlidingWindow, params);
  std::string first;
  for (int run = 0; run < 2; ++run) {
    auto oracle = OracleFor(w);
    RunOptions options;
    options.oracle = true;
    const RunReport report = RunStream(*oracle, w.ops, ConfigFor(*oracle, RunObjective::kKCenter, 2), options);
    std::ostringstream csv;
    WriteReportCsv(csv, report);
    if (run == 0) {
      first = csv.str();
    } else {
      EXPECT_EQ(csv.str(), first);
    }
  }
}

TEST(RunStream, MalformedOperationRaisesWithItsLine) {
  WorkloadParams params;
  params.n = 5;
  const Workload w = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  auto oracle = OracleFor(w);
  const auto ops = Parse("+ p0\n+ p1\n- p3\n");
  try {
    RunStream(*oracle, ops, ConfigFor(*oracle, RunObjective::kKCenter, 2), RunOptions{});
    FAIL() << "delete of a non-live key accepted";
  } catch (const StreamError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(MakeClusterer, SumObjectivesNeedIntegralInverseEpsilon) {
  WorkloadParams params;
  params.n = 5;
  const Workload w = GenerateWorkload(WorkloadKind::kUniformEuclidean, params);
  auto oracle = OracleFor(w);
  ClustererConfig config = ConfigFor(*oracle, RunObjective::kSumOfRadii, 2);
  config.epsilon = 0.3;
  EXPECT_THROW(MakeClusterer(*oracle, config), ContractError);
  config.objective = RunObjective::kKCenter;
  EXPECT_NO_THROW(MakeClusterer(*oracle, config));
  EXPECT_THROW(ParseRunObjective("median"), ContractError);
}

}  // namespace
}  // namespace dynclust
