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

#ifndef DYNCLUST_RUNNER_HPP_
#define DYNCLUST_RUNNER_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dynclust/exact.hpp"
#include "dynclust/ladder.hpp"
#include "dynclust/metric.hpp"
#include "dynclust/stream.hpp"

namespace dynclust {

enum class RunObjective { kKCenter, kKCenterDeterministic, kSumOfRadii, kSumOfDiameters };

RunObjective ParseRunObjective(std::string_view name);
const char* RunObjectiveName(RunObjective objective);

// A ladder of per-estimate structures behind one interface.
class DynamicClusterer {
 public:
  virtual ~DynamicClusterer() = default;
  virtual void Insert(PointId p) = 0;
  virtual void Delete(PointId p) = 0;
  virtual LadderAnswer Query() const = 0;
  virtual std::size_t num_rungs() const = 0;
  // Joined audit messages of every rung; empty when all invariants hold.
  virtual std::string Audit() const = 0;
};

struct ClustererConfig {
  RunObjective objective = RunObjective::kKCenter;
  std::size_t k = 2;
  double epsilon = 0.5;
  // Largest pairwise distance after scaling the minimum to 1.
  double delta = 1.0;
  std::uint64_t seed = 0;
  OfflineMode offline = OfflineMode::kExactOrGreedy;
};

// k-center kinds use rungs up to delta; sum kinds up to k * delta.
std::unique_ptr<DynamicClusterer> MakeClusterer(const MetricOracle& oracle, const ClustererConfig& config);

struct RunRow {
  std::size_t index = 0;
  StreamOp::Kind kind = StreamOp::Kind::kInsert;
  std::string key;
  bool asserted = false;
  std::optional<double> cost;
  std::optional<double> estimate;
  std::optional<std::size_t> centers;
  std::optional<double> oracle_cost;
  std::optional<double> ratio;
  std::uint64_t queries = 0;
  std::optional<double> wall_ms;
};

struct RunSummary {
  std::size_t ops = 0;
  std::size_t updates = 0;
  std::size_t queries_answered = 0;
  std::size_t asserts = 0;
  std::size_t oracle_skipped = 0;
  std::uint64_t distance_queries = 0;
  double max_ratio = 0.0;
  double amortized_queries = 0.0;  // distance queries per update
};

struct RunReport {
  std::vector<RunRow> rows;
  RunSummary summary;
};

struct RunOptions {
  bool oracle = false;
  bool timing = false;
};

// Replays the stream. Keys are registered with the oracle on insert and
// retired on delete; a malformed op raises StreamError with its line.
RunReport RunStream(MetricOracle& oracle, const std::vector<StreamOp>& ops, const ClustererConfig& config,
                    const RunOptions& options);

// Exact optimum of the objective on the points, or nullopt beyond the exact
// solvers' budgets.
std::optional<double> ExactOptimum(const MetricOracle& oracle, std::span<const PointId> points,
                                   RunObjective objective, std::size_t k);

void WriteReportCsv(std::ostream& out, const RunReport& report);
void WriteSummary(std::ostream& out, const RunSummary& summary);

}  // namespace dynclust

#endif  // DYNCLUST_RUNNER_HPP_
