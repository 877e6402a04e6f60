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

#include "dynclust/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dynclust/clustering_tree.hpp"
#include "dynclust/kcenter_fully.hpp"
#include "dynclust/sum_of_radii.hpp"

namespace dynclust {

namespace {

template <EstimateInstance Instance>
class LadderClusterer final : public DynamicClusterer {
 public:
  LadderClusterer(const LadderConfig& config, const typename GuessLadder<Instance>::Factory& make)
      : ladder_(config, make) {}

  void Insert(PointId p) override { ladder_.Insert(p); }
  void Delete(PointId p) override { ladder_.Delete(p); }
  LadderAnswer Query() const override { return ladder_.Query(); }
  std::size_t num_rungs() const override { return ladder_.num_rungs(); }
  std::string Audit() const override {
    std::string out;
    for (std::size_t i = 0; i < ladder_.num_rungs(); ++i) {
      const std::string err = ladder_.instance(i).Audit();
      if (!err.empty()) out += "rung " + std::to_string(i) + ": " + err;
    }
    return out;
  }

 private:
  GuessLadder<Instance> ladder_;
};

std::string FormatDouble(double v) {
  std::ostringstream out;
  out << std::setprecision(9) << v;
  return out.str();
}

}  // namespace

RunObjective ParseRunObjective(std::string_view name) {
  for (RunObjective o : {RunObjective::kKCenter, RunObjective::kKCenterDeterministic, RunObjective::kSumOfRadii,
                         RunObjective::kSumOfDiameters}) {
    if (name == RunObjectiveName(o)) return o;
  }
  throw ContractError("unknown objective '" + std::string(name) + "'");
}

const char* RunObjectiveName(RunObjective objective) {
  switch (objective) {
    case RunObjective::kKCenter:
      return "kcenter";
    case RunObjective::kKCenterDeterministic:
      return "kcenter-det";
    case RunObjective::kSumOfRadii:
      return "sor";
    case RunObjective::kSumOfDiameters:
      return "sod";
  }
  return "unknown";
}

std::unique_ptr<DynamicClusterer> MakeClusterer(const MetricOracle& oracle, const ClustererConfig& config) {
  if (!(config.delta >= 1.0)) throw ContractError("delta must be at least 1");
  LadderConfig ladder;
  ladder.epsilon = config.epsilon;
  ladder.k = config.k;
  ladder.range_top = config.delta;
  const MetricOracle* o = &oracle;
  switch (config.objective) {
    case RunObjective::kKCenter:
      return std::make_unique<LadderClusterer<FullyDynamicKCenter>>(
          ladder, [o, config](double est, std::size_t rung) {
            return std::make_unique<FullyDynamicKCenter>(*o, config.k, est, config.seed + rung);
          });
    case RunObjective::kKCenterDeterministic:
      return std::make_unique<LadderClusterer<ClusteringTree>>(ladder, [o, config](double est, std::size_t) {
        return std::make_unique<ClusteringTree>(*o, config.k, est);
      });
    case RunObjective::kSumOfRadii:
    case RunObjective::kSumOfDiameters: {
      if (!HasIntegralInverse(config.epsilon)) throw ContractError("sum objectives need 1/epsilon integral");
      ladder.range_top = static_cast<double>(config.k) * config.delta;
      ladder.selection = LadderSelection::kMinimumCost;
      const Objective view =
          config.objective == RunObjective::kSumOfRadii ? Objective::kSumOfRadii : Objective::kSumOfDiameters;
      return std::make_unique<LadderClusterer<PrimalDualSumOfRadii>>(
          ladder, [o, config, view](double est, std::size_t rung) {
            SumOfRadiiParams p;
            p.k = config.k;
            p.epsilon = config.epsilon;
            p.opt_estimate = est;
            p.seed = config.seed + rung;
            p.offline = config.offline;
            p.view = view;
            return std::make_unique<PrimalDualSumOfRadii>(*o, p);
          });
    }
  }
  throw ContractError("unknown objective");
}

std::optional<double> ExactOptimum(const MetricOracle& oracle, std::span<const PointId> points,
                                   RunObjective objective, std::size_t k) {
  try {
    switch (objective) {
      case RunObjective::kKCenter:
      case RunObjective::kKCenterDeterministic:
        return ExactKCenter(oracle, points, k).cost;
      case RunObjective::kSumOfRadii:
        return ExactSumOfRadii(oracle, points, k).cost;
      case RunObjective::kSumOfDiameters:
        return ExactSumOfDiameters(oracle, points, k).cost;
    }
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  return std::nullopt;
}

RunReport RunStream(MetricOracle& oracle, const std::vector<StreamOp>& ops, const ClustererConfig& config,
                    const RunOptions& options) {
  auto clusterer = MakeClusterer(oracle, config);
  RunReport report;
  const std::uint64_t start_queries = oracle.query_count();
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const StreamOp& op = ops[i];
    const std::size_t line = op.line ? op.line : i + 1;
    RunRow row;
    row.index = i;
    row.kind = op.kind;
    row.key = op.key;
    const auto started = std::chrono::steady_clock::now();
    switch (op.kind) {
      case StreamOp::Kind::kInsert: {
        if (oracle.LiveByKey(op.key)) throw StreamError(line, "insert of live key '" + op.key + "'");
        PointId p;
        try {
          p = oracle.RegisterPoint(op.key);
        } catch (const ContractError& e) {
          throw StreamError(line, e.what());
        }
        clusterer->Insert(p);
        ++report.summary.updates;
        break;
      }
      case StreamOp::Kind::kDelete: {
        const auto p = oracle.LiveByKey(op.key);
        if (!p) throw StreamError(line, "delete of key '" + op.key + "' that is not live");
        clusterer->Delete(*p);
        oracle.RetirePoint(*p);
        ++report.summary.updates;
        break;
      }
      case StreamOp::Kind::kQueryValue:
      case StreamOp::Kind::kQuerySolution: {
        const LadderAnswer answer = clusterer->Query();
        ++report.summary.queries_answered;
        if (!answer.solution) {
          row.asserted = true;
          ++report.summary.asserts;
        } else {
          row.cost = answer.solution->cost;
          row.estimate = answer.estimate;
          if (op.kind == StreamOp::Kind::kQuerySolution) row.centers = answer.solution->clusters.size();
        }
        break;
      }
    }
    const auto finished = std::chrono::steady_clock::now();
    if (options.timing) row.wall_ms = std::chrono::duration<double, std::milli>(finished - started).count();
    if (options.oracle && (op.kind == StreamOp::Kind::kQueryValue || op.kind == StreamOp::Kind::kQuerySolution)) {
      const auto live = oracle.LivePoints();
      row.oracle_cost = ExactOptimum(oracle, live, config.objective, config.k);
      if (!row.oracle_cost) {
        ++report.summary.oracle_skipped;
      } else if (row.cost) {
        row.ratio = *row.oracle_cost > 0.0 ? *row.cost / *row.oracle_cost : (*row.cost == 0.0 ? 1.0 : INFINITY);
        report.summary.max_ratio = std::max(report.summary.max_ratio, *row.ratio);
      }
    }
    row.queries = oracle.query_count() - start_queries;
    report.rows.push_back(std::move(row));
  }
  report.summary.ops = ops.size();
  report.summary.distance_queries = oracle.query_count() - start_queries;
  report.summary.amortized_queries =
      report.summary.updates == 0
          ? 0.0
          : static_cast<double>(report.summary.distance_queries) / static_cast<double>(report.summary.updates);
  return report;
}

void WriteReportCsv(std::ostream& out, const RunReport& report) {
  out << "index,kind,key,status,cost,estimate,centers,oracle_cost,ratio,queries,wall_ms\n";
  auto opt = [](const std::optional<double>& v) { return v ? FormatDouble(*v) : std::string(); };
  for (const RunRow& r : report.rows) {
    const bool query = r.kind == StreamOp::Kind::kQueryValue || r.kind == StreamOp::Kind::kQuerySolution;
    out << r.index << ',' << KindName(r.kind) << ',' << r.key << ',' << (query ? (r.asserted ? "assert" : "ok") : "")
        << ',' << opt(r.cost) << ',' << opt(r.estimate) << ',' << (r.centers ? std::to_string(*r.centers) : "")
        << ',' << opt(r.oracle_cost) << ',' << opt(r.ratio) << ',' << r.queries << ',' << opt(r.wall_ms) << '\n';
  }
}

void WriteSummary(std::ostream& out, const RunSummary& s) {
  out << "ops: " << s.ops << '\n'
      << "updates: " << s.updates << '\n'
      << "queries answered: " << s.queries_answered << '\n'
      << "asserts: " << s.asserts << '\n'
      << "distance queries: " << s.distance_queries << '\n'
      << "amortized distance queries per update: " << FormatDouble(s.amortized_queries) << '\n'
      << "max oracle ratio: " << FormatDouble(s.max_ratio) << '\n'
      << "oracle skipped (beyond exact budget): " << s.oracle_skipped << '\n';
}

}  // namespace dynclust
