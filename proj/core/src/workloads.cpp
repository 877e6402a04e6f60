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

#include "dynclust/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dynclust/adversary.hpp"
#include "dynclust/common.hpp"
#include "dynclust/oblivious.hpp"

namespace dynclust {

namespace {

constexpr std::size_t kMaxMatrixSites = 4000;

class QueryPacer {
 public:
  QueryPacer(std::vector<StreamOp>& ops, std::size_t every) : ops_(ops), every_(every) {}

  void Update(StreamOp op) {
    ops_.push_back(std::move(op));
    if (every_ == 0 || ++since_ < every_) return;
    since_ = 0;
    ops_.push_back({value_next_ ? StreamOp::Kind::kQueryValue : StreamOp::Kind::kQuerySolution, {}, 0});
    value_next_ = !value_next_;
  }

 private:
  std::vector<StreamOp>& ops_;
  std::size_t every_;
  std::size_t since_ = 0;
  bool value_next_ = true;
};

std::string PointKey(std::size_t i) { return "p" + std::to_string(i); }

// Inserts every point in order; after each insert a random live point other
// than the newest is deleted with the given probability.
void InsertDeleteStream(Workload& w, const WorkloadParams& params, std::mt19937_64& rng) {
  QueryPacer pacer(w.ops, params.query_every);
  std::bernoulli_distribution drop(params.delete_fraction);
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < w.keys.size(); ++i) {
    pacer.Update({StreamOp::Kind::kInsert, w.keys[i], 0});
    live.push_back(i);
    if (live.size() > 1 && drop(rng)) {
      std::uniform_int_distribution<std::size_t> pick(0, live.size() - 2);
      const std::size_t at = pick(rng);
      pacer.Update({StreamOp::Kind::kDelete, w.keys[live[at]], 0});
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(at));
    }
  }
}

void UniformPoints(Workload& w, const WorkloadParams& params, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < params.n; ++i) {
    std::vector<double> x(params.dim);
    for (double& c : x) c = unit(rng);
    w.keys.push_back(PointKey(i));
    w.coords.push_back(std::move(x));
  }
}

std::vector<StreamOp> ScriptToOps(const std::vector<ScriptOp>& script) {
  std::vector<StreamOp> ops;
  for (const ScriptOp& s : script) {
    switch (s.kind) {
      case ScriptOp::Kind::kInsert:
        ops.push_back({StreamOp::Kind::kInsert, std::to_string(s.site), 0});
        break;
      case ScriptOp::Kind::kDelete:
        ops.push_back({StreamOp::Kind::kDelete, std::to_string(s.site), 0});
        break;
      case ScriptOp::Kind::kQueryValue:
        ops.push_back({StreamOp::Kind::kQueryValue, {}, 0});
        break;
      case ScriptOp::Kind::kQuerySolution:
        ops.push_back({StreamOp::Kind::kQuerySolution, {}, 0});
        break;
    }
  }
  return ops;
}

Workload AdaptiveWorkload(const WorkloadParams& params) {
  const double budget = params.budget;
  AdaptiveAdversary adversary(params.k, [budget](std::size_t, std::size_t) { return budget; });
  MetricOracle oracle(std::make_unique<AdversaryBackend>(adversary));
  StarProber prober(oracle, static_cast<std::size_t>(std::floor(budget)), params.seed);
  Workload w;
  QueryPacer pacer(w.ops, params.query_every);
  auto step = [&] {
    const AdversaryOp op = adversary.NextOp();
    const std::string key = std::to_string(op.vertex);
    if (op.kind == AdversaryOp::Kind::kInsert) {
      prober.Insert(oracle.RegisterSite(op.vertex));
      pacer.Update({StreamOp::Kind::kInsert, key, 0});
    } else {
      prober.Delete(MakePointId(op.vertex));
      oracle.RetirePoint(MakePointId(op.vertex));
      pacer.Update({StreamOp::Kind::kDelete, key, 0});
    }
    adversary.FinishOperation();
  };
  for (std::size_t t = 0; t < params.ops; ++t) step();
  while (!adversary.clean()) step();
  if (adversary.num_vertices() > kMaxMatrixSites) throw ContractError("adversary stream too long for a matrix");
  const CleanSnapshot snap = TakeCleanSnapshot(adversary, SnapshotOptions{});
  w.matrix = snap.metrics.at(1).Matrix();
  for (std::size_t i = 0; i < w.matrix.size(); ++i) w.keys.push_back(std::to_string(i));
  return w;
}

Workload ObliviousWorkload(const WorkloadParams& params) {
  ObliviousStream stream(params.k, params.delta, params.blocks, params.seed);
  if (stream.num_sites() > kMaxMatrixSites) throw ContractError("oblivious stream too long for a matrix");
  stream.CloseAll();
  Workload w;
  w.ops = ScriptToOps(stream.Script());
  w.matrix = stream.Matrix();
  for (std::size_t i = 0; i < w.matrix.size(); ++i) w.keys.push_back(std::to_string(i));
  return w;
}

}  // namespace

WorkloadKind ParseWorkloadKind(std::string_view name) {
  for (WorkloadKind kind : {WorkloadKind::kUniformEuclidean, WorkloadKind::kClusteredGaussian,
                            WorkloadKind::kSlidingWindow, WorkloadKind::kAdversaryAdaptive,
                            WorkloadKind::kAdversaryOblivious}) {
    if (name == WorkloadName(kind)) return kind;
  }
  throw ContractError("unknown workload kind '" + std::string(name) + "'");
}

const char* WorkloadName(WorkloadKind kind) {
  switch (kind) {
    case WorkloadKind::kUniformEuclidean:
      return "uniform-euclidean";
    case WorkloadKind::kClusteredGaussian:
      return "clustered-gaussian";
    case WorkloadKind::kSlidingWindow:
      return "sliding-window";
    case WorkloadKind::kAdversaryAdaptive:
      return "adversary-adaptive";
    case WorkloadKind::kAdversaryOblivious:
      return "adversary-oblivious";
  }
  return "unknown";
}

Workload GenerateWorkload(WorkloadKind kind, const WorkloadParams& params) {
  if (params.dim == 0) throw ContractError("dimension must be positive");
  if (params.delete_fraction < 0.0 || params.delete_fraction > 1.0) {
    throw ContractError("delete fraction must lie in [0, 1]");
  }
  std::mt19937_64 rng(params.seed);
  Workload w;
  switch (kind) {
    case WorkloadKind::kUniformEuclidean:
      UniformPoints(w, params, rng);
      InsertDeleteStream(w, params, rng);
      return w;
    case WorkloadKind::kClusteredGaussian: {
      if (params.clusters == 0) throw ContractError("need at least one cluster");
      if (!(params.sigma > 0.0)) throw ContractError("sigma must be positive");
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::normal_distribution<double> noise(0.0, params.sigma);
      std::vector<std::vector<double>> centers(params.clusters, std::vector<double>(params.dim));
      for (auto& c : centers) {
        for (double& x : c) x = unit(rng);
      }
      std::uniform_int_distribution<int> which(0, static_cast<int>(params.clusters) - 1);
      for (std::size_t i = 0; i < params.n; ++i) {
        const int label = which(rng);
        std::vector<double> x = centers[label];
        for (double& c : x) c += noise(rng);
        w.keys.push_back(PointKey(i));
        w.coords.push_back(std::move(x));
        w.labels.push_back(label);
      }
      InsertDeleteStream(w, params, rng);
      return w;
    }
    case WorkloadKind::kSlidingWindow: {
      if (params.window == 0) throw ContractError("window must be positive");
      UniformPoints(w, params, rng);
      QueryPacer pacer(w.ops, params.query_every);
      for (std::size_t i = 0; i < params.n; ++i) {
        pacer.Update({StreamOp::Kind::kInsert, w.keys[i], 0});
        if (i >= params.window) pacer.Update({StreamOp::Kind::kDelete, w.keys[i - params.window], 0});
      }
      return w;
    }
    case WorkloadKind::kAdversaryAdaptive:
      if (params.k == 0 || !(params.budget >= 1.0)) throw ContractError("adaptive stream needs k >= 1 and budget >= 1");
      return AdaptiveWorkload(params);
    case WorkloadKind::kAdversaryOblivious:
      return ObliviousWorkload(params);
  }
  throw ContractError("unknown workload kind");
}

}  // namespace dynclust
