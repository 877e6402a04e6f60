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

#ifndef DYNCLUST_ADVERSARY_HPP_
#define DYNCLUST_ADVERSARY_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Query budget per operation as a function of k and the operation index.
using BudgetFn = std::function<double(std::size_t k, std::size_t t)>;

enum class VertexLabel { kActive, kPassive, kOff };

struct AdversaryOp {
  enum class Kind { kInsert, kDelete };
  Kind kind;
  std::uint32_t vertex;
};

struct LoggedAnswer {
  std::uint32_t u;
  std::uint32_t v;
  double answer;
  std::size_t op;
};

// Adaptive adversary that builds the metric while answering. Every answer is
// a shortest-path length in the graph of recorded answers augmented by unit
// edges between all active vertices; a used active-active hop becomes a real
// edge. Vertices reaching the degree threshold turn passive and are deleted
// by the following operations.
class AdaptiveAdversary {
 public:
  AdaptiveAdversary(std::size_t k, BudgetFn budget, double range_cap = 1e6);

  AdversaryOp NextOp();
  double Answer(std::uint32_t u, std::uint32_t v);

  std::size_t op_index() const { return t_; }
  std::size_t num_vertices() const { return adj_.size(); }
  VertexLabel label(std::uint32_t v) const { return label_.at(v); }
  std::size_t degree(std::uint32_t v) const { return adj_.at(v).size(); }
  const std::vector<std::vector<std::uint32_t>>& adjacency() const { return adj_; }
  std::size_t active_count() const { return active_; }
  std::size_t passive_count() const { return passive_.size(); }
  std::size_t max_degree() const { return max_degree_; }
  double degree_threshold() const;
  double range_cap() const { return cap_; }
  // No passive vertex right now.
  bool clean() const { return passive_.empty(); }
  std::vector<std::uint32_t> ActiveVertices() const;

  const std::vector<LoggedAnswer>& log() const { return log_; }
  std::size_t capped_answers() const { return capped_answers_; }
  // clean_before_op()[t] for t >= 1: no passive vertex when operation t began.
  const std::vector<bool>& clean_before_op() const { return clean_before_; }
  // active_after_op()[t]: active vertices when operation t + 1 began.
  const std::vector<std::size_t>& active_after_op() const { return active_after_; }
  // Closes the bookkeeping of the last generated operation.
  void FinishOperation();

  // Labels and degree bookkeeping, degree cap, and that re-asking logged
  // queries would return the logged answers in the current graph (sampled
  // when the log is long).
  std::string Audit(std::size_t max_checked_queries = 2000) const;

 private:
  std::vector<std::pair<std::uint32_t, std::size_t>> Bfs(std::uint32_t src, std::size_t max_depth,
                                                          std::size_t stop_after_actives) const;
  void AddEdge(std::uint32_t a, std::uint32_t b);

  std::size_t k_;
  BudgetFn budget_;
  double cap_;
  std::size_t t_ = 0;
  bool finished_ = true;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<VertexLabel> label_;
  std::size_t active_ = 0;
  std::set<std::uint32_t> passive_;
  std::size_t max_degree_ = 0;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> answered_;
  std::vector<LoggedAnswer> log_;
  std::size_t capped_answers_ = 0;
  std::vector<bool> clean_before_{true};
  std::vector<std::size_t> active_after_{0};
};

// Distance backend that forwards every query to an adversary. Sites are
// adversary vertices.
class AdversaryBackend final : public MetricBackend {
 public:
  explicit AdversaryBackend(AdaptiveAdversary& adversary) : adversary_(&adversary) {}

  std::size_t num_sites() const override { return 0; }
  double SiteDistance(std::size_t a, std::size_t b) const override;

 private:
  AdaptiveAdversary* adversary_;
};

// Shortest-path metric of a recorded graph plus unit cliques over groups of
// active vertices; unreachable pairs sit at the range cap.
class AugmentedGraphMetric {
 public:
  enum class Kind { kUniform, kLayered, kLayeredCollapsed, kFarCollapsed };

  AugmentedGraphMetric(Kind kind, std::vector<std::vector<std::uint32_t>> adjacency,
                       std::vector<std::vector<std::uint32_t>> cliques, double range_cap);

  Kind kind() const { return kind_; }
  std::size_t size() const { return adj_.size(); }
  std::vector<double> Row(std::uint32_t src) const;
  std::vector<std::vector<double>> Matrix() const;
  double Distance(std::uint32_t a, std::uint32_t b) const { return Row(a)[b]; }

  // Every logged answer equals the metric distance. Checks all sources when
  // there are at most max_sources of them, otherwise a seeded sample.
  std::string CheckAnswers(const std::vector<LoggedAnswer>& log, std::size_t max_sources,
                           std::uint64_t seed) const;
  // Triangle inequality: exhaustive up to exhaustive_limit vertices, otherwise
  // all triples with two endpoints among sampled rows.
  std::string CheckTriangle(std::size_t exhaustive_limit, std::size_t sampled_rows,
                            std::uint64_t seed) const;

 private:
  Kind kind_;
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::vector<std::uint32_t>> cliques_;
  std::vector<std::vector<std::uint32_t>> clique_of_;
  double cap_;
};

const char* MetricKindName(AugmentedGraphMetric::Kind kind);

// Consistent metrics at a clean operation, built around an active vertex.
struct CleanSnapshot {
  std::size_t op = 0;
  std::size_t live = 0;
  std::uint32_t anchor = 0;
  // Graph distance from the anchor for active vertices; actives outside its
  // component get one more than the largest layer. Non-active vertices -1.
  std::vector<int> layer;
  int max_layer = 0;
  std::vector<AugmentedGraphMetric> metrics;
};

struct SnapshotOptions {
  // Layers at most this index collapse into one clique, and likewise layers
  // from the upper index on; negative picks a third and two thirds of the
  // largest layer.
  int lower_collapse = -1;
  int upper_collapse = -1;
  // Far-collapse metric: actives at graph distance at least far_radius from
  // far_centers form a clique.
  std::vector<std::uint32_t> far_centers;
  int far_radius = 1;
};

// Requires a clean operation. The anchor is the far end of a double BFS sweep
// over the active vertices.
CleanSnapshot TakeCleanSnapshot(const AdaptiveAdversary& adversary, const SnapshotOptions& options);

// Layer count that the degree bound forces: floor(log(n/2)/log(cap + 2)).
int ForcedLayerCount(std::size_t live, double degree_cap);

// Budgeted algorithm used to exercise the adversary.
class ProbingAlgorithm {
 public:
  virtual ~ProbingAlgorithm() = default;
  virtual void Insert(PointId p) = 0;
  virtual void Delete(PointId p) = 0;
  virtual std::vector<PointId> Centers() const = 0;
  // The algorithm's own estimate of its cost.
  virtual double ReportedCost() const = 0;
};

// One-center reference algorithm: keeps one center, probes each new point
// against it and against up to budget - 1 random live points, and replaces a
// deleted center by the most recent live point.
class StarProber final : public ProbingAlgorithm {
 public:
  StarProber(const MetricOracle& oracle, std::size_t probes_per_insert, std::uint64_t seed);

  void Insert(PointId p) override;
  void Delete(PointId p) override;
  std::vector<PointId> Centers() const override;
  double ReportedCost() const override { return reported_; }

 private:
  const MetricOracle* oracle_;
  std::size_t probes_;
  std::mt19937_64 rng_;
  std::vector<PointId> live_;
  std::map<PointId, std::size_t> pos_;
  std::optional<PointId> center_;
  std::map<PointId, double> to_center_;
  double reported_ = 0.0;
};

struct SnapshotStats {
  std::size_t op = 0;
  std::size_t live = 0;
  int max_layer = 0;
  int forced_layers = 0;
  // Fraction of active vertices within forced_layers - 1 of the anchor.
  double near_fraction = 0.0;
  // Algorithm cost under the uniform metric and under the layered metric,
  // and a lower bound on the layered cost ratio against its optimum.
  double uniform_cost = 0.0;
  double layered_cost = 0.0;
  double layered_opt_upper = 0.0;
  double gap_lower_bound = 0.0;
  bool audited = false;
  std::string audit_errors;
};

struct AdaptiveRunReport {
  std::size_t ops = 0;
  std::uint64_t queries = 0;
  bool budget_violated = false;
  double min_active_margin = 0.0;  // min over t of active / (0.96 t)
  double max_degree_ratio = 0.0;   // max degree / (100 f)
  bool clean_window_ok = true;     // a clean operation in every (t, 2t]
  std::size_t clean_ops = 0;
  std::size_t capped_answers = 0;
  std::string audit_errors;
  std::vector<SnapshotStats> snapshots;
  std::vector<AdversaryOp> stream;
};

struct AdaptiveRunConfig {
  std::size_t k = 1;
  std::size_t ops = 10000;
  double budget = 5.0;
  std::uint64_t seed = 0;
  // A snapshot is taken at the first clean operation at or after each
  // multiple of this interval.
  std::size_t snapshot_every = 1000;
  // Full metric audits up to this many vertices, sampled above.
  std::size_t full_audit_limit = 2000;
};

// Drives a StarProber with the given per-insert budget against a fresh
// adversary and gathers the invariant checks and gap statistics.
AdaptiveRunReport RunAdaptiveHarness(const AdaptiveRunConfig& config);

}  // namespace dynclust

#endif  // DYNCLUST_ADVERSARY_HPP_
