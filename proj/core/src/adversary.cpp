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

#include "dynclust/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace dynclust {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::pair<std::uint32_t, std::uint32_t> PairKey(std::uint32_t u, std::uint32_t v) {
  return u < v ? std::make_pair(u, v) : std::make_pair(v, u);
}

bool Adjacent(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t a, std::uint32_t b) {
  const auto& small = adj[a].size() <= adj[b].size() ? adj[a] : adj[b];
  const std::uint32_t other = adj[a].size() <= adj[b].size() ? b : a;
  return std::find(small.begin(), small.end(), other) != small.end();
}

// Plain graph distances from a set of sources, unreached entries kUnreached.
std::vector<std::size_t> GraphDistances(const std::vector<std::vector<std::uint32_t>>& adj,
                                        const std::vector<std::uint32_t>& sources) {
  std::vector<std::size_t> dist(adj.size(), kUnreached);
  std::deque<std::uint32_t> queue;
  for (std::uint32_t s : sources) {
    if (dist[s] == kUnreached) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    const std::uint32_t x = queue.front();
    queue.pop_front();
    for (std::uint32_t y : adj[x]) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

}  // namespace

AdaptiveAdversary::AdaptiveAdversary(std::size_t k, BudgetFn budget, double range_cap)
    : k_(k), budget_(std::move(budget)), cap_(range_cap) {
  if (!budget_) throw ContractError("budget function required");
  if (!(range_cap > 1.0)) throw ContractError("range cap must exceed 1");
}

double AdaptiveAdversary::degree_threshold() const {
  return 100.0 * budget_(k_, std::max<std::size_t>(t_, 1));
}

std::vector<std::uint32_t> AdaptiveAdversary::ActiveVertices() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < label_.size(); ++v) {
    if (label_[v] == VertexLabel::kActive) out.push_back(v);
  }
  return out;
}

void AdaptiveAdversary::FinishOperation() {
  if (finished_) return;
  active_after_.push_back(active_);
  finished_ = true;
}

AdversaryOp AdaptiveAdversary::NextOp() {
  FinishOperation();
  ++t_;
  finished_ = false;
  clean_before_.push_back(passive_.empty());
  if (!passive_.empty()) {
    const std::uint32_t x = *passive_.begin();
    passive_.erase(passive_.begin());
    label_[x] = VertexLabel::kOff;
    return {AdversaryOp::Kind::kDelete, x};
  }
  const auto x = static_cast<std::uint32_t>(adj_.size());
  adj_.emplace_back();
  label_.push_back(VertexLabel::kActive);
  ++active_;
  return {AdversaryOp::Kind::kInsert, x};
}

void AdaptiveAdversary::AddEdge(std::uint32_t a, std::uint32_t b) {
  adj_[a].push_back(b);
  adj_[b].push_back(a);
  const double threshold = degree_threshold();
  for (std::uint32_t x : {a, b}) {
    max_degree_ = std::max(max_degree_, adj_[x].size());
    if (label_[x] == VertexLabel::kActive && static_cast<double>(adj_[x].size()) >= threshold) {
      label_[x] = VertexLabel::kPassive;
      --active_;
      passive_.insert(x);
    }
  }
}

std::vector<std::pair<std::uint32_t, std::size_t>> AdaptiveAdversary::Bfs(std::uint32_t src,
                                                                          std::size_t max_depth,
                                                                          std::size_t stop_after_actives) const {
  std::vector<std::pair<std::uint32_t, std::size_t>> order;
  std::vector<std::size_t> dist(adj_.size(), kUnreached);
  std::size_t actives = 0;
  dist[src] = 0;
  order.emplace_back(src, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    const auto [x, d] = order[head];
    if (label_[x] == VertexLabel::kActive && ++actives >= stop_after_actives) break;
    if (d >= max_depth) continue;
    for (std::uint32_t y : adj_[x]) {
      if (dist[y] == kUnreached) {
        dist[y] = d + 1;
        order.emplace_back(y, d + 1);
      }
    }
  }
  return order;
}

double AdaptiveAdversary::Answer(std::uint32_t u, std::uint32_t v) {
  if (u >= adj_.size() || v >= adj_.size()) throw ContractError("query on a point never inserted");
  if (u == v) return 0.0;
  const auto key = PairKey(u, v);
  if (auto it = answered_.find(key); it != answered_.end()) return it->second;

  double answer;
  if (label_[u] == VertexLabel::kActive && label_[v] == VertexLabel::kActive) {
    if (!Adjacent(adj_, u, v)) AddEdge(u, v);
    answer = 1.0;
  } else {
    // Two nearest active vertices on v's side.
    std::vector<std::pair<std::uint32_t, std::size_t>> near_v;
    for (const auto& [x, d] : Bfs(v, kUnreached, 2)) {
      if (label_[x] == VertexLabel::kActive) near_v.emplace_back(x, d);
    }
    // Level-by-level search from u, up to the best length found so far.
    std::size_t best = kUnreached;
    bool use_hop = false;
    std::uint32_t hop_from = 0;
    std::uint32_t hop_to = 0;
    std::vector<std::size_t> dist(adj_.size(), kUnreached);
    std::vector<std::uint32_t> frontier{u};
    dist[u] = 0;
    for (std::size_t level = 0; !frontier.empty() && (best == kUnreached || level <= best); ++level) {
      std::vector<std::uint32_t> next;
      for (std::uint32_t x : frontier) {
        if (x == v && level <= best) {
          best = level;
          use_hop = false;
        }
        if (label_[x] == VertexLabel::kActive) {
          for (const auto& [b, db] : near_v) {
            if (b == x) continue;
            const std::size_t via = level + 1 + db;
            if (via < best) {
              best = via;
              use_hop = true;
              hop_from = x;
              hop_to = b;
            }
          }
        }
        for (std::uint32_t y : adj_[x]) {
          if (dist[y] == kUnreached) {
            dist[y] = level + 1;
            next.push_back(y);
          }
        }
      }
      frontier.swap(next);
    }
    if (best == kUnreached) {
      ++capped_answers_;
      answer = cap_;
    } else {
      if (use_hop) AddEdge(hop_from, hop_to);
      answer = static_cast<double>(best);
    }
  }
  answered_.emplace(key, answer);
  log_.push_back({u, v, answer, t_});
  return answer;
}

std::string AdaptiveAdversary::Audit(std::size_t max_checked_queries) const {
  std::ostringstream err;
  std::size_t active = 0;
  std::size_t passive = 0;
  for (std::uint32_t x = 0; x < adj_.size(); ++x) {
    if (label_[x] == VertexLabel::kActive) ++active;
    if (label_[x] == VertexLabel::kPassive) {
      ++passive;
      if (passive_.count(x) == 0) err << "passive vertex missing from the queue; ";
    }
    for (std::uint32_t y : adj_[x]) {
      if (!Adjacent(adj_, y, x)) err << "asymmetric edge; ";
    }
  }
  if (active != active_ || passive != passive_.size()) err << "label counts mismatch; ";
  if (static_cast<double>(max_degree_) > std::ceil(degree_threshold())) err << "degree above 100f; ";

  const std::size_t stride = std::max<std::size_t>(1, log_.size() / std::max<std::size_t>(1, max_checked_queries));
  for (std::size_t i = 0; i < log_.size(); i += stride) {
    const LoggedAnswer& q = log_[i];
    const bool capped = q.answer >= cap_;
    const std::size_t depth = capped ? kUnreached : static_cast<std::size_t>(q.answer);
    std::size_t found = kUnreached;
    for (const auto& [x, d] : Bfs(q.u, depth, kUnreached)) {
      if (x == q.v) {
        found = d;
        break;
      }
    }
    const bool ok = capped ? found == kUnreached : found == depth;
    if (!ok) err << "logged answer " << q.u << "-" << q.v << " no longer a graph distance; ";
  }
  return err.str();
}

double AdversaryBackend::SiteDistance(std::size_t a, std::size_t b) const {
  return adversary_->Answer(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
}

AugmentedGraphMetric::AugmentedGraphMetric(Kind kind, std::vector<std::vector<std::uint32_t>> adjacency,
                                           std::vector<std::vector<std::uint32_t>> cliques, double range_cap)
    : kind_(kind), adj_(std::move(adjacency)), cliques_(std::move(cliques)), clique_of_(adj_.size()),
      cap_(range_cap) {
  for (std::uint32_t c = 0; c < cliques_.size(); ++c) {
    for (std::uint32_t x : cliques_[c]) clique_of_.at(x).push_back(c);
  }
}

std::vector<double> AugmentedGraphMetric::Row(std::uint32_t src) const {
  std::vector<std::size_t> dist(adj_.size(), kUnreached);
  std::vector<bool> expanded(cliques_.size(), false);
  std::deque<std::uint32_t> queue{src};
  dist[src] = 0;
  while (!queue.empty()) {
    const std::uint32_t x = queue.front();
    queue.pop_front();
    auto reach = [&](std::uint32_t y) {
      if (dist[y] == kUnreached) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    };
    for (std::uint32_t y : adj_[x]) reach(y);
    for (std::uint32_t c : clique_of_[x]) {
      if (expanded[c]) continue;
      expanded[c] = true;
      for (std::uint32_t y : cliques_[c]) reach(y);
    }
  }
  std::vector<double> row(adj_.size());
  for (std::size_t i = 0; i < row.size(); ++i) {
    row[i] = dist[i] == kUnreached ? cap_ : static_cast<double>(dist[i]);
  }
  return row;
}

std::vector<std::vector<double>> AugmentedGraphMetric::Matrix() const {
  std::vector<std::vector<double>> rows;
  rows.reserve(adj_.size());
  for (std::uint32_t x = 0; x < adj_.size(); ++x) rows.push_back(Row(x));
  return rows;
}

std::string AugmentedGraphMetric::CheckAnswers(const std::vector<LoggedAnswer>& log, std::size_t max_sources,
                                               std::uint64_t seed) const {
  std::map<std::uint32_t, std::vector<const LoggedAnswer*>> by_source;
  for (const LoggedAnswer& q : log) by_source[q.u].push_back(&q);
  std::vector<std::uint32_t> sources;
  for (const auto& [u, list] : by_source) sources.push_back(u);
  if (sources.size() > max_sources) {
    std::mt19937_64 rng(seed);
    std::shuffle(sources.begin(), sources.end(), rng);
    sources.resize(max_sources);
  }
  std::ostringstream err;
  for (std::uint32_t u : sources) {
    const auto row = Row(u);
    for (const LoggedAnswer* q : by_source[u]) {
      if (row[q->v] != q->answer) {
        err << MetricKindName(kind_) << " disagrees with answer " << q->u << "-" << q->v << "; ";
      }
    }
  }
  return err.str();
}

std::string AugmentedGraphMetric::CheckTriangle(std::size_t exhaustive_limit, std::size_t sampled_rows,
                                                std::uint64_t seed) const {
  std::ostringstream err;
  const std::size_t n = adj_.size();
  std::vector<std::uint32_t> picks;
  if (n <= exhaustive_limit) {
    for (std::uint32_t x = 0; x < n; ++x) picks.push_back(x);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (std::size_t i = 0; i < sampled_rows; ++i) picks.push_back(pick(rng));
  }
  std::vector<std::vector<double>> rows;
  for (std::uint32_t x : picks) rows.push_back(Row(x));
  for (std::size_t a = 0; a < picks.size(); ++a) {
    for (std::size_t b = a + 1; b < picks.size(); ++b) {
      const double dab = rows[a][picks[b]];
      if (dab != rows[b][picks[a]]) {
        err << MetricKindName(kind_) << " asymmetric; ";
        return err.str();
      }
      for (std::size_t w = 0; w < n; ++w) {
        if (std::abs(rows[a][w] - rows[b][w]) > dab) {
          err << MetricKindName(kind_) << " violates the triangle inequality; ";
          return err.str();
        }
      }
    }
  }
  return err.str();
}

const char* MetricKindName(AugmentedGraphMetric::Kind kind) {
  switch (kind) {
    case AugmentedGraphMetric::Kind::kUniform:
      return "uniform";
    case AugmentedGraphMetric::Kind::kLayered:
      return "layered";
    case AugmentedGraphMetric::Kind::kLayeredCollapsed:
      return "layered-collapsed";
    case AugmentedGraphMetric::Kind::kFarCollapsed:
      return "far-collapsed";
  }
  return "unknown";
}

int ForcedLayerCount(std::size_t live, double degree_cap) {
  if (live < 4) return 0;
  return static_cast<int>(std::floor(std::log(static_cast<double>(live) / 2.0) / std::log(degree_cap + 2.0)));
}

CleanSnapshot TakeCleanSnapshot(const AdaptiveAdversary& adversary, const SnapshotOptions& options) {
  if (!adversary.clean()) throw ContractError("snapshot requested at an operation that is not clean");
  const auto& adj = adversary.adjacency();
  const auto actives = adversary.ActiveVertices();
  CleanSnapshot snap;
  snap.op = adversary.op_index();
  snap.live = actives.size();
  snap.layer.assign(adj.size(), -1);
  if (actives.empty()) return snap;

  auto farthest_active = [&](std::uint32_t from) {
    const auto dist = GraphDistances(adj, {from});
    std::uint32_t best = from;
    for (std::uint32_t x : actives) {
      if (dist[x] != kUnreached && dist[x] > dist[best]) best = x;
    }
    return best;
  };
  snap.anchor = farthest_active(farthest_active(actives.front()));

  const auto dist = GraphDistances(adj, {snap.anchor});
  for (std::uint32_t x : actives) {
    if (dist[x] != kUnreached) snap.max_layer = std::max(snap.max_layer, static_cast<int>(dist[x]));
  }
  bool outside = false;
  for (std::uint32_t x : actives) {
    if (dist[x] == kUnreached) {
      snap.layer[x] = snap.max_layer + 1;
      outside = true;
    } else {
      snap.layer[x] = static_cast<int>(dist[x]);
    }
  }
  if (outside) ++snap.max_layer;

  std::vector<std::vector<std::uint32_t>> by_layer(snap.max_layer + 1);
  for (std::uint32_t x : actives) by_layer[snap.layer[x]].push_back(x);
  std::vector<std::vector<std::uint32_t>> layered;
  for (int i = 0; i <= snap.max_layer; ++i) {
    std::vector<std::uint32_t> clique = by_layer[i];
    if (i < snap.max_layer) clique.insert(clique.end(), by_layer[i + 1].begin(), by_layer[i + 1].end());
    layered.push_back(std::move(clique));
  }
  const double cap = adversary.range_cap();
  snap.metrics.emplace_back(AugmentedGraphMetric::Kind::kUniform, adj,
                            std::vector<std::vector<std::uint32_t>>{actives}, cap);
  snap.metrics.emplace_back(AugmentedGraphMetric::Kind::kLayered, adj, layered, cap);

  const int lower = options.lower_collapse >= 0 ? options.lower_collapse : snap.max_layer / 3;
  const int upper = options.upper_collapse >= 0 ? options.upper_collapse
                                                : std::max(lower + 1, 2 * snap.max_layer / 3);
  if (lower >= upper) throw ContractError("collapse thresholds must satisfy lower < upper");
  auto collapsed = layered;
  std::vector<std::uint32_t> low_group;
  std::vector<std::uint32_t> high_group;
  for (std::uint32_t x : actives) {
    if (snap.layer[x] <= lower) low_group.push_back(x);
    if (snap.layer[x] >= upper) high_group.push_back(x);
  }
  collapsed.push_back(std::move(low_group));
  collapsed.push_back(std::move(high_group));
  snap.metrics.emplace_back(AugmentedGraphMetric::Kind::kLayeredCollapsed, adj, std::move(collapsed), cap);

  std::vector<std::uint32_t> far_group;
  const auto from_centers = GraphDistances(adj, options.far_centers);
  for (std::uint32_t x : actives) {
    if (from_centers[x] == kUnreached || from_centers[x] >= static_cast<std::size_t>(std::max(options.far_radius, 0))) {
      far_group.push_back(x);
    }
  }
  snap.metrics.emplace_back(AugmentedGraphMetric::Kind::kFarCollapsed, adj,
                            std::vector<std::vector<std::uint32_t>>{std::move(far_group)}, cap);
  return snap;
}

StarProber::StarProber(const MetricOracle& oracle, std::size_t probes_per_insert, std::uint64_t seed)
    : oracle_(&oracle), probes_(probes_per_insert), rng_(seed) {}

void StarProber::Insert(PointId p) {
  std::size_t budget = probes_;
  if (!center_) {
    center_ = p;
  } else if (budget > 0) {
    const double d = oracle_->Distance(p, *center_);
    to_center_[p] = d;
    reported_ = std::max(reported_, d);
    --budget;
  }
  for (std::size_t i = 0; i < budget && !live_.empty(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, live_.size() - 1);
    const PointId q = live_[pick(rng_)];
    oracle_->Distance(p, q);
  }
  pos_[p] = live_.size();
  live_.push_back(p);
}

void StarProber::Delete(PointId p) {
  const std::size_t at = pos_.at(p);
  live_[at] = live_.back();
  pos_[live_[at]] = at;
  live_.pop_back();
  pos_.erase(p);
  to_center_.erase(p);
  if (center_ && *center_ == p) {
    center_.reset();
    to_center_.clear();
    reported_ = 0.0;
    if (!live_.empty()) center_ = live_.back();
  } else {
    reported_ = 0.0;
    for (const auto& [q, d] : to_center_) reported_ = std::max(reported_, d);
  }
}

std::vector<PointId> StarProber::Centers() const {
  if (!center_) return {};
  return {*center_};
}

AdaptiveRunReport RunAdaptiveHarness(const AdaptiveRunConfig& config) {
  const double budget = config.budget;
  BudgetFn f = [budget](std::size_t, std::size_t) { return budget; };
  AdaptiveAdversary adversary(config.k, f);
  MetricOracle oracle(std::make_unique<AdversaryBackend>(adversary));
  StarProber prober(oracle, static_cast<std::size_t>(std::floor(budget)), config.seed);

  AdaptiveRunReport report;
  report.min_active_margin = std::numeric_limits<double>::infinity();
  double allowance = 0.0;
  std::size_t next_snapshot = config.snapshot_every;
  for (std::size_t t = 1; t <= config.ops; ++t) {
    const AdversaryOp op = adversary.NextOp();
    report.stream.push_back(op);
    if (op.kind == AdversaryOp::Kind::kInsert) {
      const PointId p = oracle.RegisterSite(op.vertex);
      if (Index(p) != op.vertex) throw ContractError("point and vertex numbering diverged");
      prober.Insert(p);
    } else {
      const PointId p = MakePointId(op.vertex);
      prober.Delete(p);
      oracle.RetirePoint(p);
    }
    adversary.FinishOperation();
    allowance += f(config.k, t);
    if (static_cast<double>(oracle.query_count()) > allowance + 1e-9) report.budget_violated = true;
    report.min_active_margin =
        std::min(report.min_active_margin, static_cast<double>(adversary.active_count()) / (0.96 * t));
    report.max_degree_ratio = std::max(report.max_degree_ratio,
                                       static_cast<double>(adversary.max_degree()) / adversary.degree_threshold());

    if (config.snapshot_every > 0 && t >= next_snapshot && adversary.clean()) {
      next_snapshot = (t / config.snapshot_every + 1) * config.snapshot_every;
      SnapshotStats stats;
      stats.op = t;
      SnapshotOptions options;
      for (PointId c : prober.Centers()) options.far_centers.push_back(Index(c));
      stats.forced_layers = ForcedLayerCount(adversary.active_count(), adversary.degree_threshold());
      options.far_radius = std::max(1, stats.forced_layers);
      const CleanSnapshot snap = TakeCleanSnapshot(adversary, options);
      stats.live = snap.live;
      stats.max_layer = snap.max_layer;
      std::size_t near = 0;
      for (int layer : snap.layer) {
        if (layer >= 0 && layer <= stats.forced_layers - 1) ++near;
      }
      stats.near_fraction = snap.live == 0 ? 0.0 : static_cast<double>(near) / static_cast<double>(snap.live);

      const auto actives = adversary.ActiveVertices();
      auto cost_of = [&](const AugmentedGraphMetric& metric, const std::vector<std::uint32_t>& centers) {
        std::vector<double> best(metric.size(), std::numeric_limits<double>::infinity());
        for (std::uint32_t c : centers) {
          const auto row = metric.Row(c);
          for (std::size_t i = 0; i < best.size(); ++i) best[i] = std::min(best[i], row[i]);
        }
        double cost = 0.0;
        for (std::uint32_t x : actives) cost = std::max(cost, best[x]);
        return cost;
      };
      const auto& uniform = snap.metrics[0];
      const auto& layered = snap.metrics[1];
      stats.uniform_cost = cost_of(uniform, options.far_centers);
      stats.layered_cost = cost_of(layered, options.far_centers);
      std::vector<std::uint32_t> middle;
      for (std::uint32_t x : actives) {
        const int mid = snap.max_layer / 2;
        if ((snap.layer[x] == mid || snap.layer[x] == (snap.max_layer + 1) / 2) && middle.size() < 16) {
          middle.push_back(x);
        }
      }
      stats.layered_opt_upper = std::numeric_limits<double>::infinity();
      for (std::uint32_t c : middle) stats.layered_opt_upper = std::min(stats.layered_opt_upper, cost_of(layered, {c}));
      if (stats.layered_opt_upper > 0.0 && std::isfinite(stats.layered_opt_upper)) {
        stats.gap_lower_bound = stats.layered_cost / stats.layered_opt_upper;
      }

      const bool full = adversary.num_vertices() <= config.full_audit_limit;
      stats.audited = full;
      std::ostringstream err;
      for (const auto& metric : snap.metrics) {
        err << metric.CheckAnswers(adversary.log(), full ? std::numeric_limits<std::size_t>::max() : 48,
                                   config.seed + t);
        err << metric.CheckTriangle(full ? 150 : 0, 16, config.seed + t);
      }
      stats.audit_errors = err.str();
      report.snapshots.push_back(std::move(stats));
    }
  }
  report.ops = config.ops;
  report.queries = oracle.query_count();
  report.capped_answers = adversary.capped_answers();
  report.audit_errors = adversary.Audit();

  std::vector<bool> clean = adversary.clean_before_op();
  clean.push_back(adversary.clean());
  for (std::size_t t = 1; t < clean.size(); ++t) report.clean_ops += clean[t] ? 1 : 0;
  for (std::size_t t = 1; 2 * t < clean.size(); ++t) {
    bool found = false;
    for (std::size_t s = t + 1; s <= 2 * t && !found; ++s) found = clean[s];
    if (!found) report.clean_window_ok = false;
  }
  return report;
}

}  // namespace dynclust
