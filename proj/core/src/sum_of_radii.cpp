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

#include "dynclust/sum_of_radii.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dynclust/ladder.hpp"
#include "dynclust/solution.hpp"

namespace dynclust {

PrimalDualSumOfRadii::PrimalDualSumOfRadii(const MetricOracle& oracle, const SumOfRadiiParams& params)
    : meter_(oracle), params_(params), opt_(params.opt_estimate), rng_(params.seed) {
  if (params.k == 0) throw ContractError("k must be positive");
  if (!HasIntegralInverse(params.epsilon)) throw ContractError("1/epsilon must be a positive integer");
  if (!(opt_ > 0.0)) throw ContractError("estimate must be positive");
  if (params.view != Objective::kSumOfRadii && params.view != Objective::kSumOfDiameters) {
    throw ContractError("sum-of-radii structure reports radii or diameters only");
  }
  const auto inv = static_cast<std::int64_t>(std::llround(1.0 / params.epsilon));
  multiples_ = static_cast<std::int64_t>(params.k) * inv;
  checked_multiples_ = params.extended_raise_check ? 2 * multiples_ : multiples_;
  z_ = opt_ / static_cast<double>(multiples_);
  const auto span = static_cast<std::size_t>(2 * multiples_);
  cap_ = span * span + span;
}

double PrimalDualSumOfRadii::CenterDistance(PointId a, PointId b) {
  if (a == b) return 0.0;
  const std::uint64_t lo = std::min(Index(a), Index(b));
  const std::uint64_t hi = std::max(Index(a), Index(b));
  const std::uint64_t key = (hi << 32) | lo;
  auto it = center_distance_.find(key);
  if (it != center_distance_.end()) return it->second;
  const double d = meter_(a, b);
  center_distance_.emplace(key, d);
  return d;
}

void PrimalDualSumOfRadii::Attach(PointId p, int round) {
  auto& list = ListOf(round);
  slot_[p] = Slot{round, list.size()};
  list.push_back(p);
}

void PrimalDualSumOfRadii::Detach(PointId p) {
  const Slot s = slot_.at(p);
  auto& list = ListOf(s.round);
  const PointId moved = list.back();
  list[s.pos] = moved;
  list.pop_back();
  if (moved != p) slot_[moved].pos = s.pos;
  slot_.erase(p);
}

double PrimalDualSumOfRadii::DualTotal() const {
  std::int64_t halves = 0;
  for (const Round& r : rounds_) halves += r.dual_halves;
  return static_cast<double>(halves) * z_ / 2.0;
}

void PrimalDualSumOfRadii::Step() {
  std::uniform_int_distribution<std::size_t> pick(0, uncovered_.size() - 1);
  const PointId p = uncovered_[pick(rng_)];

  // sums[m] = dual mass (in z/2 units) within m*z of p.
  std::vector<std::int64_t> sums(static_cast<std::size_t>(checked_multiples_) + 1, 0);
  for (const Round& r : rounds_) {
    if (r.dual_halves == 0) continue;
    const double d = CenterDistance(p, r.center);
    for (std::int64_t m = checked_multiples_; m >= 1 && d <= Threshold(m); --m) sums[m] += r.dual_halves;
  }
  // Constraint (p, m z) is half-tight at m + 2 units of z/2.
  std::int64_t raise = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t m = 1; m <= checked_multiples_; ++m) raise = std::min(raise, m + 2 - sums[m]);
  raise = std::max<std::int64_t>(raise, 0);
  std::int64_t tight = 0;
  for (std::int64_t m = checked_multiples_; m >= 1; --m) {
    if (sums[m] + raise >= m + 2) {
      tight = m;
      break;
    }
  }
  if (tight == 0) throw ContractError("no half-tight radius after a raise");

  const int id = static_cast<int>(rounds_.size());
  rounds_.push_back(Round{p, raise, tight, {}});
  const double reach = 2.0 * Threshold(tight);
  std::vector<PointId> pool;
  pool.swap(uncovered_);
  for (PointId q : pool) slot_.erase(q);
  for (PointId q : pool) {
    if (meter_(p, q) <= reach) {
      Attach(q, id);
    } else {
      Attach(q, -1);
    }
  }
}

void PrimalDualSumOfRadii::Iterate() {
  while (!uncovered_.empty() && rounds_.size() < cap_) Step();
  capped_ = !uncovered_.empty();
  max_rounds_ = std::max(max_rounds_, rounds_.size());
}

std::vector<PrimalDualSumOfRadii::PrunedCluster> PruneClusters(
    const DistanceFn& dist, std::vector<PrimalDualSumOfRadii::PrunedCluster> clusters) {
  std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
    return a.radius != b.radius ? a.radius > b.radius : a.round < b.round;
  });
  std::vector<PrimalDualSumOfRadii::PrunedCluster> kept;
  for (const auto& c : clusters) {
    bool clash = false;
    for (const auto& other : kept) {
      if (dist(c.center, other.center) < c.radius + other.radius / 3.0) {
        clash = true;
        break;
      }
    }
    if (!clash) kept.push_back({c.center, 3.0 * c.radius, c.round});
  }
  return kept;
}

Solution CombineClusters(const DistanceFn& dist, std::span<const PrimalDualSumOfRadii::PrunedCluster> pruned,
                         const Solution& offline) {
  std::vector<bool> claimed(pruned.size(), false);
  std::vector<Cluster> out;
  for (const Cluster& hat : offline.clusters) {
    double extra = -1.0;
    for (std::size_t i = 0; i < pruned.size(); ++i) {
      if (claimed[i] || dist(hat.center, pruned[i].center) > hat.radius) continue;
      claimed[i] = true;
      extra = std::max(extra, pruned[i].radius);
    }
    if (extra >= 0.0) out.push_back({hat.center, hat.radius + extra});
  }
  if (std::find(claimed.begin(), claimed.end(), false) != claimed.end()) {
    throw ContractError("offline solution does not cover the pruned centers");
  }
  return SumOfRadiiSolution(std::move(out));
}

void PrimalDualSumOfRadii::Refresh() {
  pruned_.clear();
  offline_ = Solution{};
  combined_ = Solution{};
  offline_certified_ = false;
  dual_certified_ = false;
  if (capped_) return;

  std::vector<PrunedCluster> all;
  all.reserve(rounds_.size());
  for (std::size_t i = 0; i < rounds_.size(); ++i) all.push_back({rounds_[i].center, RoundRadius(rounds_[i]), i});
  const DistanceFn dist = [this](PointId a, PointId b) { return CenterDistance(a, b); };
  pruned_ = PruneClusters(dist, std::move(all));

  std::vector<PointId> centers;
  for (const auto& c : pruned_) centers.push_back(c.center);
  DenseDistances table;
  table.n = centers.size();
  table.d.assign(table.n * table.n, 0.0);
  for (std::size_t i = 0; i < table.n; ++i) {
    for (std::size_t j = i + 1; j < table.n; ++j) {
      table.d[i * table.n + j] = table.d[j * table.n + i] = CenterDistance(centers[i], centers[j]);
    }
  }
  IndexedResult solved;
  bool exact = true;
  try {
    solved = SolveSumOfRadii(table, params_.k);
  } catch (const BudgetExceeded&) {
    if (params_.offline == OfflineMode::kExact) throw;
    exact = false;
    const auto greedy = FarthestFirst(table, params_.k);
    std::vector<double> radius(greedy.size(), 0.0);
    for (std::size_t i = 0; i < table.n; ++i) {
      std::size_t owner = 0;
      for (std::size_t c = 1; c < greedy.size(); ++c) {
        if (table(i, greedy[c]) < table(i, greedy[owner])) owner = c;
      }
      radius[owner] = std::max(radius[owner], table(i, greedy[owner]));
    }
    for (std::size_t c = 0; c < greedy.size(); ++c) {
      solved.clusters.push_back({greedy[c], radius[c]});
      solved.cost += radius[c];
    }
  }
  if (solved.clusters.size() > params_.k) throw ContractError("offline solution has more than k clusters");
  std::vector<Cluster> hat;
  for (const IndexCluster& c : solved.clusters) hat.push_back({centers[c.center], c.radius});
  offline_ = SumOfRadiiSolution(std::move(hat));
  // The pruned centers admit k clusters of total radius at most twice the
  // optimum, so an exact offline cost above twice the estimate is a proof.
  offline_certified_ = params_.certify_with_offline && exact && offline_.cost > 2.0 * opt_ * (1.0 + 1e-12);
  combined_ = CombineClusters(dist, pruned_, offline_);
  dual_certified_ = params_.certify_with_dual && combined_.cost > (8.0 + params_.epsilon) * opt_ * (1.0 + 1e-12) &&
                    DualTotal() > (1.0 + 2.0 * params_.epsilon) * opt_ * (1.0 + 1e-12);
}

void PrimalDualSumOfRadii::Insert(PointId p) {
  if (slot_.count(p)) throw ContractError("point inserted twice");
  for (std::size_t i = 0; i < rounds_.size(); ++i) {
    if (meter_(p, rounds_[i].center) <= RoundRadius(rounds_[i])) {
      Attach(p, static_cast<int>(i));
      return;
    }
  }
  Attach(p, -1);
  if (capped_) return;
  Iterate();
  Refresh();
}

void PrimalDualSumOfRadii::Delete(PointId p) {
  auto it = slot_.find(p);
  if (it == slot_.end()) throw ContractError("deleting a point that is not stored");
  const int round = it->second.round;
  Detach(p);
  if (round >= 0 && rounds_[round].center == p) {
    for (std::size_t i = static_cast<std::size_t>(round); i < rounds_.size(); ++i) {
      for (PointId q : rounds_[i].members) slot_.erase(q);
    }
    for (PointId q : uncovered_) slot_.erase(q);
    std::vector<PointId> pool;
    pool.swap(uncovered_);
    for (std::size_t i = static_cast<std::size_t>(round); i < rounds_.size(); ++i) {
      pool.insert(pool.end(), rounds_[i].members.begin(), rounds_[i].members.end());
    }
    rounds_.resize(static_cast<std::size_t>(round));
    for (PointId q : pool) Attach(q, -1);
    capped_ = false;
    Iterate();
    Refresh();
    return;
  }
  if (capped_ && uncovered_.empty()) {
    capped_ = false;
    Refresh();
  }
}

std::optional<Solution> PrimalDualSumOfRadii::Query() const {
  if (asserting()) return std::nullopt;
  if (params_.view == Objective::kSumOfRadii) return combined_;
  std::vector<PointId> points;
  points.reserve(slot_.size());
  for (const auto& [p, s] : slot_) points.push_back(p);
  std::sort(points.begin(), points.end());
  const Partition part = FirstCoverPartition(meter_.oracle(), combined_, points);
  Solution s = combined_;
  s.cost = part.cost;
  return s;
}

std::string PrimalDualSumOfRadii::DualAudit() const {
  const MetricOracle& oracle = meter_.oracle();
  std::ostringstream err;
  for (const auto& [p, s] : slot_) {
    std::vector<std::int64_t> sums(static_cast<std::size_t>(multiples_) + 1, 0);
    for (const Round& r : rounds_) {
      if (r.dual_halves == 0) continue;
      const double d = oracle.Peek(p, r.center);
      for (std::int64_t m = multiples_; m >= 1 && d <= Threshold(m); --m) sums[m] += r.dual_halves;
    }
    for (std::int64_t m = 1; m <= multiples_; ++m) {
      // Sum of duals at most (m + 1) z, i.e. 2(m + 1) halves.
      if (sums[m] > 2 * (m + 1)) {
        err << "dual constraint (" << Index(p) << ", " << m << "z) violated: " << sums[m] << " halves; ";
        break;
      }
    }
  }
  return err.str();
}

std::string PrimalDualSumOfRadii::Audit() const {
  const MetricOracle& oracle = meter_.oracle();
  std::ostringstream err;
  err << DualAudit();
  std::size_t stored = uncovered_.size();
  for (std::size_t i = 0; i < rounds_.size(); ++i) {
    const Round& r = rounds_[i];
    stored += r.members.size();
    if (r.dual_halves < 0) err << "negative dual; ";
    if (slot_.count(r.center) == 0) err << "round center not stored; ";
    for (std::size_t j = 0; j < r.members.size(); ++j) {
      const PointId q = r.members[j];
      auto s = slot_.find(q);
      if (s == slot_.end() || s->second.round != static_cast<int>(i) || s->second.pos != j) err << "slot mismatch; ";
      if (oracle.Peek(q, r.center) > RoundRadius(r)) err << "member outside its round; ";
      for (std::size_t e = 0; e < i; ++e) {
        if (oracle.Peek(q, rounds_[e].center) <= RoundRadius(rounds_[e])) err << "member covered by an earlier round; ";
      }
    }
    // The half-tight radius stays at least half-tight.
    std::int64_t sum = 0;
    for (const Round& o : rounds_) {
      if (oracle.Peek(r.center, o.center) <= Threshold(r.tight_multiple)) sum += o.dual_halves;
    }
    if (sum < r.tight_multiple + 2) err << "round " << i << " lost half-tightness; ";
  }
  if (stored != slot_.size()) err << "stored count mismatch; ";
  if (rounds_.size() > cap_) err << "round count above cap; ";
  if (capped_ != (!uncovered_.empty())) err << "cap flag out of sync; ";
  if (!capped_) {
    for (std::size_t i = 0; i < pruned_.size(); ++i) {
      for (std::size_t j = i + 1; j < pruned_.size(); ++j) {
        if (oracle.Peek(pruned_[i].center, pruned_[j].center) < (pruned_[i].radius + pruned_[j].radius) / 3.0) {
          err << "pruned centers too close; ";
        }
      }
    }
    if (combined_.clusters.size() > params_.k) err << "more than k final clusters; ";
    std::vector<PointId> points;
    for (const auto& [p, s] : slot_) points.push_back(p);
    if (FindUncovered(oracle, combined_, points)) err << "final clusters miss a point; ";
  }
  return err.str();
}

}  // namespace dynclust
