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

#include "dynclust/exact.hpp"

#include <algorithm>
#include <bit>
#include <bitset>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace dynclust {

DenseDistances DenseDistances::FromOracle(const MetricOracle& oracle, std::span<const PointId> points) {
  DenseDistances t;
  t.n = points.size();
  t.d.assign(t.n * t.n, 0.0);
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = i + 1; j < t.n; ++j) {
      const double v = oracle.Peek(points[i], points[j]);
      t.d[i * t.n + j] = v;
      t.d[j * t.n + i] = v;
    }
  }
  return t;
}

namespace {

void CheckBudget(const char* what, std::size_t n, std::size_t k, const ExactBudget& budget) {
  if (n > budget.max_points || (k > budget.max_k && k < n)) {
    throw BudgetExceeded(std::string(what) + ": instance with n=" + std::to_string(n) +
                         ", k=" + std::to_string(k) + " exceeds the budget n<=" +
                         std::to_string(budget.max_points) + ", k<=" + std::to_string(budget.max_k));
  }
}

[[noreturn]] void NodeLimit(const char* what, const ExactBudget& budget) {
  throw BudgetExceeded(std::string(what) + ": search exceeded " + std::to_string(budget.max_nodes) +
                       " nodes");
}

IndexedResult AllSingletons(std::size_t n) {
  IndexedResult r;
  for (std::size_t i = 0; i < n; ++i) {
    r.clusters.push_back({i, 0.0});
    r.assignment.push_back(i);
  }
  return r;
}

using Bits = std::bitset<512>;

class CoverSearch {
 public:
  CoverSearch(const DenseDistances& dist, const ExactBudget& budget) : dist_(dist), budget_(budget) {}

  bool Feasible(double r, std::size_t k, std::vector<std::size_t>& centers) {
    const std::size_t n = dist_.n;
    radius_ = r;
    ball_.assign(n, Bits());
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (dist_(i, j) <= r) ball_[i].set(j);
      }
    }
    Bits all;
    for (std::size_t i = 0; i < n; ++i) all.set(i);
    chosen_.clear();
    if (!Search(all, k)) return false;
    centers = chosen_;
    return true;
  }

 private:
  bool Search(const Bits& uncovered, std::size_t kleft) {
    if (uncovered.none()) return true;
    if (kleft == 0) return false;
    if (++nodes_ > budget_.max_nodes) NodeLimit("exact k-center", budget_);

    // Points pairwise farther than 2r need distinct centers.
    std::vector<std::size_t> packing;
    for (std::size_t i = uncovered._Find_first(); i < dist_.n; i = uncovered._Find_next(i)) {
      bool far = true;
      for (std::size_t j : packing) {
        if (dist_(i, j) <= 2.0 * radius_) {
          far = false;
          break;
        }
      }
      if (far) {
        packing.push_back(i);
        if (packing.size() > kleft) return false;
      }
    }

    std::size_t pivot = packing.front();
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t u : packing) {
      const std::size_t c = ball_[u].count();
      if (c < fewest) {
        fewest = c;
        pivot = u;
      }
    }

    std::vector<std::pair<std::size_t, std::size_t>> options;
    for (std::size_t c = ball_[pivot]._Find_first(); c < dist_.n; c = ball_[pivot]._Find_next(c)) {
      options.emplace_back((ball_[c] & uncovered).count(), c);
    }
    std::sort(options.begin(), options.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });

    std::vector<Bits> tried;
    for (const auto& [gain, c] : options) {
      const Bits covered = ball_[c] & uncovered;
      bool dominated = false;
      for (const Bits& t : tried) {
        if ((covered & ~t).none()) {
          dominated = true;
          break;
        }
      }
      if (dominated) continue;
      tried.push_back(covered);
      chosen_.push_back(c);
      if (Search(uncovered & ~covered, kleft - 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  const DenseDistances& dist_;
  const ExactBudget& budget_;
  double radius_ = 0.0;
  std::vector<Bits> ball_;
  std::vector<std::size_t> chosen_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::vector<std::size_t> FarthestFirst(const DenseDistances& dist, std::size_t k) {
  std::vector<std::size_t> centers;
  if (dist.n == 0 || k == 0) return centers;
  std::vector<double> gap(dist.n, std::numeric_limits<double>::infinity());
  std::size_t next = 0;
  while (centers.size() < std::min(k, dist.n)) {
    centers.push_back(next);
    double far = -1.0;
    for (std::size_t i = 0; i < dist.n; ++i) {
      gap[i] = std::min(gap[i], dist(i, centers.back()));
      if (gap[i] > far) {
        far = gap[i];
        next = i;
      }
    }
    if (far <= 0.0) break;
  }
  return centers;
}

IndexedResult SolveKCenter(const DenseDistances& dist, std::size_t k, const ExactBudget& budget) {
  const std::size_t n = dist.n;
  if (k == 0 && n > 0) throw ContractError("k-center needs k >= 1");
  if (n <= k) return AllSingletons(n);
  CheckBudget("exact k-center", n, k, budget);

  const auto greedy = FarthestFirst(dist, k);
  double upper = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c : greedy) best = std::min(best, dist(i, c));
    upper = std::max(upper, best);
  }
  const double lower = upper / 2.0;

  std::vector<double> radii;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = dist(i, j);
      if (v >= lower && v <= upper) radii.push_back(v);
    }
  }
  radii.push_back(upper);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  CoverSearch search(dist, budget);
  std::vector<std::size_t> best_centers = greedy;
  std::size_t lo = 0;
  std::size_t hi = radii.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    std::vector<std::size_t> centers;
    if (search.Feasible(radii[mid], k, centers)) {
      hi = mid;
      best_centers = std::move(centers);
    } else {
      lo = mid + 1;
    }
  }

  IndexedResult out;
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c : best_centers) best = std::min(best, dist(i, c));
    out.cost = std::max(out.cost, best);
  }
  for (std::size_t c : best_centers) out.clusters.push_back({c, out.cost});
  return out;
}

namespace {

class RadiiSearch {
 public:
  RadiiSearch(const DenseDistances& dist, const ExactBudget& budget) : dist_(dist), budget_(budget) {
    const std::size_t n = dist.n;
    // Every distinct ball: one per (center, realized radius).
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist(c, a) < dist(c, b); });
      std::uint64_t mask = 0;
      for (std::size_t idx = 0; idx < n; ++idx) {
        const std::size_t p = order[idx];
        mask |= std::uint64_t{1} << p;
        if (idx + 1 < n && dist(c, order[idx + 1]) == dist(c, p)) continue;
        balls_.push_back({dist(c, p), c, mask});
      }
    }
    std::sort(balls_.begin(), balls_.end(), [](const Ball& a, const Ball& b) {
      return a.radius != b.radius ? a.radius < b.radius : a.center < b.center;
    });
  }

  IndexedResult Solve(std::size_t k) {
    const std::size_t n = dist_.n;
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    // One ball around the best single center is always feasible.
    best_cost_ = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      double r = 0.0;
      for (std::size_t p = 0; p < n; ++p) r = std::max(r, dist_(c, p));
      if (r < best_cost_) {
        best_cost_ = r;
        best_ = {{c, r}};
      }
    }
    current_.clear();
    Search(all, k, 0.0);
    IndexedResult out;
    out.cost = best_cost_;
    out.clusters = best_;
    return out;
  }

 private:
  struct Ball {
    double radius;
    std::size_t center;
    std::uint64_t mask;
  };

  void Search(std::uint64_t uncovered, std::size_t kleft, double cost) {
    if (uncovered == 0) {
      if (cost < best_cost_) {
        best_cost_ = cost;
        best_ = current_;
      }
      return;
    }
    if (kleft == 0) return;
    if (++nodes_ > budget_.max_nodes) NodeLimit("exact sum-of-radii", budget_);

    if (kleft == 1) {
      for (std::size_t c = 0; c < dist_.n; ++c) {
        double r = 0.0;
        for (std::uint64_t m = uncovered; m; m &= m - 1) r = std::max(r, dist_(c, std::countr_zero(m)));
        if (cost + r < best_cost_) {
          best_cost_ = cost + r;
          best_ = current_;
          best_.push_back({c, r});
        }
      }
      return;
    }

    const std::size_t pivot = std::countr_zero(uncovered);
    const std::uint64_t bit = std::uint64_t{1} << pivot;
    std::map<std::uint64_t, const Ball*> seen;
    for (const Ball& b : balls_) {
      if (cost + b.radius >= best_cost_) break;
      if ((b.mask & bit) == 0) continue;
      const std::uint64_t gain = b.mask & uncovered;
      if (!seen.emplace(gain, &b).second) continue;
      current_.push_back({b.center, b.radius});
      Search(uncovered & ~gain, kleft - 1, cost + b.radius);
      current_.pop_back();
    }
  }

  const DenseDistances& dist_;
  const ExactBudget& budget_;
  std::vector<Ball> balls_;
  std::vector<IndexCluster> current_;
  std::vector<IndexCluster> best_;
  double best_cost_ = 0.0;
  std::uint64_t nodes_ = 0;
};

class PartitionSearch {
 public:
  PartitionSearch(const DenseDistances& dist, std::size_t k, const ExactBudget& budget)
      : dist_(dist), k_(k), budget_(budget) {}

  IndexedResult Solve() {
    const std::size_t n = dist_.n;
    assignment_.assign(n, 0);
    best_cost_ = std::numeric_limits<double>::infinity();
    Recurse(0, 0.0);
    IndexedResult out;
    out.cost = best_cost_;
    out.assignment = best_assignment_;
    std::size_t parts = 0;
    for (std::size_t a : best_assignment_) parts = std::max(parts, a + 1);
    std::vector<std::vector<std::size_t>> members(parts);
    for (std::size_t i = 0; i < n; ++i) members[best_assignment_[i]].push_back(i);
    for (const auto& m : members) {
      double diam = 0.0;
      for (std::size_t a : m) {
        for (std::size_t b : m) diam = std::max(diam, dist_(a, b));
      }
      out.clusters.push_back({m.front(), diam});
    }
    return out;
  }

 private:
  void Recurse(std::size_t i, double cost) {
    if (cost >= best_cost_) return;
    if (++nodes_ > budget_.max_nodes) NodeLimit("exact sum-of-diameters", budget_);
    if (i == dist_.n) {
      best_cost_ = cost;
      best_assignment_ = assignment_;
      return;
    }
    const std::size_t open = diam_.size();
    for (std::size_t part = 0; part <= open && part < k_; ++part) {
      double grown = part < open ? diam_[part] : 0.0;
      if (part < open) {
        for (std::size_t j = 0; j < i; ++j) {
          if (assignment_[j] == part) grown = std::max(grown, dist_(i, j));
        }
      }
      const double delta = grown - (part < open ? diam_[part] : 0.0);
      if (part == open) diam_.push_back(0.0);
      const double saved = diam_[part];
      diam_[part] = grown;
      assignment_[i] = part;
      Recurse(i + 1, cost + delta);
      diam_[part] = saved;
      if (part == open) diam_.pop_back();
    }
  }

  const DenseDistances& dist_;
  std::size_t k_;
  const ExactBudget& budget_;
  std::vector<std::size_t> assignment_;
  std::vector<std::size_t> best_assignment_;
  std::vector<double> diam_;
  double best_cost_ = 0.0;
  std::uint64_t nodes_ = 0;
};

}  // namespace

IndexedResult SolveSumOfRadii(const DenseDistances& dist, std::size_t k, const ExactBudget& budget) {
  const std::size_t n = dist.n;
  if (k == 0 && n > 0) throw ContractError("sum-of-radii needs k >= 1");
  if (n <= k) return AllSingletons(n);
  CheckBudget("exact sum-of-radii", n, k, budget);
  if (n > 64) throw BudgetExceeded("exact sum-of-radii: at most 64 points are supported");
  return RadiiSearch(dist, budget).Solve(k);
}

IndexedResult SolveSumOfDiameters(const DenseDistances& dist, std::size_t k, const ExactBudget& budget) {
  const std::size_t n = dist.n;
  if (k == 0 && n > 0) throw ContractError("sum-of-diameters needs k >= 1");
  if (n <= k) return AllSingletons(n);
  CheckBudget("exact sum-of-diameters", n, k, budget);
  return PartitionSearch(dist, k, budget).Solve();
}

namespace {

ExactResult ToPoints(const IndexedResult& r, std::span<const PointId> points) {
  ExactResult out;
  out.cost = r.cost;
  for (const IndexCluster& c : r.clusters) out.witness.clusters.push_back({points[c.center], c.radius});
  out.witness.cost = r.cost;
  return out;
}

}  // namespace

ExactResult ExactKCenter(const MetricOracle& oracle, std::span<const PointId> points, std::size_t k,
                         const ExactBudget& budget) {
  if (points.size() > k) CheckBudget("exact k-center", points.size(), k, budget);
  return ToPoints(SolveKCenter(DenseDistances::FromOracle(oracle, points), k, budget), points);
}

ExactResult ExactSumOfRadii(const MetricOracle& oracle, std::span<const PointId> points, std::size_t k,
                            const ExactBudget& budget) {
  if (points.size() > k) CheckBudget("exact sum-of-radii", points.size(), k, budget);
  return ToPoints(SolveSumOfRadii(DenseDistances::FromOracle(oracle, points), k, budget), points);
}

ExactResult ExactSumOfDiameters(const MetricOracle& oracle, std::span<const PointId> points,
                                std::size_t k, const ExactBudget& budget) {
  if (points.size() > k) CheckBudget("exact sum-of-diameters", points.size(), k, budget);
  return ToPoints(SolveSumOfDiameters(DenseDistances::FromOracle(oracle, points), k, budget), points);
}

Solution OfflineSumOfRadii(const MetricOracle& oracle, std::span<const PointId> points, std::size_t k,
                           OfflineMode mode) {
  try {
    return ExactSumOfRadii(oracle, points, k).witness;
  } catch (const BudgetExceeded&) {
    if (mode == OfflineMode::kExact) throw;
  }
  const DenseDistances dist = DenseDistances::FromOracle(oracle, points);
  const auto centers = FarthestFirst(dist, k);
  std::vector<double> radius(centers.size(), 0.0);
  for (std::size_t i = 0; i < dist.n; ++i) {
    std::size_t owner = 0;
    for (std::size_t c = 1; c < centers.size(); ++c) {
      if (dist(i, centers[c]) < dist(i, centers[owner])) owner = c;
    }
    radius[owner] = std::max(radius[owner], dist(i, centers[owner]));
  }
  std::vector<Cluster> clusters;
  for (std::size_t c = 0; c < centers.size(); ++c) clusters.push_back({points[centers[c]], radius[c]});
  Solution s;
  s.clusters = std::move(clusters);
  for (const Cluster& c : s.clusters) s.cost += c.radius;
  return s;
}

}  // namespace dynclust
