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

#include "dynclust/solution.hpp"

#include <algorithm>
#include <limits>

namespace dynclust {

std::vector<PointId> Solution::Centers() const {
  std::vector<PointId> out;
  out.reserve(clusters.size());
  for (const Cluster& c : clusters) out.push_back(c.center);
  return out;
}

Solution UniformRadiusSolution(std::span<const PointId> centers, double radius) {
  Solution s;
  for (PointId c : centers) s.clusters.push_back({c, radius});
  s.cost = centers.empty() ? 0.0 : radius;
  return s;
}

Solution SumOfRadiiSolution(std::vector<Cluster> clusters) {
  Solution s;
  s.clusters = std::move(clusters);
  for (const Cluster& c : s.clusters) s.cost += c.radius;
  return s;
}

double KCenterCost(const MetricOracle& oracle, std::span<const PointId> centers,
                   std::span<const PointId> points) {
  double worst = 0.0;
  for (PointId p : points) {
    double best = std::numeric_limits<double>::infinity();
    for (PointId c : centers) best = std::min(best, oracle.Peek(p, c));
    worst = std::max(worst, best);
  }
  return worst;
}

namespace {

bool Within(double d, double radius, double slack) { return d <= radius + slack * std::max(1.0, radius); }

}  // namespace

std::optional<PointId> FindUncovered(const MetricOracle& oracle, const Solution& solution,
                                     std::span<const PointId> points, double slack) {
  for (PointId p : points) {
    bool covered = false;
    for (const Cluster& c : solution.clusters) {
      if (Within(oracle.Peek(p, c.center), c.radius, slack)) {
        covered = true;
        break;
      }
    }
    if (!covered) return p;
  }
  return std::nullopt;
}

double Diameter(const MetricOracle& oracle, std::span<const PointId> points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, oracle.Peek(points[i], points[j]));
  }
  return d;
}

Partition FirstCoverPartition(const MetricOracle& oracle, const Solution& solution,
                              std::span<const PointId> points, double slack) {
  Partition out;
  out.parts.resize(solution.clusters.size());
  for (PointId p : points) {
    bool placed = false;
    for (std::size_t i = 0; i < solution.clusters.size(); ++i) {
      const Cluster& c = solution.clusters[i];
      if (Within(oracle.Peek(p, c.center), c.radius, slack)) {
        out.parts[i].push_back(p);
        placed = true;
        break;
      }
    }
    if (!placed) throw ContractError("solution does not cover every point");
  }
  for (const auto& part : out.parts) {
    out.diameters.push_back(Diameter(oracle, part));
    out.cost += out.diameters.back();
  }
  return out;
}

}  // namespace dynclust
