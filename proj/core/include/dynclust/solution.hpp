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

#ifndef DYNCLUST_SOLUTION_HPP_
#define DYNCLUST_SOLUTION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Every center gets the same radius; cost is that radius (0 when empty).
Solution UniformRadiusSolution(std::span<const PointId> centers, double radius);

// Cost is the sum of the cluster radii.
Solution SumOfRadiiSolution(std::vector<Cluster> clusters);

// Largest distance from a point to its nearest center, measured without
// touching the query counter. Infinite when points exist but centers do not.
double KCenterCost(const MetricOracle& oracle, std::span<const PointId> centers,
                   std::span<const PointId> points);

// First point not within any cluster radius (plus a relative slack).
std::optional<PointId> FindUncovered(const MetricOracle& oracle, const Solution& solution,
                                     std::span<const PointId> points, double slack = 1e-9);

struct Partition {
  std::vector<std::vector<PointId>> parts;
  std::vector<double> diameters;
  double cost = 0.0;
};

// Assigns each point to the first cluster covering it and measures exact
// part diameters. Throws when some point is uncovered.
Partition FirstCoverPartition(const MetricOracle& oracle, const Solution& solution,
                              std::span<const PointId> points, double slack = 1e-9);

double Diameter(const MetricOracle& oracle, std::span<const PointId> points);

}  // namespace dynclust

#endif  // DYNCLUST_SOLUTION_HPP_
