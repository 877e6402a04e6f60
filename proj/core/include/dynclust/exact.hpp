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

#ifndef DYNCLUST_EXACT_HPP_
#define DYNCLUST_EXACT_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Symmetric distance table over n items, row-major.
struct DenseDistances {
  std::size_t n = 0;
  std::vector<double> d;

  double operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
  static DenseDistances FromOracle(const MetricOracle& oracle, std::span<const PointId> points);
};

struct ExactBudget {
  std::size_t max_points;
  std::size_t max_k;
  std::uint64_t max_nodes;
};

// Branch-and-bound over coverage bitsets; exact for the stated limits.
inline constexpr ExactBudget kKCenterBudget{512, 64, 50'000'000};
inline constexpr ExactBudget kSumOfRadiiBudget{64, 8, 50'000'000};
inline constexpr ExactBudget kSumOfDiametersBudget{16, 6, 200'000'000};

// Witness clusters refer to item indices of the table.
struct IndexCluster {
  std::size_t center;
  double radius;
};

struct IndexedResult {
  double cost = 0.0;
  std::vector<IndexCluster> clusters;
  // Part index per item (sum-of-diameters only).
  std::vector<std::size_t> assignment;
};

IndexedResult SolveKCenter(const DenseDistances& dist, std::size_t k,
                           const ExactBudget& budget = kKCenterBudget);
IndexedResult SolveSumOfRadii(const DenseDistances& dist, std::size_t k,
                              const ExactBudget& budget = kSumOfRadiiBudget);
IndexedResult SolveSumOfDiameters(const DenseDistances& dist, std::size_t k,
                                  const ExactBudget& budget = kSumOfDiametersBudget);

struct ExactResult {
  double cost = 0.0;
  Solution witness;
};

ExactResult ExactKCenter(const MetricOracle& oracle, std::span<const PointId> points, std::size_t k,
                         const ExactBudget& budget = kKCenterBudget);
ExactResult ExactSumOfRadii(const MetricOracle& oracle, std::span<const PointId> points,
                            std::size_t k, const ExactBudget& budget = kSumOfRadiiBudget);
// Witness clusters are centered at a member of each part with radius equal to
// the part diameter; cost is the sum of part diameters.
ExactResult ExactSumOfDiameters(const MetricOracle& oracle, std::span<const PointId> points,
                                std::size_t k,
                                const ExactBudget& budget = kSumOfDiametersBudget);

enum class OfflineMode { kExact, kExactOrGreedy };

// Sum-of-radii solver used inside the dynamic pipeline. kExactOrGreedy falls
// back to farthest-first centers when the exact budget is exceeded.
Solution OfflineSumOfRadii(const MetricOracle& oracle, std::span<const PointId> points,
                           std::size_t k, OfflineMode mode = OfflineMode::kExact);

// Farthest-first traversal; returns item indices starting from item 0.
std::vector<std::size_t> FarthestFirst(const DenseDistances& dist, std::size_t k);

}  // namespace dynclust

#endif  // DYNCLUST_EXACT_HPP_
