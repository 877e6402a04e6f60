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

#ifndef DYNCLUST_KCENTER_LINEAR_HPP_
#define DYNCLUST_KCENTER_LINEAR_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Fully dynamic k-center for one estimate. Keeps a center set whose members
// are pairwise farther than twice the estimate and, per non-center, the
// number of centers within that range. Holds at most k+1 centers; k+1 means
// the estimate is too small.
class CounterKCenter {
 public:
  CounterKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate);

  CenterDelta Insert(PointId p);
  CenterDelta Delete(PointId p);

  // Centers with radius twice the estimate, or nullopt when k+1 centers exist.
  std::optional<Solution> Query() const;

  bool asserting() const { return centers_.size() > k_; }
  bool Contains(PointId p) const { return counter_.count(p) != 0; }
  bool IsCenter(PointId p) const { return centers_.count(p) != 0; }
  const std::set<PointId>& centers() const { return centers_; }
  std::size_t size() const { return counter_.size(); }
  double opt_estimate() const { return opt_; }
  std::size_t k() const { return k_; }
  std::uint64_t distance_queries() const { return meter_.count(); }

  // Empty string when every invariant holds, otherwise the first violation.
  std::string Audit() const;

 private:
  void Promote(PointId p, CenterDelta& delta);

  DistanceMeter meter_;
  std::size_t k_;
  double opt_;
  double range_;
  // Counter per stored point; centers hold 0.
  std::map<PointId, std::size_t> counter_;
  std::set<PointId> centers_;
  // Points within range of each center, recorded at promotion and on insert.
  std::unordered_map<PointId, std::vector<PointId>> neighbors_;
  std::unordered_set<PointId> ever_center_;
};

}  // namespace dynclust

#endif  // DYNCLUST_KCENTER_LINEAR_HPP_
