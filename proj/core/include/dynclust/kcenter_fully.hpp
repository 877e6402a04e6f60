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

#ifndef DYNCLUST_KCENTER_FULLY_HPP_
#define DYNCLUST_KCENTER_FULLY_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/kcenter_delonly.hpp"
#include "dynclust/kcenter_linear.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Fully dynamic k-center for one estimate, composed from deletion-only pieces.
// New points land in level 1, served by a counter structure. Level j may hold
// up to 2^j * k * ceil(log2 n) points; an overfull level is merged into the
// next one, which is rebuilt as a deletion-only structure. A second counter
// structure clusters the union of all level centers into at most k centers.
class FullyDynamicKCenter {
 public:
  FullyDynamicKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate, std::uint64_t seed);

  void Insert(PointId p);
  void Delete(PointId p);

  // At most k centers with radius six times the estimate, or nullopt when any
  // part reports the estimate too small.
  std::optional<Solution> Query() const;

  std::size_t size() const { return level_of_.size(); }
  std::size_t num_levels() const { return levels_.size() - 1; }
  std::size_t level_size(std::size_t j) const { return levels_.at(j).size(); }
  const std::set<PointId>& center_union() const { return union_; }
  std::size_t overflows() const { return overflows_; }
  std::size_t top_rebuilds() const { return top_rebuilds_; }
  // Times a point moved into the same level twice; stays zero.
  std::size_t repeated_promotions() const { return repeated_promotions_; }
  std::uint64_t distance_queries() const;
  double opt_estimate() const { return opt_; }

  std::string Audit() const;

 private:
  std::vector<PointId> LevelCenters(std::size_t j) const;
  void Flush(std::size_t j);
  void RebuildTop();
  void Apply(const CenterDelta& delta);

  const MetricOracle* oracle_;
  std::size_t k_;
  double opt_;
  std::mt19937_64 rng_;

  // Index 0 unused so that level j lives at index j.
  std::vector<std::unordered_set<PointId>> levels_;
  std::unordered_map<PointId, std::size_t> level_of_;
  std::unordered_map<PointId, std::uint64_t> reached_levels_;
  std::unique_ptr<CounterKCenter> first_;
  std::vector<std::unique_ptr<DeletionOnlyKCenter>> merged_;
  std::set<PointId> union_;
  std::unique_ptr<CounterKCenter> top_;

  std::uint64_t retired_queries_ = 0;
  std::size_t overflows_ = 0;
  std::size_t top_rebuilds_ = 0;
  std::size_t repeated_promotions_ = 0;
};

}  // namespace dynclust

#endif  // DYNCLUST_KCENTER_FULLY_HPP_
