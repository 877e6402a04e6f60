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

#ifndef DYNCLUST_KCENTER_DELONLY_HPP_
#define DYNCLUST_KCENTER_DELONLY_HPP_

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Deletion-only k-center for one estimate. Centers are sampled one at a time
// from the still-uncovered points and grouped into buckets by the size of the
// set they were drawn from. A bucket that reaches 2k centers proves the
// estimate too small until k of its centers are deleted, after which the
// sampling is redone from that bucket onward.
class DeletionOnlyKCenter {
 public:
  DeletionOnlyKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate,
                      std::uint64_t seed);

  // Starts a session on the given points; may be called once.
  CenterDelta Build(std::span<const PointId> points);
  CenterDelta Delete(PointId p);

  // Centers with radius four times the estimate, or nullopt while a full
  // bucket exists.
  std::optional<Solution> Query() const;

  bool asserting() const { return full_bucket_ >= 0; }
  bool Contains(PointId p) const { return slot_.count(p) != 0; }
  std::size_t size() const { return slot_.size(); }
  std::vector<PointId> Centers() const;
  // Live centers of the full bucket; pairwise farther than twice the estimate.
  std::vector<PointId> AssertionWitness() const;

  std::size_t initial_size() const { return initial_size_; }
  std::size_t num_buckets() const { return bucket_count_.size(); }
  // Centers allowed while not asserting: 2k times the bucket-index bound.
  std::size_t center_cap() const;
  std::size_t partial_rebuilds() const { return rebuilds_; }
  // Fewest deletions observed between two consecutive rebuilds (or from the
  // build to the first rebuild); max() when no rebuild happened.
  std::size_t min_deletions_between_rebuilds() const { return min_gap_; }
  std::uint64_t distance_queries() const { return meter_.count(); }
  double opt_estimate() const { return opt_; }

  std::string Audit() const;

 private:
  struct Group {
    PointId center;
    bool open = true;      // false once retired or moved to the pool
    int bucket = 0;
    std::vector<PointId> members;  // includes the center
  };
  struct Slot {
    int group;  // -1: uncovered pool
    std::size_t pos;
  };

  void Sample(std::vector<PointId> pool, CenterDelta& delta);
  void Detach(PointId p);
  void Attach(PointId p, int group);
  std::vector<PointId>& ListOf(int group) { return group < 0 ? uncovered_ : groups_[group].members; }

  DistanceMeter meter_;
  std::size_t k_;
  double opt_;
  std::mt19937_64 rng_;
  bool built_ = false;
  std::size_t initial_size_ = 0;

  std::vector<Group> groups_;
  std::vector<int> open_groups_;  // creation order
  std::vector<std::size_t> bucket_count_;
  int full_bucket_ = -1;
  std::size_t full_count_ = 0;
  std::vector<int> pooled_groups_;
  std::vector<PointId> uncovered_;
  std::unordered_map<PointId, Slot> slot_;

  std::size_t rebuilds_ = 0;
  std::size_t deletions_since_rebuild_ = 0;
  std::size_t min_gap_ = std::numeric_limits<std::size_t>::max();
};

// ceil(log2(n)), with 0 for n <= 1.
std::size_t CeilLog2(std::size_t n);

}  // namespace dynclust

#endif  // DYNCLUST_KCENTER_DELONLY_HPP_
