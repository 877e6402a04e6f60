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

#include "dynclust/kcenter_delonly.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "dynclust/solution.hpp"

namespace dynclust {

std::size_t CeilLog2(std::size_t n) {
  if (n <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(n - 1));
}

DeletionOnlyKCenter::DeletionOnlyKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate,
                                         std::uint64_t seed)
    : meter_(oracle), k_(k), opt_(opt_estimate), rng_(seed) {
  if (k == 0) throw ContractError("k must be positive");
  if (!(opt_estimate > 0.0)) throw ContractError("estimate must be positive");
}

std::size_t DeletionOnlyKCenter::center_cap() const {
  return 2 * k_ * std::max<std::size_t>(1, CeilLog2(initial_size_));
}

void DeletionOnlyKCenter::Attach(PointId p, int group) {
  auto& list = ListOf(group);
  slot_[p] = Slot{group, list.size()};
  list.push_back(p);
}

void DeletionOnlyKCenter::Detach(PointId p) {
  const Slot s = slot_.at(p);
  auto& list = ListOf(s.group);
  const PointId moved = list.back();
  list[s.pos] = moved;
  list.pop_back();
  if (moved != p) slot_[moved].pos = s.pos;
  slot_.erase(p);
}

CenterDelta DeletionOnlyKCenter::Build(std::span<const PointId> points) {
  if (built_) throw ContractError("deletion-only structure built twice");
  built_ = true;
  initial_size_ = points.size();
  bucket_count_.assign(std::max<std::size_t>(1, CeilLog2(initial_size_)) + 1, 0);
  CenterDelta delta;
  Sample(std::vector<PointId>(points.begin(), points.end()), delta);
  return delta;
}

void DeletionOnlyKCenter::Sample(std::vector<PointId> pool, CenterDelta& delta) {
  const double range = 2.0 * opt_;
  std::vector<PointId> rest;
  while (!pool.empty()) {
    const int bucket = static_cast<int>(CeilLog2(pool.size()));
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const PointId c = pool[pick(rng_)];
    const int id = static_cast<int>(groups_.size());
    groups_.push_back(Group{c, true, bucket, {}});
    open_groups_.push_back(id);
    rest.clear();
    for (PointId q : pool) {
      if (meter_(c, q) <= range) {
        Attach(q, id);
      } else {
        rest.push_back(q);
      }
    }
    pool.swap(rest);
    delta.added.push_back(c);
    if (++bucket_count_[bucket] == 2 * k_) {
      full_bucket_ = bucket;
      full_count_ = 2 * k_;
      for (PointId q : pool) Attach(q, -1);
      return;
    }
  }
}

CenterDelta DeletionOnlyKCenter::Delete(PointId p) {
  auto it = slot_.find(p);
  if (it == slot_.end()) throw ContractError("deleting a point that is not stored");
  const int g = it->second.group;
  CenterDelta delta;
  ++deletions_since_rebuild_;
  Detach(p);
  if (g < 0 || groups_[g].center != p || !groups_[g].open) return delta;

  Group& group = groups_[g];
  delta.removed.push_back(p);
  if (asserting() && group.bucket == full_bucket_) {
    group.open = false;
    open_groups_.erase(std::find(open_groups_.begin(), open_groups_.end(), g));
    pooled_groups_.push_back(g);
    if (--full_count_ > k_) return delta;

    // The full bucket shrank to k centers: resample from its first center on.
    std::vector<PointId> pool;
    for (int pg : pooled_groups_) {
      pool.insert(pool.end(), groups_[pg].members.begin(), groups_[pg].members.end());
    }
    pool.insert(pool.end(), uncovered_.begin(), uncovered_.end());
    std::vector<int> keep;
    for (int og : open_groups_) {
      Group& other = groups_[og];
      if (other.bucket == full_bucket_) {
        pool.insert(pool.end(), other.members.begin(), other.members.end());
        other.open = false;
        delta.removed.push_back(other.center);
      } else {
        keep.push_back(og);
      }
    }
    open_groups_ = std::move(keep);
    for (int b = 0; b <= full_bucket_; ++b) bucket_count_[b] = 0;
    pooled_groups_.clear();
    uncovered_.clear();
    for (PointId q : pool) slot_.erase(q);
    full_bucket_ = -1;
    full_count_ = 0;
    min_gap_ = std::min(min_gap_, deletions_since_rebuild_);
    deletions_since_rebuild_ = 0;
    ++rebuilds_;
    Sample(std::move(pool), delta);
    return delta;
  }

  if (group.members.empty()) {
    group.open = false;
    open_groups_.erase(std::find(open_groups_.begin(), open_groups_.end(), g));
    return delta;
  }
  group.center = *std::min_element(group.members.begin(), group.members.end());
  delta.added.push_back(group.center);
  return delta;
}

std::vector<PointId> DeletionOnlyKCenter::Centers() const {
  std::vector<PointId> out;
  out.reserve(open_groups_.size());
  for (int g : open_groups_) out.push_back(groups_[g].center);
  return out;
}

std::vector<PointId> DeletionOnlyKCenter::AssertionWitness() const {
  std::vector<PointId> out;
  if (!asserting()) return out;
  for (int g : open_groups_) {
    if (groups_[g].bucket == full_bucket_) out.push_back(groups_[g].center);
  }
  return out;
}

std::optional<Solution> DeletionOnlyKCenter::Query() const {
  if (asserting()) return std::nullopt;
  const auto centers = Centers();
  return UniformRadiusSolution(centers, 4.0 * opt_);
}

std::string DeletionOnlyKCenter::Audit() const {
  const MetricOracle& oracle = meter_.oracle();
  std::ostringstream err;
  std::size_t stored = uncovered_.size();
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const Group& group = groups_[g];
    const bool pooled = std::find(pooled_groups_.begin(), pooled_groups_.end(), static_cast<int>(g)) !=
                        pooled_groups_.end();
    if (!group.open && !pooled) continue;
    stored += group.members.size();
    for (std::size_t i = 0; i < group.members.size(); ++i) {
      const PointId q = group.members[i];
      auto s = slot_.find(q);
      if (s == slot_.end() || s->second.group != static_cast<int>(g) || s->second.pos != i) {
        err << "slot mismatch for point " << Index(q) << "; ";
      }
      if (group.open && oracle.Peek(q, group.center) > 4.0 * opt_ * (1 + 1e-12)) {
        err << "point " << Index(q) << " farther than 4x estimate from its center; ";
      }
    }
    if (group.open && slot_.count(group.center) == 0) err << "open group with a deleted center; ";
  }
  if (stored != slot_.size()) err << "stored count mismatch; ";
  for (std::size_t b = 0; b < bucket_count_.size(); ++b) {
    if (bucket_count_[b] > 2 * k_) err << "bucket above 2k; ";
  }
  if (!asserting()) {
    if (!uncovered_.empty()) err << "uncovered points without a full bucket; ";
    if (open_groups_.size() > center_cap()) err << "center count above cap; ";
  } else {
    const auto witness = AssertionWitness();
    if (witness.size() != full_count_ || full_count_ <= k_) err << "full bucket count mismatch; ";
    for (std::size_t i = 0; i < witness.size(); ++i) {
      for (std::size_t j = i + 1; j < witness.size(); ++j) {
        if (oracle.Peek(witness[i], witness[j]) <= 2.0 * opt_) err << "full-bucket centers too close; ";
      }
    }
  }
  return err.str();
}

}  // namespace dynclust
