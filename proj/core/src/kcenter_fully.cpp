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

#include "dynclust/kcenter_fully.hpp"

#include <algorithm>
#include <sstream>

#include "dynclust/solution.hpp"

namespace dynclust {

FullyDynamicKCenter::FullyDynamicKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate,
                                         std::uint64_t seed)
    : oracle_(&oracle), k_(k), opt_(opt_estimate), rng_(seed), levels_(2) {
  first_ = std::make_unique<CounterKCenter>(oracle, k, opt_estimate);
  top_ = std::make_unique<CounterKCenter>(oracle, k, opt_estimate);
  merged_.resize(2);
}

std::uint64_t FullyDynamicKCenter::distance_queries() const {
  std::uint64_t total = retired_queries_ + first_->distance_queries() + top_->distance_queries();
  for (const auto& m : merged_) {
    if (m) total += m->distance_queries();
  }
  return total;
}

std::vector<PointId> FullyDynamicKCenter::LevelCenters(std::size_t j) const {
  if (j == 1) return {first_->centers().begin(), first_->centers().end()};
  if (j < merged_.size() && merged_[j]) return merged_[j]->Centers();
  return {};
}

void FullyDynamicKCenter::Apply(const CenterDelta& delta) {
  for (PointId c : delta.removed) {
    union_.erase(c);
    top_->Delete(c);
  }
  for (PointId c : delta.added) {
    union_.insert(c);
    top_->Insert(c);
  }
}

void FullyDynamicKCenter::RebuildTop() {
  retired_queries_ += top_->distance_queries();
  top_ = std::make_unique<CounterKCenter>(*oracle_, k_, opt_);
  for (PointId c : union_) top_->Insert(c);
  ++top_rebuilds_;
}

void FullyDynamicKCenter::Flush(std::size_t j) {
  const std::size_t next = j + 1;
  if (levels_.size() <= next) {
    levels_.resize(next + 1);
    merged_.resize(next + 1);
  }
  for (PointId c : LevelCenters(j)) union_.erase(c);
  for (PointId c : LevelCenters(next)) union_.erase(c);

  for (PointId p : levels_[j]) {
    levels_[next].insert(p);
    level_of_[p] = next;
    std::uint64_t& seen = reached_levels_[p];
    const std::uint64_t bit = std::uint64_t{1} << std::min<std::size_t>(next, 63);
    if (seen & bit) ++repeated_promotions_;
    seen |= bit;
  }
  levels_[j].clear();
  if (j == 1) {
    retired_queries_ += first_->distance_queries();
    first_ = std::make_unique<CounterKCenter>(*oracle_, k_, opt_);
  } else {
    retired_queries_ += merged_[j]->distance_queries();
    merged_[j].reset();
  }

  if (merged_[next]) retired_queries_ += merged_[next]->distance_queries();
  merged_[next] = std::make_unique<DeletionOnlyKCenter>(*oracle_, k_, opt_, rng_());
  std::vector<PointId> points(levels_[next].begin(), levels_[next].end());
  std::sort(points.begin(), points.end());
  merged_[next]->Build(points);
  for (PointId c : merged_[next]->Centers()) union_.insert(c);
  ++overflows_;
}

void FullyDynamicKCenter::Insert(PointId p) {
  if (level_of_.count(p)) throw ContractError("point inserted twice");
  level_of_[p] = 1;
  levels_[1].insert(p);
  Apply(first_->Insert(p));

  const std::size_t log_n = std::max<std::size_t>(1, CeilLog2(size()));
  bool fired = false;
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    const std::size_t cap = (std::size_t{1} << std::min<std::size_t>(j, 62)) * k_ * log_n;
    if (levels_[j].size() > cap) {
      Flush(j);
      fired = true;
    }
  }
  if (fired) RebuildTop();
}

void FullyDynamicKCenter::Delete(PointId p) {
  auto it = level_of_.find(p);
  if (it == level_of_.end()) throw ContractError("deleting a point that is not stored");
  const std::size_t j = it->second;
  level_of_.erase(it);
  levels_[j].erase(p);
  if (j == 1) {
    Apply(first_->Delete(p));
    return;
  }
  const CenterDelta delta = merged_[j]->Delete(p);
  if (delta.size() <= 2) {
    Apply(delta);
    return;
  }
  for (PointId c : delta.removed) union_.erase(c);
  for (PointId c : delta.added) union_.insert(c);
  RebuildTop();
}

std::optional<Solution> FullyDynamicKCenter::Query() const {
  if (first_->asserting() || top_->asserting()) return std::nullopt;
  for (const auto& m : merged_) {
    if (m && m->asserting()) return std::nullopt;
  }
  const std::vector<PointId> centers(top_->centers().begin(), top_->centers().end());
  return UniformRadiusSolution(centers, 6.0 * opt_);
}

std::string FullyDynamicKCenter::Audit() const {
  std::ostringstream err;
  std::size_t total = 0;
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    total += levels_[j].size();
    for (PointId p : levels_[j]) {
      auto it = level_of_.find(p);
      if (it == level_of_.end() || it->second != j) err << "level map mismatch; ";
    }
    if (j >= 2 && merged_[j] && merged_[j]->size() != levels_[j].size()) err << "level structure size mismatch; ";
    if (j >= 2 && !merged_[j] && !levels_[j].empty()) err << "level without structure; ";
  }
  if (total != level_of_.size()) err << "levels do not partition the points; ";
  if (first_->size() != levels_[1].size()) err << "first level size mismatch; ";

  std::set<PointId> expected;
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    for (PointId c : LevelCenters(j)) expected.insert(c);
  }
  if (expected != union_) err << "center union out of sync; ";
  if (top_->size() != union_.size()) err << "top structure does not hold the union; ";
  for (PointId c : union_) {
    if (!top_->Contains(c)) err << "union center missing from top structure; ";
  }
  if (repeated_promotions_ != 0) err << "point moved into a level twice; ";

  std::string sub = first_->Audit();
  if (!sub.empty()) err << "level 1: " << sub;
  sub = top_->Audit();
  if (!sub.empty()) err << "top: " << sub;
  for (std::size_t j = 2; j < merged_.size(); ++j) {
    if (!merged_[j]) continue;
    sub = merged_[j]->Audit();
    if (!sub.empty()) err << "level " << j << ": " << sub;
  }
  return err.str();
}

}  // namespace dynclust
