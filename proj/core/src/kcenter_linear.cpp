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

#include "dynclust/kcenter_linear.hpp"

#include <sstream>

#include "dynclust/solution.hpp"

namespace dynclust {

CounterKCenter::CounterKCenter(const MetricOracle& oracle, std::size_t k, double opt_estimate)
    : meter_(oracle), k_(k), opt_(opt_estimate), range_(2.0 * opt_estimate) {
  if (k == 0) throw ContractError("k must be positive");
  if (!(opt_estimate > 0.0)) throw ContractError("estimate must be positive");
}

void CounterKCenter::Promote(PointId p, CenterDelta& delta) {
  if (!ever_center_.insert(p).second) throw ContractError("point promoted to center twice");
  centers_.insert(p);
  counter_[p] = 0;
  auto& near = neighbors_[p];
  for (auto& [q, count] : counter_) {
    if (q == p) continue;
    if (meter_(p, q) <= range_) {
      ++count;
      near.push_back(q);
    }
  }
  delta.added.push_back(p);
}

CenterDelta CounterKCenter::Insert(PointId p) {
  if (Contains(p)) throw ContractError("point inserted twice");
  CenterDelta delta;
  std::size_t count = 0;
  for (PointId c : centers_) {
    if (meter_(p, c) <= range_) {
      ++count;
      neighbors_[c].push_back(p);
    }
  }
  counter_.emplace(p, count);
  if (count == 0 && centers_.size() <= k_) Promote(p, delta);
  return delta;
}

CenterDelta CounterKCenter::Delete(PointId p) {
  auto it = counter_.find(p);
  if (it == counter_.end()) throw ContractError("deleting a point that is not stored");
  CenterDelta delta;
  counter_.erase(it);
  if (centers_.erase(p) == 0) return delta;

  delta.removed.push_back(p);
  auto nb = neighbors_.find(p);
  for (PointId q : nb->second) {
    auto cq = counter_.find(q);
    if (cq != counter_.end()) --cq->second;
  }
  neighbors_.erase(nb);
  for (auto& [q, count] : counter_) {
    if (centers_.size() > k_) break;
    if (count == 0 && centers_.count(q) == 0) Promote(q, delta);
  }
  return delta;
}

std::optional<Solution> CounterKCenter::Query() const {
  if (asserting()) return std::nullopt;
  std::vector<PointId> centers(centers_.begin(), centers_.end());
  return UniformRadiusSolution(centers, range_);
}

std::string CounterKCenter::Audit() const {
  const MetricOracle& oracle = meter_.oracle();
  std::ostringstream err;
  if (centers_.size() > k_ + 1) err << "more than k+1 centers; ";
  for (PointId c : centers_) {
    if (counter_.count(c) == 0) err << "center not stored; ";
    else if (counter_.at(c) != 0) err << "center with nonzero counter; ";
    for (PointId d : centers_) {
      if (c < d && oracle.Peek(c, d) <= range_) err << "two centers within range; ";
    }
  }
  for (const auto& [p, count] : counter_) {
    if (centers_.count(p)) continue;
    std::size_t truth = 0;
    for (PointId c : centers_) truth += oracle.Peek(p, c) <= range_ ? 1 : 0;
    if (truth != count) err << "stale counter at point " << Index(p) << "; ";
    if (centers_.size() <= k_ && count == 0) err << "uncovered non-center " << Index(p) << "; ";
  }
  return err.str();
}

}  // namespace dynclust
