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

#ifndef DYNCLUST_LADDER_HPP_
#define DYNCLUST_LADDER_HPP_

#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "dynclust/common.hpp"

namespace dynclust {

// One structure per cost estimate; each either holds a solution or reports
// the estimate too small.
template <typename T>
concept EstimateInstance = requires(T& t, const T& ct, PointId p) {
  t.Insert(p);
  t.Delete(p);
  { ct.Query() } -> std::same_as<std::optional<Solution>>;
};

enum class LadderSelection {
  // Answer from the smallest estimate that holds a solution.
  kSmallestEstimate,
  // Answer with the cheapest solution held by any estimate.
  kMinimumCost,
};

struct LadderConfig {
  double epsilon = 0.5;
  double range_top = 1.0;
  std::size_t k = 1;
  LadderSelection selection = LadderSelection::kSmallestEstimate;
};

// Powers of (1 + epsilon) from 1 up to the first one reaching range_top.
std::vector<double> LadderEstimates(double epsilon, double range_top);

// True when 1/epsilon is a positive integer (up to rounding).
bool HasIntegralInverse(double epsilon);

struct LadderAnswer {
  std::optional<Solution> solution;
  double estimate = 0.0;
  std::size_t rung = 0;
};

template <EstimateInstance Instance>
class GuessLadder {
 public:
  using Factory = std::function<std::unique_ptr<Instance>(double estimate, std::size_t rung)>;

  GuessLadder(const LadderConfig& config, const Factory& make) : config_(config) {
    if (config.k == 0) throw ContractError("k must be positive");
    if (!(config.epsilon > 0.0) || config.epsilon > 1.0) throw ContractError("epsilon must lie in (0, 1]");
    estimates_ = LadderEstimates(config.epsilon, config.range_top);
    for (std::size_t i = 0; i < estimates_.size(); ++i) instances_.push_back(make(estimates_[i], i));
  }

  void Insert(PointId p) {
    if (!live_.insert(p).second) throw ContractError("point inserted twice");
    for (auto& inst : instances_) inst->Insert(p);
  }

  void Delete(PointId p) {
    if (live_.erase(p) == 0) throw ContractError("deleting a point that is not live");
    for (auto& inst : instances_) inst->Delete(p);
  }

  LadderAnswer Query() const {
    LadderAnswer answer;
    if (live_.size() <= config_.k) {
      Solution all;
      for (PointId p : live_) all.clusters.push_back({p, 0.0});
      answer.solution = std::move(all);
      answer.estimate = estimates_.front();
      return answer;
    }
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      std::optional<Solution> s = instances_[i]->Query();
      if (!s) continue;
      if (config_.selection == LadderSelection::kSmallestEstimate) {
        return {std::move(s), estimates_[i], i};
      }
      if (!answer.solution || s->cost < answer.solution->cost) answer = {std::move(s), estimates_[i], i};
    }
    return answer;
  }

  const std::vector<double>& estimates() const { return estimates_; }
  std::size_t num_rungs() const { return instances_.size(); }
  const Instance& instance(std::size_t rung) const { return *instances_.at(rung); }
  const std::set<PointId>& live() const { return live_; }
  const LadderConfig& config() const { return config_; }

 private:
  LadderConfig config_;
  std::vector<double> estimates_;
  std::vector<std::unique_ptr<Instance>> instances_;
  std::set<PointId> live_;
};

}  // namespace dynclust

#endif  // DYNCLUST_LADDER_HPP_
