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

#ifndef DYNCLUST_COMMON_HPP_
#define DYNCLUST_COMMON_HPP_

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynclust {

// Identifier handed out by the metric oracle. Never reused.
enum class PointId : std::uint32_t {};

constexpr std::uint32_t Index(PointId p) { return static_cast<std::uint32_t>(p); }
constexpr PointId MakePointId(std::uint64_t i) { return static_cast<PointId>(i); }

// Raised when a caller breaks a documented precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised by exact solvers when an instance is larger than their budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Objective { kKCenter, kSumOfRadii, kSumOfDiameters };

struct Cluster {
  PointId center;
  double radius = 0.0;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct Solution {
  std::vector<Cluster> clusters;
  double cost = 0.0;

  std::vector<PointId> Centers() const;
  friend bool operator==(const Solution&, const Solution&) = default;
};

// Center additions and removals reported by a structure after one update.
struct CenterDelta {
  std::vector<PointId> added;
  std::vector<PointId> removed;

  std::size_t size() const { return added.size() + removed.size(); }
  bool empty() const { return added.empty() && removed.empty(); }
};

}  // namespace dynclust

#endif  // DYNCLUST_COMMON_HPP_
