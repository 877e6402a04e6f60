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

#include "dynclust/ladder.hpp"

#include <cmath>

namespace dynclust {

std::vector<double> LadderEstimates(double epsilon, double range_top) {
  if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");
  std::size_t steps = 0;
  if (range_top > 1.0) {
    steps = static_cast<std::size_t>(std::ceil(std::log(range_top) / std::log1p(epsilon) - 1e-9));
  }
  std::vector<double> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) out.push_back(std::pow(1.0 + epsilon, static_cast<double>(i)));
  return out;
}

bool HasIntegralInverse(double epsilon) {
  if (!(epsilon > 0.0)) return false;
  const double inv = 1.0 / epsilon;
  return std::abs(inv - std::round(inv)) < 1e-9 * inv;
}

}  // namespace dynclust
