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

#ifndef DYNCLUST_WORKLOADS_HPP_
#define DYNCLUST_WORKLOADS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynclust/stream.hpp"

namespace dynclust {

enum class WorkloadKind {
  kUniformEuclidean,
  kClusteredGaussian,
  kSlidingWindow,
  kAdversaryAdaptive,
  kAdversaryOblivious,
};

WorkloadKind ParseWorkloadKind(std::string_view name);
const char* WorkloadName(WorkloadKind kind);

struct WorkloadParams {
  std::size_t n = 100;            // points (Euclidean kinds)
  std::size_t dim = 2;
  std::size_t clusters = 3;       // clustered-gaussian
  double sigma = 0.05;            // clustered-gaussian spread
  double delete_fraction = 0.3;   // chance of a deletion after each insert
  std::size_t window = 10;        // sliding-window
  std::size_t query_every = 5;    // a query after this many updates; 0 = none
  std::size_t k = 2;              // adversary kinds
  std::size_t ops = 1000;         // adversary-adaptive updates
  double budget = 5.0;            // adversary-adaptive queries per insert
  std::size_t blocks = 100;       // adversary-oblivious blocks
  double delta = 100.0;           // adversary-oblivious far distance
  std::uint64_t seed = 0;
};

// A generated stream with its metric: either coordinates with keys or an
// explicit matrix whose keys are decimal site indices.
struct Workload {
  std::vector<StreamOp> ops;
  std::vector<std::string> keys;
  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> matrix;
  // Ground-truth cluster per key (clustered-gaussian only).
  std::vector<int> labels;
};

// Deterministic for a given seed. Throws ContractError on invalid params.
Workload GenerateWorkload(WorkloadKind kind, const WorkloadParams& params);

}  // namespace dynclust

#endif  // DYNCLUST_WORKLOADS_HPP_
