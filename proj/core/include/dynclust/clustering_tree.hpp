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

#ifndef DYNCLUST_CLUSTERING_TREE_HPP_
#define DYNCLUST_CLUSTERING_TREE_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

// Deterministic k-center for one estimate. Points sit in the leaves of a
// complete binary tree (heap numbering, root 1); every node keeps at most 2k
// points and marks at most k of them as centers that are pairwise farther
// than the estimate. A node stores exactly the centers of its children, so
// the root centers cover every point within (depth + 1) times the estimate.
// A node holding a point that no center blocks while k centers are marked
// proves that no k centers reach cost half the estimate.
class ClusteringTree {
 public:
  ClusteringTree(const MetricOracle& oracle, std::size_t k, double opt_estimate);

  void Insert(PointId p);
  void Delete(PointId p);

  // Root centers with radius (depth + 1) times the estimate, or nullopt when
  // some node is a witness.
  std::optional<Solution> Query() const;

  bool has_witness() const;
  // A witness node's k centers plus its unblocked point, pairwise farther
  // than the estimate; empty without a witness.
  std::vector<PointId> WitnessPoints() const;

  std::size_t size() const { return leaf_of_.size(); }
  std::size_t num_leaves() const { return leaves_; }
  std::size_t num_nodes() const { return 2 * leaves_ - 1; }
  // Depth of the deepest leaf; the root alone has depth 0.
  std::size_t depth() const;
  std::vector<PointId> NodePoints(std::size_t node) const;
  std::vector<PointId> NodeCenters(std::size_t node) const;
  std::uint64_t distance_queries() const { return meter_.count(); }
  double opt_estimate() const { return opt_; }

  // Text rendering of every node; equal for equal trees.
  std::string Fingerprint() const;
  std::string Audit() const;

 private:
  struct Entry {
    PointId id;
    bool center = false;
    // For a center: points it blocks. For a non-center: centers blocking it.
    std::vector<PointId> links;
  };
  struct Node {
    std::vector<Entry> entries;
  };

  Entry* Find(std::size_t node, PointId p);
  std::size_t CenterCount(std::size_t node) const;
  std::vector<PointId> InsertIntoNode(std::size_t node, PointId p);
  std::vector<PointId> DeleteFromNode(std::size_t node, PointId p);
  bool TryMakeCenter(std::size_t node, PointId p);
  void InsertUpward(std::size_t node, PointId p);
  void DeleteUpward(PointId p);
  void Split();
  void Contract();

  DistanceMeter meter_;
  std::size_t k_;
  double opt_;
  std::size_t leaves_ = 1;
  std::vector<Node> nodes_;
  std::unordered_map<PointId, std::size_t> leaf_of_;
};

}  // namespace dynclust

#endif  // DYNCLUST_CLUSTERING_TREE_HPP_
