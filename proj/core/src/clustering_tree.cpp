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

#include "dynclust/clustering_tree.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "dynclust/kcenter_delonly.hpp"
#include "dynclust/solution.hpp"

namespace dynclust {

namespace {

void EraseValue(std::vector<PointId>& v, PointId p) {
  auto it = std::find(v.begin(), v.end(), p);
  if (it != v.end()) v.erase(it);
}

}  // namespace

ClusteringTree::ClusteringTree(const MetricOracle& oracle, std::size_t k, double opt_estimate)
    : meter_(oracle), k_(k), opt_(opt_estimate), nodes_(2) {
  if (k == 0) throw ContractError("k must be positive");
  if (!(opt_estimate > 0.0)) throw ContractError("estimate must be positive");
}

ClusteringTree::Entry* ClusteringTree::Find(std::size_t node, PointId p) {
  for (Entry& e : nodes_[node].entries) {
    if (e.id == p) return &e;
  }
  return nullptr;
}

std::size_t ClusteringTree::CenterCount(std::size_t node) const {
  std::size_t c = 0;
  for (const Entry& e : nodes_[node].entries) c += e.center ? 1 : 0;
  return c;
}

bool ClusteringTree::TryMakeCenter(std::size_t node, PointId p) {
  Entry* e = Find(node, p);
  if (e == nullptr || e->center || !e->links.empty()) return false;
  if (CenterCount(node) >= k_) return false;
  e->center = true;
  for (Entry& v : nodes_[node].entries) {
    if (v.id == p || v.center) continue;
    if (meter_(p, v.id) <= opt_) {
      v.links.push_back(p);
      Find(node, p)->links.push_back(v.id);
    }
  }
  return true;
}

std::vector<PointId> ClusteringTree::InsertIntoNode(std::size_t node, PointId p) {
  Entry fresh{p, false, {}};
  for (Entry& c : nodes_[node].entries) {
    if (!c.center) continue;
    if (meter_(p, c.id) <= opt_) {
      c.links.push_back(p);
      fresh.links.push_back(c.id);
    }
  }
  nodes_[node].entries.push_back(std::move(fresh));
  if (TryMakeCenter(node, p)) return {p};
  return {};
}

std::vector<PointId> ClusteringTree::DeleteFromNode(std::size_t node, PointId p) {
  auto& entries = nodes_[node].entries;
  auto it = std::find_if(entries.begin(), entries.end(), [&](const Entry& e) { return e.id == p; });
  if (it == entries.end()) return {};
  const Entry gone = std::move(*it);
  entries.erase(it);
  for (PointId q : gone.links) {
    if (Entry* e = Find(node, q)) EraseValue(e->links, p);
  }
  std::vector<PointId> promoted;
  if (!gone.center) return promoted;
  for (PointId q : gone.links) {
    if (TryMakeCenter(node, q)) promoted.push_back(q);
  }
  // Points left unblocked while the node was full may now fit as centers.
  std::vector<PointId> free_points;
  for (const Entry& e : entries) {
    if (!e.center && e.links.empty()) free_points.push_back(e.id);
  }
  std::sort(free_points.begin(), free_points.end());
  for (PointId q : free_points) {
    if (TryMakeCenter(node, q)) promoted.push_back(q);
  }
  return promoted;
}

void ClusteringTree::InsertUpward(std::size_t node, PointId p) {
  while (true) {
    const auto marked = InsertIntoNode(node, p);
    if (marked.size() != 1 || node == 1) return;
    node /= 2;
  }
}

void ClusteringTree::DeleteUpward(PointId p) {
  std::size_t node = leaf_of_.at(p);
  std::vector<PointId> up = DeleteFromNode(node, p);
  while (node > 1) {
    const std::size_t parent = node / 2;
    std::vector<PointId> next = DeleteFromNode(parent, p);
    for (PointId v : up) {
      const auto marked = InsertIntoNode(parent, v);
      next.insert(next.end(), marked.begin(), marked.end());
    }
    up = std::move(next);
    node = parent;
  }
}

void ClusteringTree::Split() {
  const std::size_t m = leaves_;
  nodes_.resize(2 * m + 2);
  nodes_[2 * m] = std::move(nodes_[m]);
  nodes_[2 * m + 1] = Node{};
  nodes_[m] = Node{};
  for (const Entry& e : nodes_[2 * m].entries) leaf_of_[e.id] = 2 * m;
  std::vector<PointId> centers;
  for (const Entry& e : nodes_[2 * m].entries) {
    if (e.center) centers.push_back(e.id);
  }
  std::sort(centers.begin(), centers.end());
  for (PointId c : centers) InsertIntoNode(m, c);
  leaves_ = m + 1;
}

void ClusteringTree::Contract() {
  const std::size_t m = leaves_;
  const std::size_t sibling = 2 * m - 2;
  const std::size_t parent = m - 1;
  std::set<PointId> before;
  for (const Entry& e : nodes_[parent].entries) {
    if (e.center) before.insert(e.id);
  }
  nodes_[parent] = std::move(nodes_[sibling]);
  nodes_.resize(2 * m - 2);
  leaves_ = m - 1;
  std::vector<PointId> exposed;
  for (const Entry& e : nodes_[parent].entries) {
    leaf_of_[e.id] = parent;
    if (e.center && before.count(e.id) == 0) exposed.push_back(e.id);
  }
  std::sort(exposed.begin(), exposed.end());
  if (parent == 1) return;
  for (PointId v : exposed) InsertUpward(parent / 2, v);
}

void ClusteringTree::Insert(PointId p) {
  if (leaf_of_.count(p)) throw ContractError("point inserted twice");
  if (nodes_[2 * leaves_ - 1].entries.size() >= 2 * k_) Split();
  const std::size_t leaf = 2 * leaves_ - 1;
  leaf_of_[p] = leaf;
  InsertUpward(leaf, p);
}

void ClusteringTree::Delete(PointId p) {
  auto it = leaf_of_.find(p);
  if (it == leaf_of_.end()) throw ContractError("deleting a point that is not stored");
  const std::size_t leaf = it->second;
  DeleteUpward(p);
  leaf_of_.erase(p);

  const std::size_t last = 2 * leaves_ - 1;
  if (leaf != last && !nodes_[last].entries.empty()) {
    PointId moved = nodes_[last].entries.front().id;
    for (const Entry& e : nodes_[last].entries) moved = std::max(moved, e.id);
    DeleteUpward(moved);
    leaf_of_[moved] = leaf;
    InsertUpward(leaf, moved);
  }
  if (leaves_ > 1 && nodes_[2 * leaves_ - 1].entries.empty()) Contract();
}

std::size_t ClusteringTree::depth() const {
  return static_cast<std::size_t>(std::bit_width(2 * leaves_ - 1)) - 1;
}

bool ClusteringTree::has_witness() const {
  for (std::size_t n = 1; n < 2 * leaves_; ++n) {
    for (const Entry& e : nodes_[n].entries) {
      if (!e.center && e.links.empty()) return true;
    }
  }
  return false;
}

std::vector<PointId> ClusteringTree::WitnessPoints() const {
  for (std::size_t n = 1; n < 2 * leaves_; ++n) {
    for (const Entry& e : nodes_[n].entries) {
      if (!e.center && e.links.empty()) {
        std::vector<PointId> out = NodeCenters(n);
        out.push_back(e.id);
        return out;
      }
    }
  }
  return {};
}

std::optional<Solution> ClusteringTree::Query() const {
  if (has_witness()) return std::nullopt;
  const auto centers = NodeCenters(1);
  return UniformRadiusSolution(centers, static_cast<double>(depth() + 1) * opt_);
}

std::vector<PointId> ClusteringTree::NodePoints(std::size_t node) const {
  std::vector<PointId> out;
  for (const Entry& e : nodes_.at(node).entries) out.push_back(e.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PointId> ClusteringTree::NodeCenters(std::size_t node) const {
  std::vector<PointId> out;
  for (const Entry& e : nodes_.at(node).entries) {
    if (e.center) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string ClusteringTree::Fingerprint() const {
  std::ostringstream out;
  for (std::size_t n = 1; n < 2 * leaves_; ++n) {
    out << n << ':';
    for (const Entry& e : nodes_[n].entries) {
      out << ' ' << Index(e.id) << (e.center ? "*" : "") << '/' << e.links.size();
    }
    out << '\n';
  }
  return out.str();
}

std::string ClusteringTree::Audit() const {
  const MetricOracle& oracle = meter_.oracle();
  std::ostringstream err;
  const std::size_t first_leaf = leaves_;
  const std::size_t last_leaf = 2 * leaves_ - 1;
  std::size_t stored = 0;
  for (std::size_t n = 1; n <= last_leaf; ++n) {
    const auto& entries = nodes_[n].entries;
    if (entries.size() > 2 * k_) err << "node " << n << " holds more than 2k points; ";
    const auto centers = NodeCenters(n);
    if (centers.size() > k_) err << "node " << n << " marks more than k centers; ";
    for (std::size_t i = 0; i < centers.size(); ++i) {
      for (std::size_t j = i + 1; j < centers.size(); ++j) {
        if (oracle.Peek(centers[i], centers[j]) <= opt_) err << "node " << n << " has close centers; ";
      }
    }
    bool unblocked = false;
    for (const Entry& e : entries) {
      std::vector<PointId> expect;
      for (const Entry& o : entries) {
        if (o.id == e.id || e.center == o.center) continue;
        if (oracle.Peek(e.id, o.id) <= opt_) expect.push_back(o.id);
      }
      std::vector<PointId> have = e.links;
      std::sort(expect.begin(), expect.end());
      std::sort(have.begin(), have.end());
      if (expect != have) err << "node " << n << " blocking edges wrong at point " << Index(e.id) << "; ";
      if (!e.center && e.links.empty()) unblocked = true;
    }
    if (unblocked && centers.size() != k_) err << "node " << n << " has an unblocked point below k centers; ";

    if (n < first_leaf) {
      std::vector<PointId> expect = NodeCenters(2 * n);
      const auto right = NodeCenters(2 * n + 1);
      expect.insert(expect.end(), right.begin(), right.end());
      std::sort(expect.begin(), expect.end());
      if (expect != NodePoints(n)) err << "inner node " << n << " does not hold its children's centers; ";
    } else {
      stored += entries.size();
      for (const Entry& e : entries) {
        auto it = leaf_of_.find(e.id);
        if (it == leaf_of_.end() || it->second != n) err << "leaf map mismatch; ";
      }
      if (n != last_leaf && entries.size() != 2 * k_) err << "leaf " << n << " is not full; ";
    }
  }
  if (stored != leaf_of_.size()) err << "leaves do not partition the points; ";
  if (leaves_ > 1 && nodes_[last_leaf].entries.empty()) err << "empty last leaf; ";
  if (!leaf_of_.empty()) {
    const std::size_t ratio = (leaf_of_.size() + k_ - 1) / k_;
    if (depth() > CeilLog2(ratio)) err << "tree deeper than ceil(log2(n/k)); ";
  }
  return err.str();
}

}  // namespace dynclust
