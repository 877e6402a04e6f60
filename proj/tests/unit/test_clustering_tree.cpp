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

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "dynclust/clustering_tree.hpp"
#include "dynclust/exact.hpp"
#include "dynclust/kcenter_delonly.hpp"
#include "dynclust/solution.hpp"
#include "test_support.hpp"

namespace dynclust {
namespace {

using testing::Matrix;

Matrix Uniform(std::size_t n, double d) {
  Matrix m(n, std::vector<double>(n, d));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 0.0;
  return m;
}

std::vector<PointId> SubtreePoints(const ClusteringTree& t, std::size_t node) {
  if (node >= t.num_leaves()) return t.NodePoints(node);
  auto left = SubtreePoints(t, 2 * node);
  const auto right = SubtreePoints(t, 2 * node + 1);
  left.insert(left.end(), right.begin(), right.end());
  return left;
}

TEST(ClusteringTree, FirstInsertIsRootCenter) {
  auto oracle = testing::MatrixOracle(Matrix{{0}});
  ClusteringTree t(*oracle, 2, 1.0);
  const PointId p = oracle->RegisterSite(0);
  t.Insert(p);
  EXPECT_EQ(t.NodeCenters(1), std::vector<PointId>{p});
  EXPECT_EQ(t.depth(), 0u);
}

TEST(ClusteringTree, CloseInsertIsBlocked) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1}, {1, 0}});
  ClusteringTree t(*oracle, 2, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 2);
  t.Insert(ids[0]);
  t.Insert(ids[1]);
  EXPECT_EQ(t.NodeCenters(1), std::vector<PointId>{ids[0]});
  EXPECT_FALSE(t.has_witness());
  EXPECT_EQ(t.Audit(), "");
}

TEST(ClusteringTree, FarPointsWithOneCenterFormAWitness) {
  const Matrix d = Uniform(3, 5.0);
  auto oracle = testing::MatrixOracle(d);
  ClusteringTree t(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 3);
  for (PointId p : ids) t.Insert(p);
  EXPECT_TRUE(t.has_witness());
  EXPECT_FALSE(t.Query().has_value());
  const auto witness = t.WitnessPoints();
  ASSERT_EQ(witness.size(), 2u);
  EXPECT_GT(oracle->Peek(witness[0], witness[1]), 1.0);
  EXPECT_GT(testing::BruteKCenter(d, 1), 0.5);
  EXPECT_EQ(t.Audit(), "");
}

TEST(ClusteringTree, DeletingNonCenterOnlyRemovesIt) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1}, {1, 0}});
  ClusteringTree t(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 2);
  t.Insert(ids[0]);
  t.Insert(ids[1]);
  t.Delete(ids[1]);
  EXPECT_EQ(t.NodeCenters(1), std::vector<PointId>{ids[0]});
  EXPECT_EQ(t.size(), 1u);
  EXPECT_EQ(t.Audit(), "");
}

TEST(ClusteringTree, DeletedCenterPromotesItsNeighborUpward) {
  const Matrix d{{0, 1, 9}, {1, 0, 9}, {9, 9, 0}};
  auto oracle = testing::MatrixOracle(d);
  ClusteringTree t(*oracle, 2, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 3);
  for (PointId p : ids) t.Insert(p);
  t.Delete(ids[0]);
  EXPECT_EQ(t.Audit(), "");
  const auto root = t.NodeCenters(1);
  EXPECT_NE(std::find(root.begin(), root.end(), ids[1]), root.end());
}

TEST(ClusteringTree, DeletedCenterPromotesOneOfTwoCloseNeighbors) {
  auto oracle = testing::MatrixOracle(Uniform(3, 1.0));
  ClusteringTree t(*oracle, 2, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 3);
  for (PointId p : ids) t.Insert(p);
  t.Delete(ids[0]);
  EXPECT_EQ(t.NodeCenters(1).size(), 1u);
  EXPECT_EQ(t.Audit(), "");
}

TEST(ClusteringTree, OneBallKeepsOneRootCenter) {
  auto oracle = testing::MatrixOracle(Uniform(40, 1.0));
  ClusteringTree t(*oracle, 2, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 40);
  for (PointId p : ids) t.Insert(p);
  EXPECT_EQ(t.NodeCenters(1).size(), 1u);
  const auto sol = t.Query();
  ASSERT_TRUE(sol.has_value());
  EXPECT_LE(sol->cost, (CeilLog2(20) + 1) * 1.0);
  EXPECT_FALSE(FindUncovered(*oracle, *sol, ids).has_value());
  EXPECT_EQ(t.Audit(), "");
}

TEST(ClusteringTree, SingleLeafCentersCoverWithinTheEstimate) {
  std::mt19937_64 rng(6);
  Matrix d = testing::RandomEuclidean(6, 2, rng, 4.0);
  auto oracle = testing::MatrixOracle(d);
  ClusteringTree t(*oracle, 3, 2.0);
  const auto ids = testing::RegisterAll(*oracle, 6);
  for (PointId p : ids) t.Insert(p);
  EXPECT_EQ(t.num_leaves(), 1u);
  if (!t.has_witness()) EXPECT_LE(testing::CoverRadius(*oracle, t.NodeCenters(1), ids), 2.0);
}

TEST(ClusteringTree, LeavesSplitAndContract) {
  auto oracle = testing::MatrixOracle(Uniform(9, 1.0));
  ClusteringTree t(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 9);
  for (PointId p : ids) {
    t.Insert(p);
    ASSERT_EQ(t.Audit(), "");
  }
  EXPECT_EQ(t.num_leaves(), 5u);
  for (PointId p : ids) {
    t.Delete(p);
    ASSERT_EQ(t.Audit(), "");
  }
  EXPECT_EQ(t.num_leaves(), 1u);
  EXPECT_EQ(t.size(), 0u);
}

// Random streams: audit after every operation, marks within a node are never
// dropped while the leaf count is unchanged, witnesses are sound, answers are
// feasible, super clusters are represented, and replays are identical.
TEST(ClusteringTree, RandomStreamsKeepInvariants) {
  std::mt19937_64 rng(1618);
  for (int trial = 0; trial < 12; ++trial) {
    Matrix d = trial % 2 ? testing::RandomGraphMetric(60, rng, 12) : testing::RandomEuclidean(60, 2, rng, 8.0);
    testing::NormalizeToUnitMinimum(d);
    const std::size_t k = 1 + trial % 3;
    const double est = 2.0 + 2.0 * (trial % 4);
    auto oracle = testing::MatrixOracle(d);
    auto replay = testing::MatrixOracle(d);
    ClusteringTree t(*oracle, k, est);
    ClusteringTree twin(*replay, k, est);
    std::vector<PointId> live;
    std::size_t next = 0;
    std::mt19937_64 ops(static_cast<std::uint64_t>(trial));
    for (int op = 0; op < 160 && (next < d.size() || !live.empty()); ++op) {
      std::map<std::size_t, std::vector<PointId>> marks;
      for (std::size_t n = 1; n <= t.num_nodes(); ++n) marks[n] = t.NodeCenters(n);
      const std::size_t leaves = t.num_leaves();
      if (next < d.size() && (live.empty() || std::bernoulli_distribution(0.6)(ops))) {
        const PointId p = oracle->RegisterSite(next);
        twin.Insert(replay->RegisterSite(next));
        ++next;
        t.Insert(p);
        live.push_back(p);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        const std::size_t i = pick(ops);
        t.Delete(live[i]);
        twin.Delete(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      }
      ASSERT_EQ(t.Audit(), "") << "trial " << trial << " op " << op;
      ASSERT_EQ(t.Fingerprint(), twin.Fingerprint());
      if (t.num_leaves() == leaves) {
        for (const auto& [n, before] : marks) {
          const auto points = t.NodePoints(n);
          const auto now = t.NodeCenters(n);
          for (PointId c : before) {
            const bool kept = std::binary_search(points.begin(), points.end(), c);
            if (kept) EXPECT_TRUE(std::binary_search(now.begin(), now.end(), c)) << "mark dropped";
          }
        }
      }
      if (t.has_witness()) {
        const auto witness = t.WitnessPoints();
        ASSERT_EQ(witness.size(), k + 1);
        for (std::size_t a = 0; a < witness.size(); ++a) {
          for (std::size_t b = a + 1; b < witness.size(); ++b) EXPECT_GT(oracle->Peek(witness[a], witness[b]), est);
        }
        EXPECT_GT(ExactKCenter(*oracle, witness, k).cost, est / 2.0);
        continue;
      }
      const auto sol = t.Query();
      ASSERT_TRUE(sol.has_value());
      EXPECT_FALSE(FindUncovered(*oracle, *sol, live).has_value());
      EXPECT_LE(sol->clusters.size(), k);

      // Super clusters of an optimal solution of cost at most est / 2.
      if (live.empty() || live.size() > 40) continue;
      const ExactResult opt = ExactKCenter(*oracle, live, k);
      if (opt.cost > est / 2.0) continue;
      const auto centers = opt.witness.Centers();
      std::vector<std::size_t> comp(centers.size());
      std::iota(comp.begin(), comp.end(), 0);
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < centers.size(); ++a) {
          for (std::size_t b = 0; b < centers.size(); ++b) {
            if (oracle->Peek(centers[a], centers[b]) <= 2.0 * est && comp[b] < comp[a]) {
              comp[a] = comp[b];
              changed = true;
            }
          }
        }
      }
      const auto super_of = [&](PointId p) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < centers.size(); ++c) {
          if (oracle->Peek(p, centers[c]) < oracle->Peek(p, centers[best])) best = c;
        }
        return comp[best];
      };
      for (std::size_t n = 1; n <= t.num_nodes(); ++n) {
        std::set<std::size_t> needed;
        for (PointId p : SubtreePoints(t, n)) needed.insert(super_of(p));
        std::set<std::size_t> have;
        for (PointId c : t.NodeCenters(n)) have.insert(super_of(c));
        EXPECT_EQ(needed, have) << "node " << n;
      }
    }
  }
}

}  // namespace
}  // namespace dynclust
