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

#include <random>
#include <set>

#include "dynclust/exact.hpp"
#include "dynclust/kcenter_linear.hpp"
#include "dynclust/solution.hpp"
#include "test_support.hpp"

namespace dynclust {
namespace {

using testing::Matrix;

TEST(CounterKCenter, FirstInsertBecomesCenter) {
  auto oracle = testing::MatrixOracle(Matrix{{0}});
  CounterKCenter s(*oracle, 2, 1.0);
  const PointId p = oracle->RegisterSite(0);
  const CenterDelta delta = s.Insert(p);
  EXPECT_EQ(delta.added, std::vector<PointId>{p});
  EXPECT_EQ(s.centers(), std::set<PointId>{p});
}

TEST(CounterKCenter, CloseInsertIsNotACenter) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1}, {1, 0}});
  CounterKCenter s(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 2);
  s.Insert(ids[0]);
  EXPECT_TRUE(s.Insert(ids[1]).empty());
  EXPECT_FALSE(s.IsCenter(ids[1]));
  EXPECT_EQ(s.Audit(), "");
}

TEST(CounterKCenter, FarPairAssertsForOneCenter) {
  const Matrix d{{0, 3}, {3, 0}};
  auto oracle = testing::MatrixOracle(d);
  CounterKCenter s(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 2);
  s.Insert(ids[0]);
  s.Insert(ids[1]);
  EXPECT_TRUE(s.asserting());
  EXPECT_EQ(s.centers().size(), 2u);
  EXPECT_FALSE(s.Query().has_value());
  EXPECT_GT(testing::BruteKCenter(d, 1), 1.0);
}

TEST(CounterKCenter, DeletingNonCenterLeavesCentersAlone) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CounterKCenter s(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 3);
  for (PointId p : ids) s.Insert(p);
  EXPECT_TRUE(s.Delete(ids[2]).empty());
  EXPECT_EQ(s.centers(), std::set<PointId>{ids[0]});
  EXPECT_EQ(s.Audit(), "");
}

TEST(CounterKCenter, DeletedCenterPromotesItsOnlyNeighbor) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1}, {1, 0}});
  CounterKCenter s(*oracle, 1, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 2);
  s.Insert(ids[0]);
  s.Insert(ids[1]);
  const CenterDelta delta = s.Delete(ids[0]);
  EXPECT_EQ(delta.removed, std::vector<PointId>{ids[0]});
  EXPECT_EQ(delta.added, std::vector<PointId>{ids[1]});
  EXPECT_EQ(s.centers(), std::set<PointId>{ids[1]});
}

TEST(CounterKCenter, DeletedCenterPromotesOneOfTwoCloseNeighbors) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CounterKCenter s(*oracle, 2, 1.0);
  const auto ids = testing::RegisterAll(*oracle, 3);
  for (PointId p : ids) s.Insert(p);
  const CenterDelta delta = s.Delete(ids[0]);
  EXPECT_EQ(delta.added.size(), 1u);
  EXPECT_EQ(s.centers().size(), 1u);
  EXPECT_EQ(s.Audit(), "");
}

TEST(CounterKCenter, ThreeFarPointsAssertForTwoCenters) {
  const Matrix d{{0, 5, 5}, {5, 0, 5}, {5, 5, 0}};
  auto oracle = testing::MatrixOracle(d);
  CounterKCenter s(*oracle, 2, 1.0);
  for (PointId p : testing::RegisterAll(*oracle, 3)) s.Insert(p);
  EXPECT_TRUE(s.asserting());
  EXPECT_GT(testing::BruteKCenter(d, 2), 1.0);
}

TEST(CounterKCenter, OneBallGivesOneCenter) {
  std::mt19937_64 rng(1);
  const Matrix d = testing::RandomEuclidean(20, 2, rng, 0.5);
  auto oracle = testing::MatrixOracle(d);
  CounterKCenter s(*oracle, 3, 1.0);
  const auto ids = testing::RegisterAll(*oracle, d.size());
  for (PointId p : ids) s.Insert(p);
  EXPECT_EQ(s.centers().size(), 1u);
  const auto sol = s.Query();
  ASSERT_TRUE(sol.has_value());
  EXPECT_FALSE(FindUncovered(*oracle, *sol, ids).has_value());
}

TEST(CounterKCenter, EmptyStructureHasEmptySolution) {
  auto oracle = testing::MatrixOracle(Matrix{{0}});
  CounterKCenter s(*oracle, 2, 1.0);
  const auto sol = s.Query();
  ASSERT_TRUE(sol.has_value());
  EXPECT_TRUE(sol->clusters.empty());
  EXPECT_EQ(sol->cost, 0.0);
}

TEST(CounterKCenter, ContractViolationsThrow) {
  auto oracle = testing::MatrixOracle(Matrix{{0, 1}, {1, 0}});
  CounterKCenter s(*oracle, 1, 1.0);
  const PointId p = oracle->RegisterSite(0);
  s.Insert(p);
  EXPECT_THROW(s.Insert(p), ContractError);
  EXPECT_THROW(s.Delete(MakePointId(7)), ContractError);
}

// Random streams on random metrics: every invariant after every operation,
// centers become centers once, assertions are sound and answers feasible.
TEST(CounterKCenter, RandomStreamsKeepInvariants) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 12; ++trial) {
    Matrix d = trial % 2 ? testing::RandomGraphMetric(40, rng) : testing::RandomEuclidean(40, 2, rng, 6.0);
    testing::NormalizeToUnitMinimum(d);
    auto oracle = testing::MatrixOracle(d);
    const std::size_t k = 1 + trial % 4;
    const double est = 1.0 + trial % 3;
    CounterKCenter s(*oracle, k, est);
    std::vector<PointId> live;
    std::set<PointId> ever;
    std::size_t next_site = 0;
    for (int op = 0; op < 300; ++op) {
      const bool insert = live.empty() || (next_site < d.size() && std::bernoulli_distribution(0.6)(rng));
      CenterDelta delta;
      if (insert && next_site < d.size()) {
        const PointId p = oracle->RegisterSite(next_site++);
        delta = s.Insert(p);
        live.push_back(p);
      } else if (!live.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, live.size() - 1);
        const std::size_t i = pick(rng);
        delta = s.Delete(live[i]);
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        break;
      }
      for (PointId c : delta.added) EXPECT_TRUE(ever.insert(c).second) << "point promoted twice";
      ASSERT_EQ(s.Audit(), "") << "trial " << trial << " op " << op;
      EXPECT_LE(s.centers().size(), k + 1);
      if (s.asserting()) {
        if (live.size() <= 12) EXPECT_GT(ExactKCenter(*oracle, live, k).cost, est);
      } else {
        const auto sol = s.Query();
        ASSERT_TRUE(sol.has_value());
        EXPECT_LE(sol->clusters.size(), k);
        EXPECT_FALSE(FindUncovered(*oracle, *sol, live).has_value());
      }
    }
  }
}

}  // namespace
}  // namespace dynclust
