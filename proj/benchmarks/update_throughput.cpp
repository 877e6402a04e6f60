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

#include <benchmark/benchmark.h>

#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "dynclust/clustering_tree.hpp"
#include "dynclust/kcenter_delonly.hpp"
#include "dynclust/kcenter_fully.hpp"
#include "dynclust/kcenter_linear.hpp"
#include "dynclust/metric.hpp"
#include "dynclust/sum_of_radii.hpp"

namespace dynclust {
namespace {

// Uniform points in the unit square scaled so the smallest distance is 1.
std::unique_ptr<MetricOracle> Points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> coords(n, std::vector<double>(2));
  for (auto& p : coords) {
    for (double& x : p) x = unit(rng);
  }
  auto oracle = std::make_unique<MetricOracle>(std::make_unique<EuclideanBackend>(std::move(coords)));
  oracle->RescaleToUnitMinimum();
  return oracle;
}

// Estimate near the k-center optimum of n uniform points after rescaling.
double Estimate(const MetricOracle& oracle, std::size_t k) {
  return oracle.MaxSiteDistance() / (2.0 * std::sqrt(static_cast<double>(k)));
}

// Inserts every point, then deletes them in insertion order.
template <typename Structure>
void InsertThenDelete(benchmark::State& state, const std::function<std::unique_ptr<Structure>(const MetricOracle&)>& make) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t queries = 0;
  for (auto _ : state) {
    state.PauseTiming();
    auto oracle = Points(n, 1);
    auto s = make(*oracle);
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(oracle->RegisterSite(i));
    state.ResumeTiming();
    for (PointId p : ids) s->Insert(p);
    for (PointId p : ids) s->Delete(p);
    queries += oracle->query_count();
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * 2 * n));
  state.counters["queries/update"] =
      benchmark::Counter(static_cast<double>(queries) / static_cast<double>(state.iterations() * 2 * n));
}

void BM_CounterKCenter(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(1));
  InsertThenDelete<CounterKCenter>(state, [k](const MetricOracle& o) {
    return std::make_unique<CounterKCenter>(o, k, Estimate(o, k));
  });
}
BENCHMARK(BM_CounterKCenter)->ArgsProduct({{500, 2000}, {2, 8}});

void BM_FullyDynamicKCenter(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(1));
  InsertThenDelete<FullyDynamicKCenter>(state, [k](const MetricOracle& o) {
    return std::make_unique<FullyDynamicKCenter>(o, k, Estimate(o, k), 3);
  });
}
BENCHMARK(BM_FullyDynamicKCenter)->ArgsProduct({{500, 2000}, {2, 8}});

void BM_ClusteringTree(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(1));
  InsertThenDelete<ClusteringTree>(state, [k](const MetricOracle& o) {
    return std::make_unique<ClusteringTree>(o, k, Estimate(o, k));
  });
}
BENCHMARK(BM_ClusteringTree)->ArgsProduct({{500, 2000}, {2, 8}});

void BM_PrimalDualSumOfRadii(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(1));
  InsertThenDelete<PrimalDualSumOfRadii>(state, [k](const MetricOracle& o) {
    SumOfRadiiParams p;
    p.k = k;
    p.epsilon = 0.5;
    p.opt_estimate = static_cast<double>(k) * Estimate(o, k);
    p.offline = OfflineMode::kExactOrGreedy;
    return std::make_unique<PrimalDualSumOfRadii>(o, p);
  });
}
BENCHMARK(BM_PrimalDualSumOfRadii)->ArgsProduct({{200, 500}, {2, 3}});

void BM_DeletionOnlyKCenter(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    state.PauseTiming();
    auto oracle = Points(n, 1);
    DeletionOnlyKCenter s(*oracle, k, Estimate(*oracle, k), 5);
    std::vector<PointId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(oracle->RegisterSite(i));
    state.ResumeTiming();
    s.Build(ids);
    for (PointId p : ids) s.Delete(p);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_DeletionOnlyKCenter)->ArgsProduct({{500, 2000}, {2, 8}});

}  // namespace
}  // namespace dynclust

BENCHMARK_MAIN();
