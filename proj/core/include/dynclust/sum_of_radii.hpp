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

#ifndef DYNCLUST_SUM_OF_RADII_HPP_
#define DYNCLUST_SUM_OF_RADII_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/exact.hpp"
#include "dynclust/metric.hpp"

namespace dynclust {

struct SumOfRadiiParams {
  std::size_t k = 1;
  double epsilon = 1.0;  // 1/epsilon must be an integer
  double opt_estimate = 1.0;
  std::uint64_t seed = 0;
  OfflineMode offline = OfflineMode::kExact;
  // kSumOfRadii or kSumOfDiameters: which cost Query reports.
  Objective view = Objective::kSumOfRadii;
  // Raise checks cover radii up to twice the estimate instead of up to the
  // estimate; without it dual feasibility can fail for radii above half the
  // estimate.
  bool extended_raise_check = true;
  // Report the estimate too small when the offline optimum on the pruned
  // centers exceeds twice the estimate.
  bool certify_with_offline = true;
  // Report the estimate too small when the combined solution costs more than
  // (8 + epsilon) estimates and the dual total exceeds (1 + 2 epsilon)
  // estimates. Rounding an optimal solution up to multiples of the unit and
  // paying one unit per cluster bounds the dual by the optimum plus 2k units.
  bool certify_with_dual = true;
};

// Dynamic primal-dual sum-of-radii for one estimate. The unit z is
// epsilon * estimate / k, candidate radii are multiples of z, and dual values
// are tracked as integer counts of z/2.
class PrimalDualSumOfRadii {
 public:
  struct Round {
    PointId center;
    std::int64_t dual_halves = 0;   // raise of the center's dual value
    std::int64_t tight_multiple = 0;  // half-tight radius in units of z
    std::vector<PointId> members;   // points first covered in this round
  };
  struct PrunedCluster {
    PointId center;
    double radius;
    std::size_t round;
  };

  PrimalDualSumOfRadii(const MetricOracle& oracle, const SumOfRadiiParams& params);

  void Insert(PointId p);
  void Delete(PointId p);

  // Final solution with at most k clusters, or nullopt when the estimate is
  // too small.
  std::optional<Solution> Query() const;

  double unit() const { return z_; }
  std::int64_t radius_multiples() const { return multiples_; }
  std::size_t round_cap() const { return cap_; }
  std::size_t rounds() const { return rounds_.size(); }
  const std::vector<Round>& round_log() const { return rounds_; }
  bool capped() const { return capped_; }
  bool offline_certified() const { return offline_certified_; }
  bool dual_certified() const { return dual_certified_; }
  bool asserting() const { return capped_ || offline_certified_ || dual_certified_; }
  std::size_t size() const { return slot_.size(); }
  std::size_t max_rounds_seen() const { return max_rounds_; }

  // Cluster radius of a round: twice its half-tight radius.
  double RoundRadius(const Round& r) const { return 2.0 * static_cast<double>(r.tight_multiple) * z_; }
  double DualTotal() const;
  const std::vector<PrunedCluster>& pruned() const { return pruned_; }
  const Solution& combined() const { return combined_; }
  const Solution& offline_solution() const { return offline_; }
  std::uint64_t distance_queries() const { return meter_.count(); }
  double opt_estimate() const { return opt_; }

  // Checks every dual constraint (p, m z), m = 1..k/epsilon, over stored points.
  std::string DualAudit() const;
  std::string Audit() const;

 private:
  struct Slot {
    int round;  // -1: uncovered
    std::size_t pos;
  };

  // Distances between round centers are remembered; points never return
  // after deletion, so entries stay valid.
  double CenterDistance(PointId a, PointId b);
  double Threshold(std::int64_t m) const { return static_cast<double>(m) * z_; }
  std::vector<PointId>& ListOf(int round) { return round < 0 ? uncovered_ : rounds_[round].members; }
  void Attach(PointId p, int round);
  void Detach(PointId p);
  void Iterate();
  void Step();
  void Refresh();

  DistanceMeter meter_;
  SumOfRadiiParams params_;
  double opt_;
  std::int64_t multiples_;
  std::int64_t checked_multiples_;
  double z_;
  std::size_t cap_;
  std::mt19937_64 rng_;

  std::vector<Round> rounds_;
  std::vector<PointId> uncovered_;
  std::unordered_map<PointId, Slot> slot_;
  std::unordered_map<std::uint64_t, double> center_distance_;
  bool capped_ = false;
  std::size_t max_rounds_ = 0;

  std::vector<PrunedCluster> pruned_;
  Solution offline_;
  Solution combined_;
  bool offline_certified_ = false;
  bool dual_certified_ = false;
};

// Greedy pruning: scan by non-increasing radius (ties by round) and keep a
// cluster unless a kept one is closer than the sum of both radii. Kept
// clusters are returned with tripled radii.
using DistanceFn = std::function<double(PointId, PointId)>;

std::vector<PrimalDualSumOfRadii::PrunedCluster> PruneClusters(
    const DistanceFn& dist, std::vector<PrimalDualSumOfRadii::PrunedCluster> clusters);

// Merges pruned clusters through an offline solution on their centers.
Solution CombineClusters(const DistanceFn& dist,
                         std::span<const PrimalDualSumOfRadii::PrunedCluster> pruned,
                         const Solution& offline);

}  // namespace dynclust

#endif  // DYNCLUST_SUM_OF_RADII_HPP_
