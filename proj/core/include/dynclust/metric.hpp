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

#ifndef DYNCLUST_METRIC_HPP_
#define DYNCLUST_METRIC_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dynclust/common.hpp"

namespace dynclust {

// A source of raw distances between sites. Sites are dense indices; points
// registered with the oracle are mapped onto sites.
class MetricBackend {
 public:
  virtual ~MetricBackend() = default;

  // Number of sites, or 0 when the backend is open-ended.
  virtual std::size_t num_sites() const = 0;
  virtual double SiteDistance(std::size_t a, std::size_t b) const = 0;

  // Maps an external key to a site. The default accepts decimal indices.
  virtual std::optional<std::size_t> FindSite(std::string_view key) const;
  virtual std::string SiteKey(std::size_t site) const;
};

class MatrixBackend final : public MetricBackend {
 public:
  // Rows must form a square symmetric matrix with a zero diagonal.
  explicit MatrixBackend(std::vector<std::vector<double>> rows);

  std::size_t num_sites() const override { return n_; }
  double SiteDistance(std::size_t a, std::size_t b) const override;

 private:
  std::size_t n_;
  std::vector<double> d_;
};

class EuclideanBackend final : public MetricBackend {
 public:
  EuclideanBackend(std::vector<std::vector<double>> coords,
                   std::vector<std::string> keys = {});

  std::size_t num_sites() const override { return coords_.size(); }
  double SiteDistance(std::size_t a, std::size_t b) const override;
  std::optional<std::size_t> FindSite(std::string_view key) const override;
  std::string SiteKey(std::size_t site) const override;

  const std::vector<double>& coords(std::size_t site) const { return coords_[site]; }

 private:
  std::vector<std::vector<double>> coords_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Shortest-path metric of a weighted undirected graph. Rows are computed on
// first use with Dijkstra and cached.
class GraphBackend final : public MetricBackend {
 public:
  struct Edge {
    std::size_t u;
    std::size_t v;
    double w;
  };
  GraphBackend(std::size_t n, const std::vector<Edge>& edges,
               double unreachable = std::numeric_limits<double>::infinity());

  std::size_t num_sites() const override { return adj_.size(); }
  double SiteDistance(std::size_t a, std::size_t b) const override;

 private:
  const std::vector<double>& Row(std::size_t source) const;

  std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
  double unreachable_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::size_t, std::vector<double>> rows_;
};

class CallbackBackend final : public MetricBackend {
 public:
  using Fn = std::function<double(std::size_t, std::size_t)>;
  CallbackBackend(Fn fn, std::size_t num_sites = 0)
      : fn_(std::move(fn)), n_(num_sites) {}

  std::size_t num_sites() const override { return n_; }
  double SiteDistance(std::size_t a, std::size_t b) const override { return fn_(a, b); }

 private:
  Fn fn_;
  std::size_t n_;
};

// Point registry plus counted distance access. Registration and retirement
// are single-writer; Distance may be called concurrently.
class MetricOracle {
 public:
  explicit MetricOracle(std::unique_ptr<MetricBackend> backend,
                        double delta_bound = std::numeric_limits<double>::infinity());

  MetricOracle(const MetricOracle&) = delete;
  MetricOracle& operator=(const MetricOracle&) = delete;

  PointId RegisterPoint(std::string_view key);
  PointId RegisterSite(std::size_t site);
  void RetirePoint(PointId p);

  bool IsRegistered(PointId p) const { return Index(p) < site_.size(); }
  bool IsLive(PointId p) const;
  std::size_t num_registered() const { return site_.size(); }
  std::size_t num_live() const { return num_live_; }
  std::size_t site_of(PointId p) const;
  std::string key_of(PointId p) const;
  std::optional<PointId> LiveByKey(std::string_view key) const;
  std::vector<PointId> LivePoints() const;

  // Counted distance. d(p, p) is free.
  double Distance(PointId p, PointId q) const;
  // Uncounted distance for audits and offline solvers.
  double Peek(PointId p, PointId q) const;

  std::uint64_t query_count() const { return queries_.load(std::memory_order_relaxed); }

  // Divides every distance by the smallest positive pairwise site distance
  // and returns that minimum; returns 1 when fewer than two sites exist.
  double RescaleToUnitMinimum();
  // Largest pairwise site distance after scaling (explicit backends only).
  double MaxSiteDistance() const;

  double scale() const { return scale_; }
  double delta_bound() const { return delta_bound_; }
  void set_delta_bound(double delta) { delta_bound_ = delta; }
  const MetricBackend& backend() const { return *backend_; }

 private:
  double Raw(PointId p, PointId q) const;

  std::unique_ptr<MetricBackend> backend_;
  std::vector<std::size_t> site_;
  std::vector<bool> live_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, PointId> live_by_key_;
  std::size_t num_live_ = 0;
  mutable std::atomic<std::uint64_t> queries_{0};
  double scale_ = 1.0;
  double delta_bound_;
};

// Per-structure distance counter forwarding to a shared oracle.
class DistanceMeter {
 public:
  explicit DistanceMeter(const MetricOracle& oracle) : oracle_(&oracle) {}

  double operator()(PointId p, PointId q) {
    if (p != q) ++count_;
    return oracle_->Distance(p, q);
  }
  std::uint64_t count() const { return count_; }
  const MetricOracle& oracle() const { return *oracle_; }

 private:
  const MetricOracle* oracle_;
  std::uint64_t count_ = 0;
};

std::unique_ptr<MatrixBackend> LoadMatrix(std::istream& in);
std::unique_ptr<EuclideanBackend> LoadCoordinates(std::istream& in);
void WriteMatrix(std::ostream& out, const std::vector<std::vector<double>>& rows);

// Maximum over triples of the triangle-inequality excess on the given sites;
// zero means the triangle inequality holds.
double TriangleViolation(const MetricBackend& backend, std::size_t num_sites);

}  // namespace dynclust

#endif  // DYNCLUST_METRIC_HPP_
