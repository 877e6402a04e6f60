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

#ifndef DYNCLUST_TESTS_SUPPORT_TEST_SUPPORT_HPP_
#define DYNCLUST_TESTS_SUPPORT_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <vector>

#include "dynclust/common.hpp"
#include "dynclust/metric.hpp"

namespace dynclust::testing {

using Matrix = std::vector<std::vector<double>>;

inline std::unique_ptr<MetricOracle> MatrixOracle(const Matrix& rows) {
  return std::make_unique<MetricOracle>(std::make_unique<MatrixBackend>(rows));
}

// Registers every site of the oracle's backend in order.
inline std::vector<PointId> RegisterAll(MetricOracle& oracle, std::size_t n) {
  std::vector<PointId> ids;
  for (std::size_t i = 0; i < n; ++i) ids.push_back(oracle.RegisterSite(i));
  return ids;
}

// Uniform points in the unit cube, returned as a distance matrix.
inline Matrix RandomEuclidean(std::size_t n, std::size_t dim, std::mt19937_64& rng, double side = 1.0) {
  std::uniform_real_distribution<double> u(0.0, side);
  std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
  for (auto& p : pts) {
    for (double& x : p) x = u(rng);
  }
  Matrix d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) s += (pts[i][c] - pts[j][c]) * (pts[i][c] - pts[j][c]);
      d[i][j] = d[j][i] = std::sqrt(s);
    }
  }
  return d;
}

// Shortest-path closure of a random connected weighted graph with integer
// weights in [1, max_weight].
inline Matrix RandomGraphMetric(std::size_t n, std::mt19937_64& rng, int max_weight = 10,
                                double extra_edge_prob = 0.2) {
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d(n, std::vector<double>(n, inf));
  std::uniform_int_distribution<int> w(1, max_weight);
  std::bernoulli_distribution extra(extra_edge_prob);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> parent(0, i - 1);
    const std::size_t j = parent(rng);
    d[i][j] = d[j][i] = w(rng);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (extra(rng)) {
        const double x = w(rng);
        d[i][j] = d[j][i] = std::min(d[i][j], x);
      }
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
    }
  }
  return d;
}

// Divides by the smallest positive entry so the minimum distance is 1.
inline double NormalizeToUnitMinimum(Matrix& d) {
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d[i][j] > 0.0) lo = std::min(lo, d[i][j]);
    }
  }
  if (!std::isfinite(lo)) return 1.0;
  for (auto& row : d) {
    for (double& x : row) x /= lo;
  }
  return lo;
}

inline double MaxEntry(const Matrix& d) {
  double hi = 0.0;
  for (const auto& row : d) {
    for (double x : row) hi = std::max(hi, x);
  }
  return hi;
}

// Restriction of a matrix to the given sites.
inline Matrix SubMatrix(const Matrix& d, const std::vector<std::size_t>& sites) {
  Matrix out(sites.size(), std::vector<double>(sites.size(), 0.0));
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = 0; j < sites.size(); ++j) out[i][j] = d[sites[i]][sites[j]];
  }
  return out;
}

// k-center optimum by enumerating every center subset of size at most k.
inline double BruteKCenter(const Matrix& d, std::size_t k) {
  const std::size_t n = d.size();
  if (n == 0 || k >= n) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(k);
  const auto eval = [&] {
    double worst = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      double near = std::numeric_limits<double>::infinity();
      for (std::size_t c : pick) near = std::min(near, d[p][c]);
      worst = std::max(worst, near);
    }
    best = std::min(best, worst);
  };
  // Lexicographic k-subsets.
  for (std::size_t i = 0; i < k; ++i) pick[i] = i;
  while (true) {
    eval();
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Calls visit(labels) for every assignment of n items to at most k parts,
// each partition visited once (restricted growth strings).
template <typename Visit>
void ForEachPartition(std::size_t n, std::size_t k, Visit&& visit) {
  if (n == 0) {
    visit(std::vector<std::size_t>{});
    return;
  }
  std::vector<std::size_t> label(n, 0);
  const auto rec = [&](auto&& self, std::size_t i, std::size_t used) -> void {
    if (i == n) {
      visit(label);
      return;
    }
    for (std::size_t c = 0; c <= used && c < k; ++c) {
      label[i] = c;
      self(self, i + 1, std::max(used, c + 1));
    }
  };
  rec(rec, 0, 0);
}

// Sum-of-radii optimum: over all partitions into at most k parts, each part
// pays the smallest ball around any point that contains it.
inline double BruteSumOfRadii(const Matrix& d, std::size_t k) {
  const std::size_t n = d.size();
  double best = std::numeric_limits<double>::infinity();
  ForEachPartition(n, k, [&](const std::vector<std::size_t>& label) {
    double total = 0.0;
    for (std::size_t part = 0; part < k; ++part) {
      bool any = false;
      double ball = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < n; ++c) {
        double r = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
          if (label[p] == part) {
            any = true;
            r = std::max(r, d[c][p]);
          }
        }
        ball = std::min(ball, r);
      }
      if (any) total += ball;
    }
    best = std::min(best, total);
  });
  return n == 0 ? 0.0 : best;
}

// Sum-of-diameters optimum over all partitions into at most k parts.
inline double BruteSumOfDiameters(const Matrix& d, std::size_t k) {
  const std::size_t n = d.size();
  double best = std::numeric_limits<double>::infinity();
  ForEachPartition(n, k, [&](const std::vector<std::size_t>& label) {
    std::vector<double> diam(k, 0.0);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (label[p] == label[q]) diam[label[p]] = std::max(diam[label[p]], d[p][q]);
      }
    }
    double total = 0.0;
    for (double x : diam) total += x;
    best = std::min(best, total);
  });
  return n == 0 ? 0.0 : best;
}

// Largest excess d(a,c) - d(a,b) - d(b,c) over all triples.
inline double MatrixTriangleExcess(const Matrix& d) {
  double worst = 0.0;
  for (std::size_t a = 0; a < d.size(); ++a) {
    for (std::size_t b = 0; b < d.size(); ++b) {
      for (std::size_t c = 0; c < d.size(); ++c) worst = std::max(worst, d[a][c] - d[a][b] - d[b][c]);
    }
  }
  return worst;
}

// Largest distance from any of the points to its nearest center (uncounted).
inline double CoverRadius(const MetricOracle& oracle, const std::vector<PointId>& centers,
                          const std::vector<PointId>& points) {
  double worst = 0.0;
  for (PointId p : points) {
    double near = std::numeric_limits<double>::infinity();
    for (PointId c : centers) near = std::min(near, oracle.Peek(p, c));
    worst = std::max(worst, near);
  }
  return worst;
}

}  // namespace dynclust::testing

#endif  // DYNCLUST_TESTS_SUPPORT_TEST_SUPPORT_HPP_
