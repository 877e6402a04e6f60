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

#include "dynclust/metric.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <iomanip>
#include <ostream>
#include <queue>
#include <sstream>

namespace dynclust {

std::optional<std::size_t> MetricBackend::FindSite(std::string_view key) const {
  std::size_t site = 0;
  auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), site);
  if (ec != std::errc() || ptr != key.data() + key.size()) return std::nullopt;
  if (num_sites() != 0 && site >= num_sites()) return std::nullopt;
  return site;
}

std::string MetricBackend::SiteKey(std::size_t site) const { return std::to_string(site); }

MatrixBackend::MatrixBackend(std::vector<std::vector<double>> rows) : n_(rows.size()) {
  d_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (rows[i].size() != n_) throw ContractError("distance matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = rows[i][j];
      if (!(v >= 0.0)) throw ContractError("distance matrix has a negative or NaN entry");
      d_[i * n_ + j] = v;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i * n_ + i] != 0.0) throw ContractError("distance matrix has a nonzero diagonal");
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (d_[i * n_ + j] != d_[j * n_ + i]) throw ContractError("distance matrix is not symmetric");
    }
  }
}

double MatrixBackend::SiteDistance(std::size_t a, std::size_t b) const { return d_[a * n_ + b]; }

EuclideanBackend::EuclideanBackend(std::vector<std::vector<double>> coords,
                                   std::vector<std::string> keys)
    : coords_(std::move(coords)), keys_(std::move(keys)) {
  if (!keys_.empty() && keys_.size() != coords_.size()) {
    throw ContractError("key count does not match coordinate count");
  }
  const std::size_t dim = coords_.empty() ? 0 : coords_.front().size();
  for (const auto& c : coords_) {
    if (c.size() != dim) throw ContractError("coordinates have inconsistent dimension");
  }
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (!index_.emplace(keys_[i], i).second) throw ContractError("duplicate coordinate key " + keys_[i]);
  }
}

double EuclideanBackend::SiteDistance(std::size_t a, std::size_t b) const {
  const auto& x = coords_[a];
  const auto& y = coords_[b];
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] - y[i];
    s += t * t;
  }
  return std::sqrt(s);
}

std::optional<std::size_t> EuclideanBackend::FindSite(std::string_view key) const {
  if (keys_.empty()) return MetricBackend::FindSite(key);
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string EuclideanBackend::SiteKey(std::size_t site) const {
  return keys_.empty() ? MetricBackend::SiteKey(site) : keys_[site];
}

GraphBackend::GraphBackend(std::size_t n, const std::vector<Edge>& edges, double unreachable)
    : adj_(n), unreachable_(unreachable) {
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n || !(e.w >= 0.0)) throw ContractError("invalid graph edge");
    adj_[e.u].emplace_back(e.v, e.w);
    adj_[e.v].emplace_back(e.u, e.w);
  }
}

const std::vector<double>& GraphBackend::Row(std::size_t source) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = rows_.find(source);
  if (it != rows_.end()) return it->second;
  std::vector<double> dist(adj_.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    for (auto [v, w] : adj_[u]) {
      if (du + w < dist[v]) {
        dist[v] = du + w;
        heap.emplace(dist[v], v);
      }
    }
  }
  for (double& d : dist) {
    if (std::isinf(d)) d = unreachable_;
  }
  return rows_.emplace(source, std::move(dist)).first->second;
}

double GraphBackend::SiteDistance(std::size_t a, std::size_t b) const { return Row(a)[b]; }

MetricOracle::MetricOracle(std::unique_ptr<MetricBackend> backend, double delta_bound)
    : backend_(std::move(backend)), delta_bound_(delta_bound) {
  if (!backend_) throw ContractError("metric oracle needs a backend");
}

PointId MetricOracle::RegisterPoint(std::string_view key) {
  const auto site = backend_->FindSite(key);
  if (!site) throw ContractError("unknown point key '" + std::string(key) + "'");
  std::string owned(key);
  if (live_by_key_.count(owned) != 0) {
    throw ContractError("point key '" + owned + "' is already live");
  }
  const PointId id = MakePointId(site_.size());
  site_.push_back(*site);
  live_.push_back(true);
  keys_.push_back(owned);
  live_by_key_.emplace(std::move(owned), id);
  ++num_live_;
  return id;
}

PointId MetricOracle::RegisterSite(std::size_t site) {
  if (backend_->num_sites() != 0 && site >= backend_->num_sites()) {
    throw ContractError("site index out of range");
  }
  return RegisterPoint(backend_->SiteKey(site));
}

void MetricOracle::RetirePoint(PointId p) {
  if (!IsLive(p)) throw ContractError("retiring a point that is not live");
  live_[Index(p)] = false;
  live_by_key_.erase(keys_[Index(p)]);
  --num_live_;
}

bool MetricOracle::IsLive(PointId p) const { return IsRegistered(p) && live_[Index(p)]; }

std::size_t MetricOracle::site_of(PointId p) const {
  if (!IsRegistered(p)) throw ContractError("unknown point id");
  return site_[Index(p)];
}

std::string MetricOracle::key_of(PointId p) const {
  if (!IsRegistered(p)) throw ContractError("unknown point id");
  return keys_[Index(p)];
}

std::optional<PointId> MetricOracle::LiveByKey(std::string_view key) const {
  auto it = live_by_key_.find(std::string(key));
  if (it == live_by_key_.end()) return std::nullopt;
  return it->second;
}

std::vector<PointId> MetricOracle::LivePoints() const {
  std::vector<PointId> out;
  out.reserve(num_live_);
  for (std::size_t i = 0; i < live_.size(); ++i) {
    if (live_[i]) out.push_back(MakePointId(i));
  }
  return out;
}

double MetricOracle::Raw(PointId p, PointId q) const {
  if (!IsRegistered(p) || !IsRegistered(q)) throw ContractError("distance query on unknown point id");
  if (p == q) return 0.0;
  const double d = backend_->SiteDistance(site_[Index(p)], site_[Index(q)]) * scale_;
  if (d > delta_bound_ * (1.0 + 1e-9)) {
    std::ostringstream msg;
    msg << "observed distance " << d << " exceeds the declared bound " << delta_bound_;
    throw ContractError(msg.str());
  }
  return d;
}

double MetricOracle::Distance(PointId p, PointId q) const {
  const double d = Raw(p, q);
  if (p != q) queries_.fetch_add(1, std::memory_order_relaxed);
  return d;
}

double MetricOracle::Peek(PointId p, PointId q) const { return Raw(p, q); }

double MetricOracle::RescaleToUnitMinimum() {
  const std::size_t n = backend_->num_sites();
  if (n < 2) return 1.0;
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = backend_->SiteDistance(a, b);
      if (d > 0.0) lo = std::min(lo, d);
    }
  }
  if (!std::isfinite(lo)) return 1.0;
  scale_ = 1.0 / lo;
  return lo;
}

double MetricOracle::MaxSiteDistance() const {
  const std::size_t n = backend_->num_sites();
  double hi = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) hi = std::max(hi, backend_->SiteDistance(a, b));
  }
  return hi * scale_;
}

namespace {

bool NextDataLine(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

std::unique_ptr<MatrixBackend> LoadMatrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!NextDataLine(in, line, line_no)) throw ContractError("matrix file is empty");
  std::size_t n = 0;
  {
    std::istringstream head(line);
    if (!(head >> n)) throw ContractError("matrix file: bad size on line " + std::to_string(line_no));
  }
  std::vector<std::vector<double>> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!NextDataLine(in, line, line_no)) throw ContractError("matrix file: missing rows");
    std::istringstream row(line);
    std::vector<double> values;
    double v = 0.0;
    while (row >> v) values.push_back(v);
    if (values.size() != n) {
      throw ContractError("matrix file: row on line " + std::to_string(line_no) + " has wrong length");
    }
    rows.push_back(std::move(values));
  }
  return std::make_unique<MatrixBackend>(std::move(rows));
}

std::unique_ptr<EuclideanBackend> LoadCoordinates(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<double>> coords;
  std::vector<std::string> keys;
  while (NextDataLine(in, line, line_no)) {
    std::istringstream row(line);
    std::string key;
    row >> key;
    std::vector<double> values;
    double v = 0.0;
    while (row >> v) values.push_back(v);
    if (!row.eof()) throw ContractError("coordinate file: bad number on line " + std::to_string(line_no));
    if (values.empty()) throw ContractError("coordinate file: no coordinates on line " + std::to_string(line_no));
    keys.push_back(std::move(key));
    coords.push_back(std::move(values));
  }
  return std::make_unique<EuclideanBackend>(std::move(coords), std::move(keys));
}

void WriteMatrix(std::ostream& out, const std::vector<std::vector<double>>& rows) {
  out << rows.size() << '\n';
  out << std::setprecision(9);
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ' ';
      out << row[j];
    }
    out << '\n';
  }
}

double TriangleViolation(const MetricBackend& backend, std::size_t n) {
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const double ab = backend.SiteDistance(a, b);
      for (std::size_t c = 0; c < n; ++c) {
        worst = std::max(worst, ab - backend.SiteDistance(a, c) - backend.SiteDistance(c, b));
      }
    }
  }
  return worst;
}

}  // namespace dynclust
