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

#include "dynclust/oblivious.hpp"

#include <algorithm>
#include <numeric>

#include "dynclust/common.hpp"

namespace dynclust {

ObliviousStream::ObliviousStream(std::size_t k, double delta, std::size_t blocks, std::uint64_t seed,
                                 Variant variant)
    : k_(k), delta_(delta), variant_(variant), anchors_(variant == Variant::kValue ? k : k - 1), rng_(seed) {
  if (k < 2) throw ContractError("oblivious stream needs k >= 2");
  if (!(delta > 1.0)) throw ContractError("oblivious stream needs delta > 1");
  std::bernoulli_distribution coin(0.5);
  blocks_.resize(blocks);
  for (Block& b : blocks_) {
    b.near = variant_ == Variant::kValue ? coin(rng_) : true;
    b.asked.assign(anchors_, false);
  }
}

std::size_t ObliviousStream::BlockOf(std::size_t site) const {
  if (site < anchors_) throw ContractError("anchor sites belong to no block");
  return (site - anchors_) / sites_per_block();
}

std::vector<ScriptOp> ObliviousStream::Script() const {
  using K = ScriptOp::Kind;
  std::vector<ScriptOp> ops;
  for (std::size_t a = 0; a < anchors_; ++a) ops.push_back({K::kInsert, a});
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const std::size_t probe = ProbeSite(i);
    if (variant_ == Variant::kValue) {
      ops.push_back({K::kInsert, probe});
      ops.push_back({K::kQueryValue, 0});
      ops.push_back({K::kDelete, probe});
    } else {
      ops.push_back({K::kInsert, probe});
      ops.push_back({K::kInsert, probe + 1});
      ops.push_back({K::kQuerySolution, 0});
      ops.push_back({K::kDelete, probe});
      ops.push_back({K::kDelete, probe + 1});
    }
  }
  return ops;
}

std::size_t ObliviousStream::probed(std::size_t block) const {
  const auto& asked = blocks_.at(block).asked;
  return static_cast<std::size_t>(std::count(asked.begin(), asked.end(), true));
}

bool ObliviousStream::Identified(std::size_t block) const {
  return blocks_.at(block).revealed_near || probed(block) == anchors_;
}

double ObliviousStream::BlockOptimum(std::size_t block) const {
  if (variant_ == Variant::kCenterSet) return 1.0;
  return blocks_.at(block).near ? 1.0 : delta_;
}

void ObliviousStream::CloseBlock(std::size_t block) {
  Block& b = blocks_.at(block);
  if (!b.near || b.anchor) return;
  std::vector<std::size_t> open;
  for (std::size_t a = 0; a < anchors_; ++a) {
    if (!b.asked[a]) open.push_back(a);
  }
  std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
  b.anchor = open[pick(rng_)];
}

void ObliviousStream::CloseAll() {
  for (std::size_t i = 0; i < blocks_.size(); ++i) CloseBlock(i);
}

double ObliviousStream::Distance(std::size_t a, std::size_t b) {
  if (a >= num_sites() || b >= num_sites()) throw ContractError("site out of range");
  if (a == b) return 0.0;
  if (a < b) std::swap(a, b);
  if (a < anchors_) return delta_;
  const std::size_t block = BlockOf(a);
  const bool is_probe = a == ProbeSite(block);
  if (b < anchors_) {
    if (!is_probe) return delta_;
    Block& blk = blocks_[block];
    if (!blk.near || blk.anchor) {
      blk.asked[b] = true;
      const bool hit = blk.anchor && *blk.anchor == b;
      if (hit) blk.revealed_near = true;
      return hit ? 1.0 : delta_;
    }
    if (blk.asked[b]) return delta_;
    const std::size_t open = anchors_ - probed(block);
    blk.asked[b] = true;
    std::uniform_int_distribution<std::size_t> pick(0, open - 1);
    if (pick(rng_) == 0) {
      blk.anchor = b;
      blk.revealed_near = true;
      return 1.0;
    }
    return delta_;
  }
  const std::size_t other = BlockOf(b);
  if (other == block || !is_probe || b != ProbeSite(other)) return delta_;
  CloseBlock(block);
  CloseBlock(other);
  return Fixed(a, b);
}

double ObliviousStream::Fixed(std::size_t a, std::size_t b) const {
  if (a == b) return 0.0;
  if (a < b) std::swap(a, b);
  if (a < anchors_) return delta_;
  const std::size_t block = BlockOf(a);
  if (a != ProbeSite(block)) return delta_;
  const Block& blk = blocks_[block];
  if (!blk.near) return delta_;
  if (!blk.anchor) throw ContractError("block still open");
  if (b < anchors_) return *blk.anchor == b ? 1.0 : delta_;
  const std::size_t other = BlockOf(b);
  if (other == block || b != ProbeSite(other)) return delta_;
  const Block& ob = blocks_[other];
  if (!ob.near) return delta_;
  if (!ob.anchor) throw ContractError("block still open");
  return *ob.anchor == *blk.anchor ? 1.0 : delta_;
}

std::vector<std::vector<double>> ObliviousStream::Matrix() const {
  const std::size_t n = num_sites();
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) rows[a][b] = rows[b][a] = Fixed(a, b);
  }
  return rows;
}

ObliviousProbeResult RunObliviousProber(std::size_t k, std::size_t blocks, std::size_t per_block,
                                        std::uint64_t stream_seed, std::uint64_t prober_seed) {
  const double delta = 100.0;
  ObliviousStream stream(k, delta, blocks, stream_seed);
  std::mt19937_64 rng(prober_seed);
  std::vector<std::size_t> anchors(stream.num_anchors());
  std::iota(anchors.begin(), anchors.end(), 0);
  ObliviousProbeResult result;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::shuffle(anchors.begin(), anchors.end(), rng);
    const std::size_t take = std::min(per_block, anchors.size());
    bool saw_unit = false;
    for (std::size_t j = 0; j < take; ++j) {
      saw_unit |= stream.Distance(stream.ProbeSite(i), anchors[j]) == 1.0;
    }
    result.queries += take;
    const double reported = saw_unit ? 1.0 : delta;
    stream.CloseBlock(i);
    ++result.blocks;
    if (stream.Identified(i)) ++result.identified;
    if (reported == stream.BlockOptimum(i)) ++result.correct_reports;
  }
  return result;
}

}  // namespace dynclust
