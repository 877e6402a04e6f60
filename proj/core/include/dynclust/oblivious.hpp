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

#ifndef DYNCLUST_OBLIVIOUS_HPP_
#define DYNCLUST_OBLIVIOUS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace dynclust {

// Operation of a scripted stream over sites.
struct ScriptOp {
  enum class Kind { kInsert, kDelete, kQueryValue, kQuerySolution };
  Kind kind;
  std::size_t site = 0;
};

// Oblivious stream: an anchor set of points at pairwise distance delta, then
// blocks that insert a probe point, query, and delete it. A probe is at
// distance 1 from one hidden anchor (on a fair coin in the value variant,
// always in the center-set variant) and at delta from everything else. The
// hidden anchor is drawn lazily: it is fixed by the first distance query that
// reveals it or when the block ends.
class ObliviousStream {
 public:
  enum class Variant {
    kValue,      // k anchors; blocks: insert p, value query, delete p
    kCenterSet,  // k - 1 anchors; blocks: insert q, insert p, solution query, delete q, delete p
  };

  ObliviousStream(std::size_t k, double delta, std::size_t blocks, std::uint64_t seed,
                  Variant variant = Variant::kValue);

  std::size_t num_anchors() const { return anchors_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_sites() const { return anchors_ + sites_per_block() * blocks_.size(); }
  std::size_t sites_per_block() const { return variant_ == Variant::kValue ? 1 : 2; }
  Variant variant() const { return variant_; }
  double delta() const { return delta_; }

  // Whole operation script: anchor inserts, then the blocks.
  std::vector<ScriptOp> Script() const;
  // Site inserted first by a block (the probe p in the value variant, q in
  // the center-set variant).
  std::size_t ProbeSite(std::size_t block) const { return anchors_ + sites_per_block() * block; }
  std::size_t BlockOf(std::size_t site) const;

  // Distance between two sites; fixes hidden choices on demand.
  double Distance(std::size_t a, std::size_t b);
  // Ends a block: an unresolved hidden anchor is drawn now.
  void CloseBlock(std::size_t block);
  void CloseAll();

  bool near(std::size_t block) const { return blocks_.at(block).near; }
  std::optional<std::size_t> hidden_anchor(std::size_t block) const { return blocks_.at(block).anchor; }
  // Anchors whose distance to the block's probe has been asked.
  std::size_t probed(std::size_t block) const;
  // True once the answers given so far determine whether the probe is near.
  bool Identified(std::size_t block) const;

  // Exact k-center cost right after a block's probe is inserted, once fixed.
  double BlockOptimum(std::size_t block) const;

  // Completed metric over all sites; requires every block closed.
  std::vector<std::vector<double>> Matrix() const;

 private:
  struct Block {
    bool near = true;
    std::optional<std::size_t> anchor;
    std::vector<bool> asked;
    bool revealed_near = false;
  };

  double Fixed(std::size_t a, std::size_t b) const;

  std::size_t k_;
  double delta_;
  Variant variant_;
  std::size_t anchors_;
  std::mt19937_64 rng_;
  std::vector<Block> blocks_;
};

// Reference prober for the value variant: per block it asks the probe's
// distance to `per_block` anchors (all of them, or a seeded random subset)
// and reports cost 1 if it saw a unit distance, otherwise delta.
struct ObliviousProbeResult {
  std::size_t blocks = 0;
  std::size_t identified = 0;
  std::size_t correct_reports = 0;
  std::uint64_t queries = 0;
  double identified_rate() const { return blocks == 0 ? 0.0 : static_cast<double>(identified) / blocks; }
};

ObliviousProbeResult RunObliviousProber(std::size_t k, std::size_t blocks, std::size_t per_block,
                                        std::uint64_t stream_seed, std::uint64_t prober_seed);

}  // namespace dynclust

#endif  // DYNCLUST_OBLIVIOUS_HPP_
