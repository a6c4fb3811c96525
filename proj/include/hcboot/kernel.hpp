// Copyright 2026 The hcboot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HCBOOT_KERNEL_HPP_
#define HCBOOT_KERNEL_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hcboot/cube.hpp"
#include "hcboot/vertex_set.hpp"

namespace hcboot {

/// Bit-parallel infected-neighbor counting over all 2^n vertices at once.
///
/// For each output word the kernel gathers one shifted copy of the
/// membership bits per flip mask: the high part of the mask (bits >= 6)
/// selects the source word, the low part permutes bits inside the word by
/// block swaps. Each copy is added into ceil(log2(N+1)) carry-save counter
/// planes held in registers; since a vertex has exactly N neighbors the
/// planes never overflow. Threshold tests are done on the planes with a
/// bit-sliced comparator, so the per-vertex count table is only
/// materialized when asked for.
///
/// The planes can also be stored per word and updated incrementally with
/// add_to_planes, which lets a closure touch only the words near each change.
///
/// The flip-mask list is built once per spec; no adjacency is stored.
/// Kernels run OpenMP-parallel over output words for large cubes.
class NeighborKernel {
 public:
  /// Output words processed together. Adds into different words are
  /// independent, which hides the carry-chain latency and lets the compiler
  /// vectorize across the block.
  static constexpr std::size_t kBlockWords = 32;

  explicit NeighborKernel(const CubeSpec& spec);

  const CubeSpec& spec() const { return spec_; }
  int num_planes() const { return planes_; }

  /// |N(v) ∩ a| for every vertex v, indexed by code.
  std::vector<std::uint32_t> counts(const VertexSet& a) const;

  /// {v : |N(v) ∩ a| >= threshold}.
  VertexSet at_least(const VertexSet& a, std::uint64_t threshold) const;

  /// Writes the threshold mask of each listed word into out[i]. Used by the
  /// engine to re-evaluate only words whose neighborhood changed.
  void at_least_words(const VertexSet& a, std::uint64_t threshold,
                      std::span<const std::uint32_t> words,
                      std::span<std::uint64_t> out) const;

  /// Distinct word offsets (high mask parts, including 0) through which a
  /// change in one word can affect the counts of another.
  std::span<const std::uint32_t> word_offsets() const { return offsets_; }

  /// Writes the neighbor counts of `a` as bit planes: planes[w * num_planes()
  /// + j] holds bit j of the counts of the vertices in word w.
  void count_planes(const VertexSet& a, std::span<std::uint64_t> planes) const;

  /// Which target words add_to_planes updates.
  enum class Targets { kAll, kSameWord, kOtherWords };

  /// Adds the contributions of the vertices `delta` of word w to `planes`.
  /// Only words w ^ o for o in word_offsets() change.
  void add_to_planes(std::uint32_t w, std::uint64_t delta, std::span<std::uint64_t> planes,
                     Targets targets = Targets::kAll) const;

  /// Lanes of word w whose count in `planes` is at least threshold.
  std::uint64_t lanes_at_least(std::span<const std::uint64_t> planes, std::uint32_t w,
                               std::uint64_t threshold) const;

 private:
  struct Group {
    std::uint32_t high;               // source word = w ^ high
    std::vector<std::uint8_t> lows;   // intra-word flip patterns
  };

  template <int L>
  void accumulate_block(const std::uint64_t* src, const std::uint32_t* idx, std::size_t nb,
                        std::uint64_t (&planes)[L][kBlockWords]) const;
  // Empty `words` means every word, written to out[w].
  template <int L>
  void threshold_words(const std::uint64_t* src, std::uint64_t threshold,
                       std::span<const std::uint32_t> words, std::uint64_t mask,
                       std::uint64_t* out) const;
  void dispatch_threshold(const VertexSet& a, std::uint64_t threshold,
                          std::span<const std::uint32_t> words, std::uint64_t* out) const;

  CubeSpec spec_;
  int planes_;
  std::size_t num_words_;
  std::vector<Group> groups_;
  std::vector<std::uint32_t> offsets_;
};

/// One-shot convenience over NeighborKernel.
std::vector<std::uint32_t> infected_neighbor_counts(const CubeSpec& spec,
                                                    const VertexSet& a);

}  // namespace hcboot

#endif  // HCBOOT_KERNEL_HPP_
