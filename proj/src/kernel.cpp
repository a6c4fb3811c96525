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

#include "hcboot/kernel.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace hcboot {

namespace {

constexpr std::size_t kParallelMinWords = 256;

// Positions whose bit b is clear, for b = 0..5.
constexpr std::uint64_t kBlockMask[6] = {
    0x5555555555555555ull, 0x3333333333333333ull, 0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull, 0x0000FFFF0000FFFFull, 0x00000000FFFFFFFFull,
};

// Lanes whose plane-encoded count is >= threshold (threshold < 2^L).
template <int L>
inline std::uint64_t compare_ge(const std::uint64_t (&planes)[L][NeighborKernel::kBlockWords], std::size_t b,
                                std::uint64_t threshold) {
  std::uint64_t gt = 0;
  std::uint64_t eq = ~std::uint64_t{0};
  for (int j = L - 1; j >= 0; --j) {
    if ((threshold >> j) & 1u) {
      eq &= planes[j][b];
    } else {
      gt |= eq & planes[j][b];
      eq &= ~planes[j][b];
    }
  }
  return gt | eq;
}

// Calls f.template operator()<L>() with L == planes, for planes in [1, 32].
template <typename F>
void with_planes(int planes, F&& f) {
  [&]<int... I>(std::integer_sequence<int, I...>) {
    ((planes == I + 1 ? (f.template operator()<I + 1>(), true) : false) || ...);
  }(std::make_integer_sequence<int, 32>{});
}

// Small inputs skip the parallel region entirely; even an if(false) region
// costs a runtime call, which dominates tiny cubes.
template <typename F>
void for_blocks(std::size_t blocks, bool parallel, F&& f) {
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < blocks; ++blk) f(blk);
  } else {
    for (std::size_t blk = 0; blk < blocks; ++blk) f(blk);
  }
}

}  // namespace

NeighborKernel::NeighborKernel(const CubeSpec& spec)
    : spec_(spec),
      planes_(static_cast<int>(std::bit_width(spec.degree()))),
      num_words_(spec.n() >= 6 ? (std::size_t{1} << (spec.n() - 6)) : 1) {
  std::map<std::uint32_t, std::vector<std::uint8_t>> by_high;
  for (Vertex m : flip_masks(spec_)) {
    by_high[m >> 6].push_back(static_cast<std::uint8_t>(m & 63));
  }
  for (auto& [high, lows] : by_high) {
    groups_.push_back(Group{high, std::move(lows)});
  }
  offsets_.push_back(0);
  for (const Group& g : groups_) {
    if (g.high != 0) offsets_.push_back(g.high);
  }
}

// planes[j][b] receives bit j of the neighbor counts of word idx[b].
template <int L>
void NeighborKernel::accumulate_block(const std::uint64_t* src, const std::uint32_t* idx,
                                      std::size_t nb,
                                      std::uint64_t (&planes)[L][kBlockWords]) const {
  for (int j = 0; j < L; ++j) std::fill(planes[j], planes[j] + kBlockWords, 0);
  std::uint64_t x[kBlockWords];
  std::uint64_t y[kBlockWords];
  for (const Group& g : groups_) {
    for (std::size_t b = 0; b < nb; ++b) x[b] = src[idx[b] ^ g.high];
    for (std::size_t b = nb; b < kBlockWords; ++b) x[b] = 0;
    for (std::uint8_t low : g.lows) {
      std::copy(x, x + kBlockWords, y);
      for (unsigned rest = low; rest != 0; rest &= rest - 1) {
        const int bit = std::countr_zero(rest);
        const int s = 1 << bit;
        const std::uint64_t m = kBlockMask[bit];
        for (std::size_t b = 0; b < kBlockWords; ++b) {
          y[b] = ((y[b] >> s) & m) | ((y[b] & m) << s);
        }
      }
      for (std::size_t b = 0; b < kBlockWords; ++b) {
        std::uint64_t carry = y[b];
        for (int j = 0; j < L; ++j) {
          const std::uint64_t t = planes[j][b] & carry;
          planes[j][b] ^= carry;
          carry = t;
        }
      }
    }
  }
}

template <int L>
void NeighborKernel::threshold_words(const std::uint64_t* src, std::uint64_t threshold,
                                     std::span<const std::uint32_t> words,
                                     std::uint64_t mask, std::uint64_t* out) const {
  const bool dense = words.empty();
  const std::size_t count = dense ? num_words_ : words.size();
  const std::size_t blocks = (count + kBlockWords - 1) / kBlockWords;
  const auto run_block = [&](std::size_t blk) {
    const std::size_t start = blk * kBlockWords;
    const std::size_t nb = std::min(kBlockWords, count - start);
    std::uint32_t idx[kBlockWords] = {};
    for (std::size_t b = 0; b < nb; ++b) {
      idx[b] = dense ? static_cast<std::uint32_t>(start + b) : words[start + b];
    }
    std::uint64_t planes[L][kBlockWords];
    accumulate_block<L>(src, idx, nb, planes);
    for (std::size_t b = 0; b < nb; ++b) {
      out[start + b] = compare_ge<L>(planes, b, threshold) & mask;
    }
  };
  for_blocks(blocks, count >= kParallelMinWords, run_block);
}

void NeighborKernel::dispatch_threshold(const VertexSet& a, std::uint64_t threshold,
                                        std::span<const std::uint32_t> words,
                                        std::uint64_t* out) const {
  const std::size_t count = words.empty() ? num_words_ : words.size();
  const std::uint64_t mask = a.word_mask();
  if (threshold == 0 || threshold > spec_.degree()) {
    std::fill(out, out + count, threshold == 0 ? mask : 0);
    return;
  }
  with_planes(planes_, [&]<int L>() {
    threshold_words<L>(a.words().data(), threshold, words, mask, out);
  });
}

std::vector<std::uint32_t> NeighborKernel::counts(const VertexSet& a) const {
  if (a.dimension() != spec_.n()) {
    throw std::invalid_argument("NeighborKernel: dimension mismatch");
  }
  const std::uint64_t* src = a.words().data();
  const unsigned lanes = spec_.n() >= 6 ? 64u : (1u << spec_.n());
  const std::size_t blocks = (num_words_ + kBlockWords - 1) / kBlockWords;
  std::vector<std::uint32_t> out(spec_.num_vertices(), 0);
  with_planes(planes_, [&]<int L>() {
    const auto run_block = [&](std::size_t blk) {
      const std::size_t start = blk * kBlockWords;
      const std::size_t nb = std::min(kBlockWords, num_words_ - start);
      std::uint32_t idx[kBlockWords] = {};
      for (std::size_t b = 0; b < nb; ++b) idx[b] = static_cast<std::uint32_t>(start + b);
      std::uint64_t planes[L][kBlockWords];
      accumulate_block<L>(src, idx, nb, planes);
      for (std::size_t b = 0; b < nb; ++b) {
        for (unsigned lane = 0; lane < lanes; ++lane) {
          std::uint32_t c = 0;
          for (int j = 0; j < L; ++j) {
            c |= static_cast<std::uint32_t>((planes[j][b] >> lane) & 1u) << j;
          }
          out[((start + b) << 6) | lane] = c;
        }
      }
    };
    for_blocks(blocks, num_words_ >= kParallelMinWords, run_block);
  });
  return out;
}

VertexSet NeighborKernel::at_least(const VertexSet& a, std::uint64_t threshold) const {
  if (a.dimension() != spec_.n()) {
    throw std::invalid_argument("NeighborKernel: dimension mismatch");
  }
  VertexSet out(spec_.n());
  dispatch_threshold(a, threshold, {}, out.mutable_words().data());
  return out;
}

void NeighborKernel::at_least_words(const VertexSet& a, std::uint64_t threshold,
                                    std::span<const std::uint32_t> words,
                                    std::span<std::uint64_t> out) const {
  if (a.dimension() != spec_.n() || out.size() < words.size()) {
    throw std::invalid_argument("NeighborKernel: bad word-list arguments");
  }
  if (words.empty()) return;
  dispatch_threshold(a, threshold, words, out.data());
}

void NeighborKernel::count_planes(const VertexSet& a, std::span<std::uint64_t> planes) const {
  if (a.dimension() != spec_.n() ||
      planes.size() < num_words_ * static_cast<std::size_t>(planes_)) {
    throw std::invalid_argument("NeighborKernel: bad plane arguments");
  }
  const std::uint64_t* src = a.words().data();
  const std::size_t blocks = (num_words_ + kBlockWords - 1) / kBlockWords;
  with_planes(planes_, [&]<int L>() {
    const auto run_block = [&](std::size_t blk) {
      const std::size_t start = blk * kBlockWords;
      const std::size_t nb = std::min(kBlockWords, num_words_ - start);
      std::uint32_t idx[kBlockWords] = {};
      for (std::size_t b = 0; b < nb; ++b) idx[b] = static_cast<std::uint32_t>(start + b);
      std::uint64_t acc[L][kBlockWords];
      accumulate_block<L>(src, idx, nb, acc);
      for (std::size_t b = 0; b < nb; ++b) {
        for (int j = 0; j < L; ++j) planes[(start + b) * L + j] = acc[j][b];
      }
    };
    for_blocks(blocks, num_words_ >= kParallelMinWords, run_block);
  });
}

void NeighborKernel::add_to_planes(std::uint32_t w, std::uint64_t delta,
                                   std::span<std::uint64_t> planes, Targets targets) const {
  with_planes(planes_, [&]<int L>() {
    for (const Group& g : groups_) {
      if ((targets == Targets::kSameWord && g.high != 0) ||
          (targets == Targets::kOtherWords && g.high == 0)) {
        continue;
      }
      std::uint64_t* p = planes.data() + static_cast<std::size_t>(w ^ g.high) * L;
      std::uint64_t acc[L];
      for (int j = 0; j < L; ++j) acc[j] = p[j];
      for (std::uint8_t low : g.lows) {
        std::uint64_t y = delta;
        for (unsigned rest = low; rest != 0; rest &= rest - 1) {
          const int bit = std::countr_zero(rest);
          const int s = 1 << bit;
          const std::uint64_t m = kBlockMask[bit];
          y = ((y >> s) & m) | ((y & m) << s);
        }
        for (int j = 0; j < L; ++j) {
          const std::uint64_t t = acc[j] & y;
          acc[j] ^= y;
          y = t;
        }
      }
      for (int j = 0; j < L; ++j) p[j] = acc[j];
    }
  });
}

std::uint64_t NeighborKernel::lanes_at_least(std::span<const std::uint64_t> planes,
                                             std::uint32_t w,
                                             std::uint64_t threshold) const {
  if (threshold == 0) return ~std::uint64_t{0};
  if (threshold > spec_.degree()) return 0;
  const std::uint64_t* p = planes.data() + static_cast<std::size_t>(w) * planes_;
  std::uint64_t gt = 0;
  std::uint64_t eq = ~std::uint64_t{0};
  for (int j = planes_ - 1; j >= 0; --j) {
    if ((threshold >> j) & 1u) {
      eq &= p[j];
    } else {
      gt |= eq & p[j];
      eq &= ~p[j];
    }
  }
  return gt | eq;
}

std::vector<std::uint32_t> infected_neighbor_counts(const CubeSpec& spec,
                                                    const VertexSet& a) {
  return NeighborKernel(spec).counts(a);
}

}  // namespace hcboot
