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

#ifndef HCBOOT_VERTEX_SET_HPP_
#define HCBOOT_VERTEX_SET_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "hcboot/cube.hpp"

namespace hcboot {

/// One membership bit per vertex of {0,1}^n, packed 64 per word. Vertex v
/// lives at bit (v & 63) of word (v >> 6). For n < 6 a single word is used
/// and bits at positions >= 2^n are kept zero.
class VertexSet {
 public:
  explicit VertexSet(int n);
  VertexSet(int n, std::initializer_list<Vertex> members);

  static VertexSet empty(int n) { return VertexSet(n); }
  static VertexSet full(int n);
  /// Builds the set whose bits are the low 2^n bits of `bits` (n <= 6).
  static VertexSet from_bits(int n, std::uint64_t bits);

  int dimension() const { return n_; }
  std::uint64_t universe_size() const { return std::uint64_t{1} << n_; }
  std::size_t num_words() const { return words_.size(); }
  /// Valid-bit mask for every word (all ones unless n < 6).
  std::uint64_t word_mask() const { return tail_mask_; }

  bool contains(Vertex v) const {
    return (words_[v >> 6] >> (v & 63)) & 1u;
  }
  void insert(Vertex v) { words_[v >> 6] |= std::uint64_t{1} << (v & 63); }
  void erase(Vertex v) { words_[v >> 6] &= ~(std::uint64_t{1} << (v & 63)); }

  std::uint64_t count() const;
  bool is_empty() const;
  bool is_full() const;

  /// Members in ascending order.
  std::vector<Vertex> members() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  VertexSet& operator|=(const VertexSet& other);
  VertexSet& operator&=(const VertexSet& other);
  VertexSet complement() const;
  bool is_subset_of(const VertexSet& other) const;

  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }
  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void check_compatible(const VertexSet& other) const;

  int n_;
  std::uint64_t tail_mask_;
  std::vector<std::uint64_t> words_;
};

}  // namespace hcboot

#endif  // HCBOOT_VERTEX_SET_HPP_
