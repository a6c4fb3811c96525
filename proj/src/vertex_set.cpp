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

#include "hcboot/vertex_set.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace hcboot {

namespace {

std::size_t words_for(int n) {
  return n >= 6 ? (std::size_t{1} << (n - 6)) : 1;
}

std::uint64_t tail_mask_for(int n) {
  return n >= 6 ? ~std::uint64_t{0} : (std::uint64_t{1} << (1u << n)) - 1;
}

}  // namespace

VertexSet::VertexSet(int n) : n_(n) {
  if (n < 1 || n > 31) throw std::invalid_argument("VertexSet: n out of range");
  tail_mask_ = tail_mask_for(n);
  words_.assign(words_for(n), 0);
}

VertexSet::VertexSet(int n, std::initializer_list<Vertex> members) : VertexSet(n) {
  for (Vertex v : members) {
    if ((std::uint64_t{v} >> n) != 0) {
      throw std::invalid_argument("VertexSet: vertex outside cube");
    }
    insert(v);
  }
}

VertexSet VertexSet::full(int n) {
  VertexSet s(n);
  std::fill(s.words_.begin(), s.words_.end(), s.tail_mask_);
  return s;
}

VertexSet VertexSet::from_bits(int n, std::uint64_t bits) {
  if (n > 6) throw std::invalid_argument("VertexSet::from_bits requires n <= 6");
  VertexSet s(n);
  s.words_[0] = bits & s.tail_mask_;
  return s;
}

std::uint64_t VertexSet::count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

bool VertexSet::is_empty() const {
  return std::all_of(words_.begin(), words_.end(),
                     [](std::uint64_t w) { return w == 0; });
}

bool VertexSet::is_full() const {
  return std::all_of(words_.begin(), words_.end(),
                     [this](std::uint64_t w) { return w == tail_mask_; });
}

std::vector<Vertex> VertexSet::members() const {
  std::vector<Vertex> out;
  out.reserve(count());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w != 0) {
      const int b = std::countr_zero(w);
      out.push_back(static_cast<Vertex>((i << 6) | static_cast<unsigned>(b)));
      w &= w - 1;
    }
  }
  return out;
}

void VertexSet::check_compatible(const VertexSet& other) const {
  if (other.n_ != n_) throw std::invalid_argument("VertexSet: dimension mismatch");
}

VertexSet& VertexSet::operator|=(const VertexSet& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

VertexSet& VertexSet::operator&=(const VertexSet& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

VertexSet VertexSet::complement() const {
  VertexSet out(n_);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out.words_[i] = ~words_[i] & tail_mask_;
  }
  return out;
}

bool VertexSet::is_subset_of(const VertexSet& other) const {
  check_compatible(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

}  // namespace hcboot
