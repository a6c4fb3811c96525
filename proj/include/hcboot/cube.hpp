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

#ifndef HCBOOT_CUBE_HPP_
#define HCBOOT_CUBE_HPP_

#include <cstdint>
#include <vector>

namespace hcboot {

/// A vertex of {0,1}^n. Bit i of the code is coordinate i.
using Vertex = std::uint32_t;

inline constexpr int kDefaultMaxDimension = 28;

/// Parameters of the graph family: Q_n when k == 1, otherwise Q_{k,n} where
/// vertices are adjacent iff their Hamming distance lies in [1, k].
class CubeSpec {
 public:
  /// Throws std::invalid_argument unless 1 <= k <= n <= n_max.
  explicit CubeSpec(int n, int k = 1, int n_max = kDefaultMaxDimension);

  int n() const { return n_; }
  int k() const { return k_; }
  int n_max() const { return n_max_; }

  std::uint64_t num_vertices() const { return std::uint64_t{1} << n_; }
  /// N = sum_{i=1..k} C(n, i).
  std::uint64_t degree() const { return degree_; }
  bool contains(Vertex v) const { return (std::uint64_t{v} >> n_) == 0; }

  friend bool operator==(const CubeSpec& a, const CubeSpec& b) {
    return a.n_ == b.n_ && a.k_ == b.k_;
  }

 private:
  int n_;
  int k_;
  int n_max_;
  std::uint64_t degree_;
};

/// Exact binomial coefficient; 0 when k < 0 or k > n. Valid for n <= 64.
std::uint64_t binomial(int n, int k);

int hamming(Vertex u, Vertex v);

inline std::uint64_t degree(const CubeSpec& spec) { return spec.degree(); }

/// All nonzero flip masks of weight <= k, ascending. neighbors(x) is
/// {x ^ m : m in flip_masks(spec)}.
std::vector<Vertex> flip_masks(const CubeSpec& spec);

/// Vertices at distance 1..k from x, ascending by code.
std::vector<Vertex> neighbors(const CubeSpec& spec, Vertex x);

/// S(x, radius): vertices of {0,1}^n at distance exactly radius, ascending.
/// Throws std::invalid_argument when radius is outside [0, n].
std::vector<Vertex> sphere(int n, Vertex x, int radius);

/// Calls f(mask) for every n-bit mask of the given weight, ascending.
template <typename F>
void for_each_weight(int n, int weight, F&& f) {
  if (weight < 0 || weight > n) return;
  if (weight == 0) {
    f(Vertex{0});
    return;
  }
  const std::uint64_t limit = std::uint64_t{1} << n;
  std::uint64_t m = (std::uint64_t{1} << weight) - 1;
  while (m < limit) {
    f(static_cast<Vertex>(m));
    // Gosper's hack: next larger integer with the same popcount.
    const std::uint64_t c = m & (~m + 1);
    const std::uint64_t r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
}

}  // namespace hcboot

#endif  // HCBOOT_CUBE_HPP_
