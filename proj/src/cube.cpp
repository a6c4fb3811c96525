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

#include "hcboot/cube.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace hcboot {

CubeSpec::CubeSpec(int n, int k, int n_max) : n_(n), k_(k), n_max_(n_max) {
  if (n_max < 1 || n_max > 31) {
    throw std::invalid_argument("n_max must lie in [1, 31], got " +
                                std::to_string(n_max));
  }
  if (n < 1 || n > n_max) {
    throw std::invalid_argument("n must lie in [1, " + std::to_string(n_max) +
                                "], got " + std::to_string(n));
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("k must lie in [1, n], got k=" +
                                std::to_string(k) + " n=" + std::to_string(n));
  }
  degree_ = 0;
  for (int i = 1; i <= k; ++i) degree_ += binomial(n, i);
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (n > 64) throw std::invalid_argument("binomial: n > 64");
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  for (int i = 0; i < k; ++i) {
    result = result * static_cast<unsigned>(n - i) / static_cast<unsigned>(i + 1);
  }
  return static_cast<std::uint64_t>(result);
}

int hamming(Vertex u, Vertex v) { return std::popcount(u ^ v); }

std::vector<Vertex> flip_masks(const CubeSpec& spec) {
  std::vector<Vertex> masks;
  masks.reserve(spec.degree());
  for (int w = 1; w <= spec.k(); ++w) {
    for_each_weight(spec.n(), w, [&](Vertex m) { masks.push_back(m); });
  }
  std::sort(masks.begin(), masks.end());
  return masks;
}

std::vector<Vertex> neighbors(const CubeSpec& spec, Vertex x) {
  if (!spec.contains(x)) throw std::invalid_argument("vertex outside cube");
  std::vector<Vertex> out = flip_masks(spec);
  for (Vertex& v : out) v ^= x;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Vertex> sphere(int n, Vertex x, int radius) {
  if (n < 1 || n > 31) throw std::invalid_argument("sphere: n out of range");
  if (radius < 0 || radius > n) {
    throw std::invalid_argument("sphere: radius must lie in [0, n]");
  }
  if ((std::uint64_t{x} >> n) != 0) throw std::invalid_argument("vertex outside cube");
  std::vector<Vertex> out;
  out.reserve(binomial(n, radius));
  for_each_weight(n, radius, [&](Vertex m) { out.push_back(m ^ x); });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hcboot
