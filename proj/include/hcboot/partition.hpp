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

#ifndef HCBOOT_PARTITION_HPP_
#define HCBOOT_PARTITION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcboot/cube.hpp"

namespace hcboot {

/// Disjoint blocks covering `universe`; distinct members of one block are at
/// Hamming distance >= min_distance.
struct Partition {
  std::vector<std::vector<Vertex>> blocks;
  std::vector<Vertex> universe;  // ascending, no duplicates
  int min_distance = 1;
};

struct PartitionCheck {
  bool ok = true;
  std::string violation;  // "coverage", "disjointness" or "distance"
  std::string witness;
};

PartitionCheck verify_partition(const Partition& p);

/// Greedy coloring of the conflict graph {y,z : hamming(y,z) < d}: vertices
/// in ascending order, each placed in the lowest-index block with no
/// conflict. Uses at most max_x |{y : hamming(x,y) <= d-1}| blocks.
Partition distance_partition(std::span<const Vertex> universe, int d);

/// Partition of all k-subsets of {1..n} into perfect matchings. Subsets are
/// bitmasks: element e is bit e-1. n <= 31.
struct Factorization {
  int n = 0;
  int k = 0;
  std::vector<std::vector<std::uint64_t>> factors;
};

struct FactorizationCheck {
  bool ok = true;
  std::string violation;
  std::string witness;
};

/// Checks every factor is n/k disjoint k-subsets covering {1..n}, every
/// k-subset occurs exactly once, and the factor count is C(n-1, k-1). On
/// failure `violation` starts with one of "shape", "factor-size",
/// "subset-size", "disjointness", "multiplicity", "coverage", "count".
FactorizationCheck verify_factorization(const Factorization& f);

inline constexpr std::uint64_t kMaxFactorizationSubsets = 1'000'000;
inline constexpr std::uint64_t kMaxBacktrackSubsets = 10'000;

/// 1-factorization of the complete k-uniform hypergraph on n points.
///
/// Built by the integral-flow induction: keep C(n-1,k-1) factor slots of
/// n/k partial subsets each; when adding element i every slot extends
/// exactly one of its parts, chosen by an integral max flow in which each
/// partial subset S receives C(n-i-1, k-|S|-1) extensions. A fractional
/// solution always exists, so the integral one does too.
///
/// Throws std::invalid_argument when k does not divide n (no factorization
/// exists), or when C(n,k) exceeds kMaxFactorizationSubsets. Output is in
/// canonical order (see canonicalize).
Factorization baranyai(int n, int k);

/// Exhaustive search, filling one factor at a time. Returns nullopt when
/// node_limit is exhausted. Requires C(n,k) <= kMaxBacktrackSubsets.
std::optional<Factorization> baranyai_backtrack(int n, int k,
                                                std::uint64_t node_limit = 50'000'000);

/// Sorts subsets within each factor and factors lexicographically, comparing
/// subsets as ascending element lists.
void canonicalize(Factorization& f);

/// One factor per line; subsets as comma-separated 1-based elements joined
/// by '|'. Canonical order, trailing newline after every line.
std::string format_factorization(const Factorization& f);

/// Inverse of format_factorization. Throws std::invalid_argument.
Factorization parse_factorization(std::string_view text, int n, int k);

struct SpherePartition {
  Partition partition;
  bool via_factorization = false;
  std::uint64_t bound = 0;   // k * C(n, k-1)
  bool within_bound = true;
};

/// Partition of the radius-k sphere about the origin with within-block
/// distance >= 2k. When k | n the blocks are the factors of baranyai(n,k)
/// read as weight-k codes (disjoint supports, distance exactly 2k);
/// otherwise the greedy distance_partition is used and the block count is
/// only soft-checked against k * C(n, k-1).
SpherePartition sphere_partition(int n, int k);

}  // namespace hcboot

#endif  // HCBOOT_PARTITION_HPP_
