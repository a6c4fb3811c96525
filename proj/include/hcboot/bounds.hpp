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

#ifndef HCBOOT_BOUNDS_HPP_
#define HCBOOT_BOUNDS_HPP_

// Tail inequalities for binomial-type sums, each paired with an exact
// evaluation so "bound >= truth" can be checked numerically, plus exact
// enumeration checks of positive correlation (FKG) and of independence of
// far-apart vertices on tiny cubes.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "hcboot/cube.hpp"
#include "hcboot/engine.hpp"
#include "hcboot/vertex_set.hpp"

namespace hcboot {

/// exp(-2 t^2 / n): bounds both P(Bin(n,p) >= np + t) and
/// P(Bin(n,p) <= np - t). Requires n >= 1, t > 0.
double chernoff_bound(std::uint64_t n, double t);

/// Bin(n, p) probability mass function, computed in log space from the mode
/// outwards and normalized, so it stays accurate for p down to ~1e-300.
std::vector<double> binomial_pmf(std::uint64_t n, double p);

/// P(Bin(n,p) >= m) for 0 <= m <= n + 1, summed smallest term first.
double exact_binom_tail(std::uint64_t n, double p, std::uint64_t m);

/// 2 p^(m/2), a bound on P(Bin(n,p) >= m) valid when p n^2 < 1 and
/// 1 <= m <= n. Throws std::domain_error when p n^2 >= 1.
double small_p_tail_bound(std::uint64_t n, double p, std::uint64_t m);

/// Y = sum_i i X_i with independent X_i ~ Bin(d_i, p), i = 1..k.
struct WeightedBinomialSpec {
  std::vector<std::uint64_t> d;  // d[0] is d_1
  double p = 0.5;

  int k() const { return static_cast<int>(d.size()); }
  /// D(k) = sum_i i^2 d_i.
  double spread() const;
  double mean() const;
  /// sum_i i d_i, the largest value Y can take.
  std::uint64_t support_max() const;
};

/// (2t)^(k-1) exp(-2 t^2 / D(k)), a bound on P(Y >= E[Y] + t) for natural t.
/// Fractional t is accepted, but for t < 1 the value may undershoot the tail.
/// Throws std::invalid_argument unless t > 0 and D(k) > 0.
double weighted_binom_tail_bound(const WeightedBinomialSpec& spec, double t);

inline constexpr std::uint64_t kMaxWeightedSupport = 10'000;

/// P(Y >= threshold) from the exact distribution of Y by convolution.
/// Throws std::invalid_argument when sum_i i d_i > kMaxWeightedSupport.
double weighted_binom_tail_exact(const WeightedBinomialSpec& spec, double threshold);

/// 1 - Phi(z) for the standard normal.
double normal_upper_tail(double z);

using SetPredicate = std::function<bool(const VertexSet&)>;

struct FkgReport {
  double p_a = 0;
  double p_b = 0;
  double p_a_and_b = 0;
  double p_a_times_p_b = 0;
  bool holds = false;  // p_a_and_b >= p_a_times_p_b (up to 1e-12)
};

enum class MonotoneAudit {
  kAuto,        // exhaustive for n <= 3, caller vouches for n = 4
  kExhaustive,  // always audit (2^16 * 16 evaluations per predicate at n = 4)
};

/// Exact P(A ∩ B) and P(A) P(B) under the product measure with density p on
/// the vertices of Q_n (n <= 4), by enumerating every initial set. Throws
/// std::invalid_argument if an audited predicate is not increasing.
FkgReport fkg_exact_check(int n, double p, const SetPredicate& event_a,
                          const SetPredicate& event_b,
                          MonotoneAudit audit = MonotoneAudit::kAuto);

/// True when no (a, a ∪ {v}) has pred(a) && !pred(a ∪ {v}). Exhaustive, n <= 4.
bool is_increasing(int n, const SetPredicate& pred);

struct IndependenceReport {
  double joint = 0;                 // P(every y in S lies in A_j)
  double product = 0;               // prod_y P(y in A_j)
  std::vector<double> marginals;
  double abs_difference = 0;
  bool factorizes = false;          // abs_difference <= 1e-12
  int min_pairwise_distance = 0;
};

/// Exact check, by enumeration of all 2^(2^n) initial sets (2^n <= 16), of
/// whether the events {y in A_j} for y in S are independent after j steps of
/// `schedule`.
IndependenceReport independence_check(const CubeSpec& spec,
                                      const ThresholdSchedule& schedule,
                                      std::uint64_t steps,
                                      std::span<const Vertex> vertices, double p);

}  // namespace hcboot

#endif  // HCBOOT_BOUNDS_HPP_
