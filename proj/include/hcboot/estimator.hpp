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

#ifndef HCBOOT_ESTIMATOR_HPP_
#define HCBOOT_ESTIMATOR_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "hcboot/cube.hpp"
#include "hcboot/engine.hpp"
#include "hcboot/vertex_set.hpp"

namespace hcboot {

inline constexpr double kDefaultConfidence = 0.99;

/// 64-bit fixed-point uniform attached to vertex v in a trial. Bit 63 - j of
/// U(v) is bit (v & 63) of the j-th generator word drawn for v's storage
/// word, so U(v) depends only on (seed, trial, v).
std::uint64_t vertex_uniform(std::uint64_t seed, std::uint64_t trial, Vertex v);

/// floor(p * 2^64) for p in [0, 1); p == 1 is handled separately by callers.
std::uint64_t probability_to_fixed(double p);

/// v is infected iff U(v) < floor(p 2^64), and every vertex when p == 1.
/// Comparisons are done 64 vertices at a time on bit slices of U, stopping
/// once every lane is decided. For fixed (seed, trial) the result is
/// nondecreasing in p.
VertexSet sample_initial(const CubeSpec& spec, double p, std::uint64_t seed,
                         std::uint64_t trial);

struct TrialPlan {
  CubeSpec spec;
  ThresholdSchedule schedule;
  double p = 0.5;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
};

struct Interval {
  double low = 0;
  double high = 1;
  bool contains(double x) const { return low <= x && x <= high; }
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                         double confidence = kDefaultConfidence);

struct PercProbEstimate {
  double p_hat = 0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  double ci_low = 0;
  double ci_high = 1;
  double confidence = kDefaultConfidence;

  bool operator==(const PercProbEstimate&) const = default;
};

/// Runs trials 0..trials-1 and counts percolating runs. The result depends
/// only on the plan, not on thread count or scheduling.
PercProbEstimate percolation_probability(const TrialPlan& plan,
                                         double confidence = kDefaultConfidence);

inline constexpr int kMaxExactDimension = 4;

/// Number of percolating initial sets of each cardinality 0..2^n (2^n <= 16).
std::vector<std::uint64_t> percolating_sets_by_size(const CubeSpec& spec,
                                                    const ThresholdSchedule& schedule);

/// Sum over percolating initial sets S of p^|S| (1-p)^(2^n - |S|).
double exact_percolation_probability(const CubeSpec& spec,
                                     const ThresholdSchedule& schedule, double p);

struct PcEvaluation {
  double p = 0;
  PercProbEstimate estimate;
};

struct PcEstimate {
  double lo = 0;
  double hi = 1;
  double target = 0.5;
  std::vector<PcEvaluation> evaluations;
  /// Stopped because the estimate at a midpoint could not be separated from
  /// the target even after widening the trial count.
  bool ci_limited = false;
};

struct PcSearchOptions {
  std::uint64_t trials_per_point = 10'000;
  double p_tolerance = 0.01;
  std::uint64_t seed = 0;
  double confidence = kDefaultConfidence;
  /// Trial multiplier for the single re-evaluation of an ambiguous midpoint.
  std::uint64_t widen_factor = 4;
};

/// Bisection for the crossing of the percolation-probability curve with 1/2.
/// Midpoints whose estimate exceeds 1/2 move hi, all others (ties included)
/// move lo. A midpoint whose confidence interval contains 1/2 is re-run once
/// with widen_factor times more trials; if still ambiguous the search stops
/// with ci_limited set. Every point shares the seed, so estimates along the
/// search are coupled and monotone in p.
///
/// Throws std::invalid_argument when trials_per_point < 1000, the tolerance
/// is outside (0, 1), or the endpoints fail to bracket 1/2.
PcEstimate estimate_pc(const CubeSpec& spec, const ThresholdSchedule& schedule,
                       const PcSearchOptions& options);

struct StabilizationProfile {
  std::map<std::uint64_t, std::uint64_t> fixpoint_histogram;
  PercProbEstimate stable_by_step1;  // fraction with A_2 = A_1
  PercProbEstimate stable_by_step2;  // fraction with A_3 = A_2
};

/// Records the fixpoint step of every trial in the plan. Thresholds never
/// decrease along a schedule, so A_2 = A_1 iff the fixpoint step is <= 1.
StabilizationProfile stabilization_profile(const TrialPlan& plan,
                                           double confidence = kDefaultConfidence);

}  // namespace hcboot

#endif  // HCBOOT_ESTIMATOR_HPP_
