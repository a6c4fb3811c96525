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

#include "hcboot/estimator.hpp"

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hcboot/engine.hpp"

namespace hcboot {
namespace {

const ThresholdSchedule kBootR2 = ThresholdSchedule::make(Variant::kBoot, 2);
const ThresholdSchedule kBootR1 = ThresholdSchedule::make(Variant::kBoot, 1);

TEST(ProbabilityToFixed, Edges) {
  EXPECT_EQ(probability_to_fixed(0.0), 0u);
  EXPECT_EQ(probability_to_fixed(0.5), std::uint64_t{1} << 63);
  EXPECT_EQ(probability_to_fixed(0.25), std::uint64_t{1} << 62);
  EXPECT_THROW(probability_to_fixed(1.0), std::invalid_argument);
}

TEST(SampleInitial, TrivialProbabilities) {
  for (int n : {1, 2, 5, 6, 7, 14}) {
    const CubeSpec spec(n);
    EXPECT_TRUE(sample_initial(spec, 0.0, 9, 3).is_empty());
    EXPECT_TRUE(sample_initial(spec, 1.0, 9, 3).is_full());
  }
  EXPECT_THROW(sample_initial(CubeSpec(3), 1.5, 0, 0), std::invalid_argument);
}

// The bit-sliced sampler must agree with the per-vertex uniform.
TEST(SampleInitial, MatchesPerVertexUniform) {
  for (int n : {2, 6, 9}) {
    const CubeSpec spec(n);
    for (double p : {0.1, 0.37, 0.5, 0.93}) {
      const VertexSet a = sample_initial(spec, p, 77, 5);
      const std::uint64_t thr = probability_to_fixed(p);
      for (Vertex v = 0; v < spec.num_vertices(); ++v) {
        ASSERT_EQ(a.contains(v), vertex_uniform(77, 5, v) < thr) << n << " " << p << " " << v;
      }
    }
  }
}

TEST(SampleInitial, CouplingIsNested) {
  const CubeSpec spec(12);
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    double lo = unit(rng), hi = unit(rng);
    if (lo > hi) std::swap(lo, hi);
    ASSERT_TRUE(sample_initial(spec, lo, 4, trial).is_subset_of(sample_initial(spec, hi, 4, trial)));
  }
  EXPECT_TRUE(sample_initial(spec, 0.2, 1, 1).is_subset_of(sample_initial(spec, 0.7, 1, 1)));
}

TEST(SampleInitial, DensityNearP) {
  const CubeSpec spec(16);
  for (double p : {0.01, 0.3, 0.8}) {
    const double frac = static_cast<double>(sample_initial(spec, p, 2, 0).count()) / 65536.0;
    EXPECT_NEAR(frac, p, 5 * std::sqrt(p * (1 - p) / 65536.0));
  }
}

TEST(SampleInitial, TrialsAndSeedsDiffer) {
  const CubeSpec spec(10);
  EXPECT_NE(sample_initial(spec, 0.5, 1, 0), sample_initial(spec, 0.5, 1, 1));
  EXPECT_NE(sample_initial(spec, 0.5, 1, 0), sample_initial(spec, 0.5, 2, 0));
  EXPECT_EQ(sample_initial(spec, 0.5, 1, 0), sample_initial(spec, 0.5, 1, 0));
}

TEST(WilsonInterval, MatchesClosedForm) {
  const double z = 2.5758293035489004;  // 99% two-sided normal quantile
  for (auto [s, n] : {std::pair{7, 16}, std::pair{43750, 100000}, std::pair{1, 1000}}) {
    const double ph = static_cast<double>(s) / n;
    const double c = (ph + z * z / (2.0 * n)) / (1 + z * z / n);
    const double h = z / (1 + z * z / n) * std::sqrt(ph * (1 - ph) / n + z * z / (4.0 * n * n));
    const Interval ci = wilson_interval(s, n, 0.99);
    EXPECT_NEAR(ci.low, c - h, 1e-12);
    EXPECT_NEAR(ci.high, c + h, 1e-12);
  }
  EXPECT_EQ(wilson_interval(0, 50).low, 0.0);
  EXPECT_EQ(wilson_interval(50, 50).high, 1.0);
  EXPECT_THROW(wilson_interval(3, 2), std::invalid_argument);
}

TEST(ExactPercolation, SevenSixteenths) {
  const CubeSpec q2(2);
  EXPECT_EQ(percolating_sets_by_size(q2, kBootR2), (std::vector<std::uint64_t>{0, 0, 2, 4, 1}));
  EXPECT_DOUBLE_EQ(exact_percolation_probability(q2, kBootR2, 0.5), 7.0 / 16);
}

TEST(ExactPercolation, ClosedForms) {
  const CubeSpec q2(2);
  for (int i = 1; i <= 9; ++i) {
    const double p = i / 10.0;
    EXPECT_NEAR(exact_percolation_probability(q2, kBootR2, p), 2 * p * p - std::pow(p, 4), 1e-12);
    EXPECT_NEAR(exact_percolation_probability(q2, kBootR1, p), 1 - std::pow(1 - p, 4), 1e-12);
  }
  for (int n = 1; n <= 4; ++n) {
    EXPECT_EQ(exact_percolation_probability(CubeSpec(n), kBootR2, 1.0), 1.0);
  }
  EXPECT_THROW(exact_percolation_probability(CubeSpec(5), kBootR2, 0.5), std::invalid_argument);
}

TEST(PercolationProbability, Q2AgainstOracle) {
  const PercProbEstimate e = percolation_probability({CubeSpec(2), kBootR2, 0.5, 100000, 3});
  EXPECT_EQ(e.trials, 100000u);
  EXPECT_LE(e.ci_low, 0.4375);
  EXPECT_GE(e.ci_high, 0.4375);
  EXPECT_LE(e.ci_low, e.p_hat);
  EXPECT_LE(e.p_hat, e.ci_high);
}

TEST(PercolationProbability, TrivialProbabilities) {
  for (int n : {2, 5, 8}) {
    const auto s = ThresholdSchedule::make(Variant::kBoot, n);
    EXPECT_EQ(percolation_probability({CubeSpec(n), s, 1.0, 500, 1}).p_hat, 1.0);
    EXPECT_EQ(percolation_probability({CubeSpec(n), s, 0.0, 500, 1}).p_hat, 0.0);
  }
}

// Monte Carlo estimates land inside the 99.9% band of the exact value in at
// least 99% of independent replications.
TEST(PercolationProbability, AgreesWithEnumerationAcrossSeeds) {
  const std::vector<ThresholdSchedule> schedules{kBootR1, kBootR2,
                                                 ThresholdSchedule::make(Variant::kBoot1, 2, 1)};
  int inside = 0, total = 0;
  for (int n : {2, 3}) {
    const CubeSpec spec(n);
    for (const auto& s : schedules) {
      for (double p : {0.2, 0.5, 0.8}) {
        const double exact = exact_percolation_probability(spec, s, p);
        for (std::uint64_t seed = 100; seed < 110; ++seed) {
          const PercProbEstimate e = percolation_probability({spec, s, p, 100000, seed}, 0.999);
          const Interval band = wilson_interval(e.successes, e.trials, 0.999);
          inside += band.contains(exact);
          ++total;
        }
      }
    }
  }
  EXPECT_GE(inside, static_cast<int>(std::ceil(0.99 * total))) << inside << "/" << total;
}

TEST(PercolationProbability, IndependentOfThreadCount) {
  const TrialPlan plan{CubeSpec(10), ThresholdSchedule::make(Variant::kBoot, 3), 0.2, 3000, 8};
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const PercProbEstimate one = percolation_probability(plan);
  omp_set_num_threads(4);
  const PercProbEstimate four = percolation_probability(plan);
  omp_set_num_threads(saved);
  EXPECT_EQ(one, four);
  EXPECT_EQ(one, percolation_probability(plan));
}

TEST(Coupling, PercolationIndicatorIsMonotoneInP) {
  const CubeSpec spec(10);
  const Engine engine(spec);
  const auto sched = ThresholdSchedule::make(Variant::kBoot, 4);
  int violations = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    bool previous = false;
    for (int i = 1; i <= 9; ++i) {
      const bool now = engine.percolates(sample_initial(spec, i / 10.0, 13, trial), sched);
      violations += previous && !now;
      previous = now;
    }
  }
  EXPECT_EQ(violations, 0);
}

TEST(EstimatePc, Q2BootR2) {
  PcSearchOptions opts;
  opts.trials_per_point = 100000;
  opts.seed = 1;
  const PcEstimate pc = estimate_pc(CubeSpec(2), kBootR2, opts);
  const double truth = std::sqrt(1 - std::sqrt(2.0) / 2);
  EXPECT_LT(pc.lo, pc.hi);
  EXPECT_LE(pc.lo, truth);
  EXPECT_GE(pc.hi, truth);
  if (!pc.ci_limited) EXPECT_LE(pc.hi - pc.lo, opts.p_tolerance);
  EXPECT_EQ(pc.target, 0.5);
}

TEST(EstimatePc, Q2BootR1) {
  PcSearchOptions opts;
  opts.trials_per_point = 20000;
  opts.seed = 2;
  const PcEstimate pc = estimate_pc(CubeSpec(2), kBootR1, opts);
  const double truth = 1 - std::pow(2.0, -0.25);
  EXPECT_LE(pc.lo, truth);
  EXPECT_GE(pc.hi, truth);
  for (const auto& ev : pc.evaluations) {
    EXPECT_GT(ev.p, 0.0);
    EXPECT_LT(ev.p, 1.0);
  }
}

TEST(EstimatePc, StopsWithinTolerance) {
  PcSearchOptions opts;
  opts.trials_per_point = 2000;
  opts.p_tolerance = 0.05;
  const PcEstimate pc = estimate_pc(CubeSpec(8), ThresholdSchedule::make(Variant::kBoot, 3), opts);
  EXPECT_LT(pc.lo, pc.hi);
  if (!pc.ci_limited) EXPECT_LE(pc.hi - pc.lo, 0.05);
  EXPECT_FALSE(pc.evaluations.empty());
}

TEST(EstimatePc, RejectsBadOptions) {
  PcSearchOptions opts;
  opts.trials_per_point = 999;
  EXPECT_THROW(estimate_pc(CubeSpec(2), kBootR2, opts), std::invalid_argument);
  opts.trials_per_point = 1000;
  opts.p_tolerance = 0;
  EXPECT_THROW(estimate_pc(CubeSpec(2), kBootR2, opts), std::invalid_argument);
}

TEST(StabilizationProfile, Examples) {
  StabilizationProfile sp = stabilization_profile({CubeSpec(2), kBootR2, 0.5, 5000, 1});
  for (const auto& [step, count] : sp.fixpoint_histogram) EXPECT_LE(step, 1u);
  EXPECT_EQ(sp.stable_by_step1.p_hat, 1.0);

  sp = stabilization_profile({CubeSpec(6), kBootR2, 1.0, 100, 1});
  EXPECT_EQ(sp.fixpoint_histogram, (std::map<std::uint64_t, std::uint64_t>{{0, 100}}));
  sp = stabilization_profile({CubeSpec(6), kBootR2, 0.0, 100, 1});
  EXPECT_EQ(sp.fixpoint_histogram, (std::map<std::uint64_t, std::uint64_t>{{0, 100}}));
}

TEST(StabilizationProfile, HistogramAgreesWithEngine) {
  const TrialPlan plan{CubeSpec(8), ThresholdSchedule::make(Variant::kBoot1, 4, 1), 0.25, 300, 6};
  const StabilizationProfile sp = stabilization_profile(plan);
  std::map<std::uint64_t, std::uint64_t> hist;
  std::uint64_t same12 = 0;
  RunOptions opts;
  opts.keep_history = true;
  for (std::uint64_t i = 0; i < plan.trials; ++i) {
    const Trace t = run_to_fixpoint(plan.spec, sample_initial(plan.spec, plan.p, plan.seed, i),
                                    plan.schedule, opts);
    ++hist[t.fixpoint_step];
    const VertexSet a1 = t.history.size() > 1 ? t.history[1] : t.history[0];
    const VertexSet a2 = t.history.size() > 2 ? t.history[2] : a1;
    same12 += a1 == a2;
  }
  EXPECT_EQ(sp.fixpoint_histogram, hist);
  EXPECT_EQ(sp.stable_by_step1.successes, same12);
}

}  // namespace
}  // namespace hcboot
