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

#include "hcboot/engine.hpp"

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "hcboot/reference.hpp"
#include "test_util.hpp"

namespace hcboot {
namespace {

std::vector<std::uint64_t> thresholds(const ThresholdSchedule& s, int steps) {
  std::vector<std::uint64_t> out;
  for (int i = 1; i <= steps; ++i) out.push_back(s.at(i));
  return out;
}

TEST(ThresholdSchedule, Shapes) {
  EXPECT_EQ(thresholds(ThresholdSchedule::make(Variant::kBoot1, 8, 2), 4),
            (std::vector<std::uint64_t>{6, 8, 8, 8}));
  EXPECT_EQ(thresholds(ThresholdSchedule::make(Variant::kBoot2, 8, 2), 4),
            (std::vector<std::uint64_t>{4, 6, 8, 8}));
  EXPECT_EQ(thresholds(ThresholdSchedule::make(Variant::kBoot, 5), 3),
            (std::vector<std::uint64_t>{5, 5, 5}));
  const auto b3 = ThresholdSchedule::make(Variant::kBoot3, 8, 2);
  for (int i = 1; i <= 5; ++i) EXPECT_LE(b3.at(i), 8u);
}

TEST(ThresholdSchedule, RejectsNonPositiveThresholds) {
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot, 0), std::invalid_argument);
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot, 3, 1), std::invalid_argument);
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot1, 3, 3), std::invalid_argument);
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot2, 4, 2), std::invalid_argument);
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot3, 4, 2), std::invalid_argument);
  EXPECT_THROW(ThresholdSchedule::make(Variant::kBoot1, 4, -1), std::invalid_argument);
  EXPECT_NO_THROW(ThresholdSchedule::make(Variant::kBoot2, 5, 2));
}

TEST(ThresholdSchedule, VariantNames) {
  for (Variant v : {Variant::kBoot, Variant::kBoot1, Variant::kBoot2, Variant::kBoot3}) {
    EXPECT_EQ(parse_variant(to_string(v)), v);
  }
  EXPECT_THROW(parse_variant("boot4"), std::invalid_argument);
}

TEST(Step, Examples) {
  const CubeSpec q2(2);
  EXPECT_EQ(step(q2, VertexSet(2, {0b00, 0b11}), 2), VertexSet::full(2));
  EXPECT_EQ(step(q2, VertexSet(2, {0b00}), 1), VertexSet(2, {0b00, 0b01, 0b10}));
  for (int n = 1; n <= 8; ++n) {
    EXPECT_EQ(step(CubeSpec(n), VertexSet::empty(n), 1), VertexSet::empty(n));
  }
  EXPECT_THROW(step(q2, VertexSet(2), 0), std::invalid_argument);
}

TEST(RunToFixpoint, Examples) {
  const CubeSpec q2(2);
  const auto boot2 = ThresholdSchedule::make(Variant::kBoot, 2);
  Trace t = run_to_fixpoint(q2, VertexSet(2, {0b00, 0b11}), boot2);
  EXPECT_TRUE(t.percolated);
  EXPECT_EQ(t.fixpoint_step, 1u);
  EXPECT_EQ(t.sizes, (std::vector<std::uint64_t>{2, 4}));

  t = run_to_fixpoint(q2, VertexSet(2, {0b00, 0b01}), boot2);
  EXPECT_FALSE(t.percolated);
  EXPECT_EQ(t.fixpoint_step, 0u);
  EXPECT_EQ(t.sizes, (std::vector<std::uint64_t>{2}));

  t = run_to_fixpoint(CubeSpec(3), VertexSet(3, {0}), ThresholdSchedule::make(Variant::kBoot, 1));
  EXPECT_TRUE(t.percolated);
  EXPECT_EQ(t.fixpoint_step, 3u);
  EXPECT_EQ(t.sizes, (std::vector<std::uint64_t>{1, 4, 7, 8}));
}

TEST(RunToFixpoint, HistoryAndTruncation) {
  const CubeSpec q3(3);
  RunOptions opts;
  opts.keep_history = true;
  const auto boot1 = ThresholdSchedule::make(Variant::kBoot, 1);
  Trace t = run_to_fixpoint(q3, VertexSet(3, {0}), boot1, opts);
  ASSERT_EQ(t.history.size(), 4u);
  EXPECT_EQ(t.history[1], VertexSet(3, {0, 1, 2, 4}));
  opts.max_steps = 2;
  t = run_to_fixpoint(q3, VertexSet(3, {0}), boot1, opts);
  EXPECT_TRUE(t.truncated);
  EXPECT_FALSE(t.percolated);
  EXPECT_EQ(t.sizes.back(), 7u);
}

TEST(RunToFixpoint, AgreesWithReferenceOnAllOfQ4) {
  const CubeSpec q4(4);
  const Engine engine(q4);
  const auto boot2 = ThresholdSchedule::make(Variant::kBoot, 2);
  for (std::uint64_t bits = 0; bits < (1u << 16); ++bits) {
    VertexSet a(4);
    for (Vertex v = 0; v < 16; ++v) {
      if ((bits >> v) & 1u) a.insert(v);
    }
    const Trace fast = engine.run(a, boot2);
    const Trace slow = reference::run_to_fixpoint(q4, a, boot2);
    ASSERT_EQ(fast.sizes, slow.sizes) << bits;
    ASSERT_EQ(fast.fixpoint_step, slow.fixpoint_step) << bits;
    ASSERT_EQ(fast.percolated, slow.percolated) << bits;
    ASSERT_EQ(*fast.final, *slow.final) << bits;
  }
}

// The incremental driver must match full recomputation at every step.
TEST(RunToFixpoint, IncrementalMatchesReferenceOnLargerCubes) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 60; ++i) {
    const int n = testing::random_int(rng, 6, 12);
    const int k = i % 3 == 0 ? 2 : 1;
    const CubeSpec spec(n, k);
    const auto r = static_cast<std::int64_t>(
        testing::random_int(rng, 1, static_cast<int>(spec.degree()) / 2 + 1));
    const Variant variant = static_cast<Variant>(i % 4);
    const std::int64_t t = variant == Variant::kBoot ? 0 : (r - 1) / 2;
    const auto sched = ThresholdSchedule::make(variant, r, t);
    const VertexSet a = testing::random_set(n, 0.05 + 0.4 * testing::random_density(rng), rng);
    RunOptions opts;
    opts.keep_history = true;
    const Trace fast = run_to_fixpoint(spec, a, sched, opts);
    const Trace slow = reference::run_to_fixpoint(spec, a, sched);
    ASSERT_EQ(fast.sizes, slow.sizes);
    ASSERT_EQ(*fast.final, *slow.final);
    for (std::size_t s = 1; s < fast.history.size(); ++s) {
      ASSERT_EQ(fast.history[s], reference::step(spec, fast.history[s - 1], sched.at(s)));
    }
  }
}

TEST(RunToFixpoint, SizesGrowAndFixpointIsStable) {
  std::mt19937_64 rng(22);
  for (int i = 0; i < 10000; ++i) {
    const int n = testing::random_int(rng, 2, 12);
    const CubeSpec spec(n);
    const auto sched = ThresholdSchedule::make(Variant::kBoot, testing::random_int(rng, 1, n));
    const VertexSet a = testing::random_set(n, testing::random_density(rng), rng);
    const Trace t = run_to_fixpoint(spec, a, sched);
    for (std::size_t s = 1; s < t.sizes.size(); ++s) ASSERT_LE(t.sizes[s - 1], t.sizes[s]);
    ASSERT_EQ(step(spec, *t.final, sched.r()), *t.final);
  }
}

TEST(RunToFixpoint, NestedInitialSetsGiveNestedClosures) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const int n = testing::random_int(rng, 2, 11);
    const CubeSpec spec(n);
    const auto sched = ThresholdSchedule::make(Variant::kBoot, testing::random_int(rng, 1, n));
    const VertexSet small = testing::random_set(n, 0.5 * testing::random_density(rng), rng);
    const VertexSet large = small | testing::random_set(n, 0.2, rng);
    ASSERT_TRUE(run_to_fixpoint(spec, small, sched).final->is_subset_of(
        *run_to_fixpoint(spec, large, sched).final));
  }
}

TEST(TraceDominates, IdenticalSchedules) {
  std::mt19937_64 rng(24);
  const CubeSpec q8(8);
  const auto s = ThresholdSchedule::make(Variant::kBoot, 3);
  const VertexSet a = testing::random_set(8, 0.3, rng);
  const DominanceReport rep = trace_dominates(q8, a, s, s);
  EXPECT_TRUE(rep.dominates());
  EXPECT_EQ(rep.lo_trace.sizes, rep.hi_trace.sizes);
}

TEST(TraceDominates, RelaxedVariantsContainBoot) {
  std::mt19937_64 rng(25);
  const CubeSpec q8(8);
  const auto boot = ThresholdSchedule::make(Variant::kBoot, 4);
  const auto boot1 = ThresholdSchedule::make(Variant::kBoot1, 4, 2);
  for (int i = 0; i < 200; ++i) {
    const VertexSet a = testing::random_set(8, 0.4 * testing::random_density(rng), rng);
    ASSERT_TRUE(trace_dominates(q8, a, boot1, boot).dominates());
  }
}

TEST(TraceDominates, EveryVariantPairOnRandomTrials) {
  std::mt19937_64 rng(26);
  const CubeSpec q10(10);
  const auto boot = ThresholdSchedule::make(Variant::kBoot, 5);
  for (Variant v : {Variant::kBoot1, Variant::kBoot2, Variant::kBoot3}) {
    const auto relaxed = ThresholdSchedule::make(v, 5, 2);
    for (int i = 0; i < 1000; ++i) {
      const VertexSet a = testing::random_set(10, 0.1 + 0.4 * testing::random_density(rng), rng);
      const DominanceReport rep = trace_dominates(q10, a, relaxed, boot);
      ASSERT_TRUE(rep.dominates()) << to_string(v) << " step " << rep.step;
    }
  }
}

TEST(TraceDominates, ReportsPreconditionFailure) {
  const auto boot = ThresholdSchedule::make(Variant::kBoot, 2);
  const auto boot1 = ThresholdSchedule::make(Variant::kBoot1, 3, 1);
  const DominanceReport rep =
      trace_dominates(CubeSpec(4), VertexSet(4, {0, 15}), ThresholdSchedule::make(Variant::kBoot, 3), boot);
  EXPECT_EQ(rep.status, DominanceReport::Status::kPreconditionFailed);
  EXPECT_EQ(rep.step, 1u);
  EXPECT_TRUE(trace_dominates(CubeSpec(4), VertexSet(4, {0, 15}), boot1, ThresholdSchedule::make(Variant::kBoot, 3)).dominates());
}

TEST(Engine, PercolatesMatchesReference) {
  std::mt19937_64 rng(27);
  for (int i = 0; i < 400; ++i) {
    const int n = testing::random_int(rng, 3, 13);
    const int k = i % 3 == 0 ? testing::random_int(rng, 1, std::min(n, 3)) : 1;
    const CubeSpec spec(n, k);
    const int r = testing::random_int(rng, 2, static_cast<int>(spec.degree()));
    const auto sched = i % 2 == 0 ? ThresholdSchedule::make(Variant::kBoot, r)
                                  : ThresholdSchedule::make(Variant::kBoot1, r, 1);
    const VertexSet a = testing::random_set(n, testing::random_density(rng), rng);
    ASSERT_EQ(Engine(spec).percolates(a, sched),
              reference::run_to_fixpoint(spec, a, sched).percolated)
        << "n=" << n << " k=" << k << " r=" << r;
  }
}

// Relaxation strictly helps: found by enumerating all 2^16 initial sets with
// the reference engine.
TEST(Boot1VersusBoot, ExhaustiveQ4Witness) {
  const CubeSpec q4(4);
  const auto relaxed = ThresholdSchedule::make(Variant::kBoot1, 3, 2);
  const auto boot = ThresholdSchedule::make(Variant::kBoot, 3);
  const VertexSet witness(4, {0b0111, 0b1000});
  EXPECT_TRUE(run_to_fixpoint(q4, witness, relaxed).percolated);
  EXPECT_FALSE(run_to_fixpoint(q4, witness, boot).percolated);

  const Engine engine(q4);
  int gained = 0;
  for (std::uint64_t bits = 0; bits < (1u << 16); ++bits) {
    VertexSet a(4);
    for (Vertex v = 0; v < 16; ++v) {
      if ((bits >> v) & 1u) a.insert(v);
    }
    const bool lo = engine.percolates(a, relaxed);
    const bool hi = engine.percolates(a, boot);
    ASSERT_FALSE(hi && !lo);
    gained += lo && !hi;
  }
  EXPECT_EQ(gained, 40272);
}

}  // namespace
}  // namespace hcboot
