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

#ifndef HCBOOT_ENGINE_HPP_
#define HCBOOT_ENGINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcboot/cube.hpp"
#include "hcboot/kernel.hpp"
#include "hcboot/vertex_set.hpp"

namespace hcboot {

enum class Variant { kBoot, kBoot1, kBoot2, kBoot3 };

std::string_view to_string(Variant v);
/// Accepts "boot", "boot1", "boot2", "boot3"; throws std::invalid_argument.
Variant parse_variant(std::string_view name);

/// Per-step infection thresholds. Steps are numbered from 1.
///
///   boot          r, r, r, ...
///   boot1(t)      r - t, r, r, ...
///   boot2(t)      r - 2t, r - t, r, ...
///   boot3(t)      same shape as boot2; r is the majority threshold
///
/// Every threshold is >= 1 and the sequence is nondecreasing.
class ThresholdSchedule {
 public:
  /// Throws std::invalid_argument when r < 1, t < 0, t != 0 for boot, or
  /// any resulting threshold would be < 1.
  static ThresholdSchedule make(Variant variant, std::int64_t r, std::int64_t t = 0);

  Variant variant() const { return variant_; }
  std::int64_t r() const { return r_; }
  std::int64_t t() const { return t_; }

  std::uint64_t at(std::uint64_t step) const;

 private:
  ThresholdSchedule(Variant v, std::int64_t r, std::int64_t t)
      : variant_(v), r_(r), t_(t) {}

  Variant variant_;
  std::int64_t r_;
  std::int64_t t_;
};

struct RunOptions {
  /// 0 selects 2^n, which always suffices: every non-final step adds a vertex.
  std::uint64_t max_steps = 0;
  bool keep_final = true;
  /// Retain A_0, A_1, ..., A_fixpoint.
  bool keep_history = false;
};

struct Trace {
  std::vector<std::uint64_t> sizes;   // |A_0|, |A_1|, ..., |A_fixpoint|
  std::uint64_t fixpoint_step = 0;    // first i with A_{i+1} = A_i
  bool percolated = false;
  bool truncated = false;             // max_steps reached before a fixpoint
  std::optional<VertexSet> final;
  std::vector<VertexSet> history;
};

/// Synchronous bootstrap dynamics on one cube. Holds the counting kernel so
/// repeated runs on the same spec reuse the flip-mask tables.
///
/// run() only re-evaluates words whose neighborhood changed in the previous
/// step. This is exact because thresholds never decrease along a schedule.
class Engine {
 public:
  explicit Engine(const CubeSpec& spec) : kernel_(spec) {}

  const CubeSpec& spec() const { return kernel_.spec(); }
  const NeighborKernel& kernel() const { return kernel_; }

  /// a ∪ {v : |N(v) ∩ a| >= threshold}. Throws on threshold < 1.
  VertexSet step(const VertexSet& a, std::uint64_t threshold) const;

  Trace run(const VertexSet& a0, const ThresholdSchedule& schedule,
            const RunOptions& options = {}) const;

  /// Closure equals the whole cube. Skips all trace bookkeeping.
  bool percolates(const VertexSet& a0, const ThresholdSchedule& schedule) const;

 private:
  NeighborKernel kernel_;
};

VertexSet step(const CubeSpec& spec, const VertexSet& a, std::uint64_t threshold);

Trace run_to_fixpoint(const CubeSpec& spec, const VertexSet& a0,
                      const ThresholdSchedule& schedule,
                      const RunOptions& options = {});

struct DominanceReport {
  enum class Status {
    kDominates,           // A_i(lo) ⊇ A_i(hi) at every step
    kViolated,            // containment failed at `step`
    kPreconditionFailed,  // lo.at(step) > hi.at(step)
  };
  Status status = Status::kDominates;
  std::uint64_t step = 0;
  std::uint64_t steps_checked = 0;
  Trace lo_trace;
  Trace hi_trace;

  bool dominates() const { return status == Status::kDominates; }
};

/// Runs both schedules from a0 and checks per-step containment of the
/// lower-threshold trajectory over the higher one.
DominanceReport trace_dominates(const CubeSpec& spec, const VertexSet& a0,
                                const ThresholdSchedule& lo,
                                const ThresholdSchedule& hi);

}  // namespace hcboot

#endif  // HCBOOT_ENGINE_HPP_
