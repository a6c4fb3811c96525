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

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace hcboot {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kBoot: return "boot";
    case Variant::kBoot1: return "boot1";
    case Variant::kBoot2: return "boot2";
    case Variant::kBoot3: return "boot3";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "boot") return Variant::kBoot;
  if (name == "boot1") return Variant::kBoot1;
  if (name == "boot2") return Variant::kBoot2;
  if (name == "boot3") return Variant::kBoot3;
  throw std::invalid_argument("unknown variant '" + std::string(name) + "'");
}

ThresholdSchedule ThresholdSchedule::make(Variant variant, std::int64_t r,
                                          std::int64_t t) {
  if (r < 1) throw std::invalid_argument("threshold r must be >= 1");
  if (t < 0) throw std::invalid_argument("relaxation t must be >= 0");
  switch (variant) {
    case Variant::kBoot:
      if (t != 0) throw std::invalid_argument("boot takes no relaxation (t must be 0)");
      break;
    case Variant::kBoot1:
      if (r - t < 1) {
        throw std::invalid_argument("boot1 first-step threshold r - t = " +
                                    std::to_string(r - t) + " < 1");
      }
      break;
    case Variant::kBoot2:
    case Variant::kBoot3:
      if (r - 2 * t < 1) {
        throw std::invalid_argument(std::string(to_string(variant)) +
                                    " first-step threshold r - 2t = " +
                                    std::to_string(r - 2 * t) + " < 1");
      }
      break;
  }
  return ThresholdSchedule(variant, r, t);
}

std::uint64_t ThresholdSchedule::at(std::uint64_t step) const {
  if (step < 1) throw std::invalid_argument("schedule steps start at 1");
  std::int64_t thr = r_;
  switch (variant_) {
    case Variant::kBoot:
      break;
    case Variant::kBoot1:
      if (step == 1) thr = r_ - t_;
      break;
    case Variant::kBoot2:
    case Variant::kBoot3:
      if (step == 1) thr = r_ - 2 * t_;
      else if (step == 2) thr = r_ - t_;
      break;
  }
  return static_cast<std::uint64_t>(thr);
}

VertexSet Engine::step(const VertexSet& a, std::uint64_t threshold) const {
  if (threshold < 1) throw std::invalid_argument("step threshold must be >= 1");
  VertexSet next = kernel_.at_least(a, threshold);
  next |= a;
  return next;
}

namespace {

// Shared driver for run() and percolates(). `on_step` is called with the new
// set after every step that changed it.
template <typename OnStep>
void drive(const NeighborKernel& kernel, VertexSet& cur,
           const ThresholdSchedule& schedule, std::uint64_t max_steps,
           std::uint64_t& steps_done, bool& reached_fixpoint, OnStep&& on_step) {
  const std::size_t nw = cur.num_words();
  const std::uint64_t full_word = cur.word_mask();
  std::span<std::uint64_t> words = cur.mutable_words();

  std::vector<std::uint32_t> active;
  active.reserve(nw);
  for (std::uint32_t w = 0; w < nw; ++w) {
    if (words[w] != full_word) active.push_back(w);
  }
  std::vector<std::uint64_t> masks(nw);
  std::vector<std::uint32_t> changed;
  std::vector<std::uint8_t> marked(nw, 0);
  std::uint64_t full_words = nw - active.size();

  steps_done = 0;
  reached_fixpoint = false;
  std::uint64_t prev_threshold = 0;
  for (std::uint64_t i = 1; i <= max_steps; ++i) {
    if (full_words == nw) {
      reached_fixpoint = true;
      return;
    }
    const std::uint64_t thr = schedule.at(i);
    if (thr < prev_threshold) {
      // Lower threshold than last step: every unfinished word is a candidate.
      active.clear();
      for (std::uint32_t w = 0; w < nw; ++w) {
        if (words[w] != full_word) active.push_back(w);
      }
    }
    prev_threshold = thr;

    kernel.at_least_words(cur, thr, active, masks);
    changed.clear();
    for (std::size_t j = 0; j < active.size(); ++j) {
      const std::uint32_t w = active[j];
      const std::uint64_t merged = words[w] | masks[j];
      if (merged != words[w]) {
        words[w] = merged;
        changed.push_back(w);
        if (merged == full_word) ++full_words;
      }
    }
    if (changed.empty()) {
      reached_fixpoint = true;
      return;
    }
    steps_done = i;
    on_step(cur);

    active.clear();
    for (std::uint32_t c : changed) {
      for (std::uint32_t off : kernel.word_offsets()) {
        const std::uint32_t w = c ^ off;
        if (!marked[w] && words[w] != full_word) {
          marked[w] = 1;
          active.push_back(w);
        }
      }
    }
    for (std::uint32_t w : active) marked[w] = 0;
    std::sort(active.begin(), active.end());
  }
  reached_fixpoint = (full_words == nw);
}

// Dense steps continue while one step gains at least 2^n >> kDenseCutoffShift
// vertices; the incremental phase takes over for the slow tail.
constexpr int kDenseCutoffShift = 8;

// Grows `a` to its closure under a fixed threshold and reports whether it
// filled the cube. Dense synchronous steps handle the bulk growth. After
// that, neighbor counts are kept as per-word bit planes and updated
// incrementally as vertices join, and words whose counts changed are
// re-checked in cyclic ascending order. The closure does not depend on the
// order.
bool close_in_place(const NeighborKernel& kernel, VertexSet& a, std::uint64_t threshold) {
  using Targets = NeighborKernel::Targets;
  const std::uint64_t cutoff = std::uint64_t{1} << a.dimension() >> kDenseCutoffShift;
  for (std::uint64_t size = a.count();;) {
    a |= kernel.at_least(a, threshold);
    const std::uint64_t grown = a.count();
    if (grown == size) return a.is_full();
    if (grown - size < cutoff) break;
    size = grown;
  }
  const std::size_t nw = a.num_words();
  const std::size_t stride = static_cast<std::size_t>(kernel.num_planes());
  const std::uint64_t full_word = a.word_mask();
  std::span<std::uint64_t> words = a.mutable_words();
  thread_local std::vector<std::uint64_t> plane_store;
  thread_local std::vector<std::uint8_t> queued;
  plane_store.resize(nw * stride);
  queued.assign(nw, 0);
  std::span<std::uint64_t> planes(plane_store.data(), nw * stride);
  kernel.count_planes(a, planes);
  std::size_t pending = 0;
  for (std::size_t w = 0; w < nw; ++w) {
    if (kernel.lanes_at_least(planes, static_cast<std::uint32_t>(w), threshold) & ~words[w] &
        full_word) {
      queued[w] = 1;
      ++pending;
    }
  }
  for (std::size_t w = 0; pending > 0; w = w + 1 == nw ? 0 : w + 1) {
    if (!queued[w]) continue;
    queued[w] = 0;
    --pending;
    const auto wi = static_cast<std::uint32_t>(w);
    std::uint64_t grown = 0;
    for (;;) {
      const std::uint64_t fresh =
          kernel.lanes_at_least(planes, wi, threshold) & ~words[w] & full_word;
      if (fresh == 0) break;
      words[w] |= fresh;
      grown |= fresh;
      kernel.add_to_planes(wi, fresh, planes, Targets::kSameWord);
    }
    if (grown == 0) continue;
    kernel.add_to_planes(wi, grown, planes, Targets::kOtherWords);
    for (std::uint32_t off : kernel.word_offsets()) {
      const std::uint32_t u = wi ^ off;
      const std::uint8_t mark = static_cast<std::uint8_t>(queued[u] == 0) &
                                static_cast<std::uint8_t>(words[u] != full_word);
      queued[u] |= mark;
      pending += mark;
    }
  }
  for (std::size_t w = 0; w < nw; ++w) {
    if (words[w] != full_word) return false;
  }
  return true;
}

std::uint64_t resolve_max_steps(const CubeSpec& spec, std::uint64_t requested) {
  return requested == 0 ? spec.num_vertices() : requested;
}

}  // namespace

Trace Engine::run(const VertexSet& a0, const ThresholdSchedule& schedule,
                  const RunOptions& options) const {
  if (a0.dimension() != spec().n()) {
    throw std::invalid_argument("run: initial set dimension mismatch");
  }
  Trace trace;
  VertexSet cur = a0;
  trace.sizes.push_back(cur.count());
  if (options.keep_history) trace.history.push_back(cur);

  std::uint64_t steps = 0;
  bool fixpoint = false;
  drive(kernel_, cur, schedule, resolve_max_steps(spec(), options.max_steps),
        steps, fixpoint, [&](const VertexSet& s) {
          trace.sizes.push_back(s.count());
          if (options.keep_history) trace.history.push_back(s);
        });
  trace.fixpoint_step = steps;
  trace.truncated = !fixpoint;
  trace.percolated = cur.is_full();
  if (options.keep_final) trace.final = std::move(cur);
  return trace;
}

bool Engine::percolates(const VertexSet& a0,
                        const ThresholdSchedule& schedule) const {
  if (a0.dimension() != spec().n()) {
    throw std::invalid_argument("percolates: initial set dimension mismatch");
  }
  // Steps with a relaxed threshold must stay synchronous; after them the
  // threshold is r for good and only the closure matters.
  std::uint64_t relaxed = 0;
  while (schedule.at(relaxed + 1) != static_cast<std::uint64_t>(schedule.r())) ++relaxed;
  VertexSet cur = a0;
  if (relaxed > 0) {
    std::uint64_t steps = 0;
    bool fixpoint = false;
    drive(kernel_, cur, schedule, relaxed, steps, fixpoint, [](const VertexSet&) {});
    if (fixpoint) return cur.is_full();
  }
  return close_in_place(kernel_, cur, static_cast<std::uint64_t>(schedule.r()));
}

VertexSet step(const CubeSpec& spec, const VertexSet& a, std::uint64_t threshold) {
  return Engine(spec).step(a, threshold);
}

Trace run_to_fixpoint(const CubeSpec& spec, const VertexSet& a0,
                      const ThresholdSchedule& schedule, const RunOptions& options) {
  return Engine(spec).run(a0, schedule, options);
}

DominanceReport trace_dominates(const CubeSpec& spec, const VertexSet& a0,
                                const ThresholdSchedule& lo,
                                const ThresholdSchedule& hi) {
  Engine engine(spec);
  RunOptions opts;
  opts.keep_history = true;
  DominanceReport report;
  report.lo_trace = engine.run(a0, lo, opts);
  report.hi_trace = engine.run(a0, hi, opts);

  const std::uint64_t length =
      std::max(report.lo_trace.fixpoint_step, report.hi_trace.fixpoint_step);
  // One step past the longer run covers the threshold that confirmed its fixpoint.
  for (std::uint64_t i = 1; i <= length + 1; ++i) {
    if (lo.at(i) > hi.at(i)) {
      report.status = DominanceReport::Status::kPreconditionFailed;
      report.step = i;
      return report;
    }
  }
  const auto& lo_hist = report.lo_trace.history;
  const auto& hi_hist = report.hi_trace.history;
  for (std::uint64_t i = 0; i <= length; ++i) {
    const VertexSet& a_lo = lo_hist[std::min<std::size_t>(i, lo_hist.size() - 1)];
    const VertexSet& a_hi = hi_hist[std::min<std::size_t>(i, hi_hist.size() - 1)];
    report.steps_checked = i + 1;
    if (!a_hi.is_subset_of(a_lo)) {
      report.status = DominanceReport::Status::kViolated;
      report.step = i;
      return report;
    }
  }
  return report;
}

}  // namespace hcboot
