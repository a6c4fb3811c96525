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

#include "hcboot/reference.hpp"

namespace hcboot::reference {

std::vector<std::uint32_t> infected_neighbor_counts(const CubeSpec& spec,
                                                    const VertexSet& a) {
  const std::vector<Vertex> masks = flip_masks(spec);
  std::vector<std::uint32_t> out(spec.num_vertices(), 0);
  for (std::uint64_t v = 0; v < spec.num_vertices(); ++v) {
    std::uint32_t c = 0;
    for (Vertex m : masks) c += a.contains(static_cast<Vertex>(v) ^ m) ? 1u : 0u;
    out[v] = c;
  }
  return out;
}

VertexSet step(const CubeSpec& spec, const VertexSet& a, std::uint64_t threshold) {
  const std::vector<std::uint32_t> counts = reference::infected_neighbor_counts(spec, a);
  VertexSet next = a;
  for (std::uint64_t v = 0; v < spec.num_vertices(); ++v) {
    if (counts[v] >= threshold) next.insert(static_cast<Vertex>(v));
  }
  return next;
}

Trace run_to_fixpoint(const CubeSpec& spec, const VertexSet& a0,
                      const ThresholdSchedule& schedule) {
  Trace trace;
  VertexSet cur = a0;
  trace.sizes.push_back(cur.count());
  for (std::uint64_t i = 1;; ++i) {
    VertexSet next = reference::step(spec, cur, schedule.at(i));
    if (next == cur) break;
    cur = std::move(next);
    trace.sizes.push_back(cur.count());
    trace.fixpoint_step = i;
  }
  trace.percolated = cur.is_full();
  trace.final = std::move(cur);
  return trace;
}

}  // namespace hcboot::reference
