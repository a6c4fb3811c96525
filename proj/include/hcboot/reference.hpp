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

#ifndef HCBOOT_REFERENCE_HPP_
#define HCBOOT_REFERENCE_HPP_

// Serial scalar implementations, one vertex at a time. These exist to check
// the bit-parallel kernels and to give the benchmarks a baseline.

#include <cstdint>
#include <vector>

#include "hcboot/cube.hpp"
#include "hcboot/engine.hpp"
#include "hcboot/vertex_set.hpp"

namespace hcboot::reference {

std::vector<std::uint32_t> infected_neighbor_counts(const CubeSpec& spec,
                                                    const VertexSet& a);

VertexSet step(const CubeSpec& spec, const VertexSet& a, std::uint64_t threshold);

/// Full-recompute iteration until A_{i+1} = A_i.
Trace run_to_fixpoint(const CubeSpec& spec, const VertexSet& a0,
                      const ThresholdSchedule& schedule);

}  // namespace hcboot::reference

#endif  // HCBOOT_REFERENCE_HPP_
