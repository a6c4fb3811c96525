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

#include "hcboot/vertex_set.hpp"

#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"

namespace hcboot {
namespace {

TEST(VertexSet, SmallDimensionUsesMaskedWord) {
  VertexSet a = VertexSet::full(2);
  EXPECT_EQ(a.count(), 4u);
  EXPECT_EQ(a.num_words(), 1u);
  EXPECT_EQ(a.word_mask(), 0xFu);
  EXPECT_EQ(a.complement(), VertexSet::empty(2));
  EXPECT_TRUE(a.is_full());
}

TEST(VertexSet, MembersRoundTrip) {
  VertexSet a(7, {0, 5, 64, 127});
  EXPECT_EQ(a.members(), (std::vector<Vertex>{0, 5, 64, 127}));
  a.erase(64);
  EXPECT_FALSE(a.contains(64));
  EXPECT_EQ(a.count(), 3u);
}

TEST(VertexSet, FromBits) {
  EXPECT_EQ(VertexSet::from_bits(2, 0b1001), VertexSet(2, {0, 3}));
}

TEST(VertexSet, LatticeLaws) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const int n = testing::random_int(rng, 1, 10);
    const VertexSet a = testing::random_set(n, testing::random_density(rng), rng);
    const VertexSet b = testing::random_set(n, testing::random_density(rng), rng);
    EXPECT_TRUE((a & b).is_subset_of(a));
    EXPECT_TRUE(a.is_subset_of(a | b));
    EXPECT_EQ((a | b).count() + (a & b).count(), a.count() + b.count());
    EXPECT_EQ(a.complement().complement(), a);
    EXPECT_EQ(a.count() + a.complement().count(), a.universe_size());
  }
}

TEST(VertexSet, MismatchedDimensionsThrow) {
  VertexSet a(3);
  EXPECT_THROW(a |= VertexSet(4), std::invalid_argument);
}

}  // namespace
}  // namespace hcboot
