// Copyright 2026 The Pandemic ABM Authors
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


#include "pandemic_abm/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

namespace pabm {
namespace {

using Block = std::array<std::uint32_t, 4>;

TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerAllOnes) {
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPi) {
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, SameIdsGiveSameDraws) {
  const RngStream root(42);
  RngStream a = root.split(3, 7);
  RngStream b = root.split(3, 7);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
}

TEST(RngStream, DistinctIdsGiveDistinctKeys) {
  const RngStream root(42);
  std::set<std::uint64_t> keys;
  for (int a = 0; a < 50; ++a) {
    for (int b = 0; b < 50; ++b) keys.insert(root.split(a, b).key());
  }
  EXPECT_EQ(keys.size(), 2500u);
  EXPECT_NE(root.split(1, 2).key(), root.split(2, 1).key());
}

TEST(RngStream, UniformAtIsRandomAccessAndDoesNotAdvance) {
  RngStream s = RngStream(9).split(1);
  const double u5 = s.uniform_at(5);
  const double first = s.uniform();
  EXPECT_EQ(s.uniform_at(5), u5);
  RngStream t = RngStream(9).split(1);
  EXPECT_EQ(t.uniform(), first);
}

TEST(RngStream, UniformMomentsAndRange) {
  RngStream s(1);
  constexpr int n = 200000;
  double sum = 0.0;
  double sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    sq += u * u;
  }
  const double mean = sum / n;
  EXPECT_NEAR(mean, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sq / n - mean * mean, 1.0 / 12.0, 2e-3);
}

TEST(RngStream, BelowCoversRangeUniformly) {
  RngStream s(5);
  std::vector<int> counts(7, 0);
  constexpr int n = 70000;
  for (int k = 0; k < n; ++k) ++counts[s.below(7)];
  for (const int c : counts) EXPECT_NEAR(c, n / 7.0, 4.0 * std::sqrt(n * (1.0 / 7) * (6.0 / 7)));
}

enum class Purpose { kA = 1 };

TEST(RngStream, EnumIdsMatchTheirValue) {
  const RngStream root(3);
  EXPECT_EQ(root.split(Purpose::kA).key(), root.split(1).key());
}

}  // namespace
}  // namespace pabm
