#include <algorithm>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "simbench/rng.hpp"

using namespace simbench;

TEST(Rng, EngineMatchesReferenceMt19937_64) {
  Rng rng(5489);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, Uniform01InUnitInterval) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Rng, UniformIndexCoversRangeEvenly) {
  Rng rng(11);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) ++counts[rng.uniform_index(7)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  EXPECT_EQ(rng.uniform_index(1), 0u);
  EXPECT_EQ(rng.uniform_index(0), 0u);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng rng(5);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  rng.shuffle(std::span<int>(v));
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(Hasher, FrozenDigests) {
  EXPECT_EQ(Hasher().digest(), 14087677454934409008ULL);
  EXPECT_EQ(Hasher().add(std::uint64_t{1}).digest(), 14032713033332024147ULL);
  EXPECT_EQ(Hasher().add("ab").digest(), 9133436468053883614ULL);
  EXPECT_EQ(Hasher().add(std::uint64_t{42}).add("cell").digest(), 17265333139701880891ULL);
}

TEST(Hasher, StringBoundariesMatter) {
  EXPECT_NE(Hasher().add("ab").add("c").digest(), Hasher().add("a").add("bc").digest());
}
