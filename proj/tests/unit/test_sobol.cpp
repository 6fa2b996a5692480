#include <cstdint>
#include <vector>

#include <gtest/gtest.h>

#include "simbench/design.hpp"

using namespace simbench;

namespace {

// Independent oracle: direction numbers from the primitive-polynomial recursion,
// point i = XOR of v_j over the set bits of gray(i).
struct OracleDim {
  int degree;
  unsigned coeffs;
  std::vector<std::uint32_t> m;
};

std::vector<double> oracle_column(const OracleDim& dim, int n) {
  constexpr int kBits = 32;
  std::vector<std::uint64_t> v(kBits + 1);
  if (dim.degree == 0) {
    for (int j = 1; j <= kBits; ++j) v[j] = std::uint64_t{1} << (kBits - j);
  } else {
    const int s = dim.degree;
    for (int j = 1; j <= s; ++j) v[j] = std::uint64_t{dim.m[j - 1]} << (kBits - j);
    for (int j = s + 1; j <= kBits; ++j) {
      v[j] = v[j - s] ^ (v[j - s] >> s);
      for (int k = 1; k < s; ++k)
        if ((dim.coeffs >> (s - 1 - k)) & 1U) v[j] ^= v[j - k];
    }
  }
  std::vector<double> out;
  for (int i = 0; i < n; ++i) {
    const unsigned gray = static_cast<unsigned>(i) ^ (static_cast<unsigned>(i) >> 1);
    std::uint64_t x = 0;
    for (int j = 1; j <= kBits; ++j)
      if ((gray >> (j - 1)) & 1U) x ^= v[j];
    out.push_back(static_cast<double>(x) / 4294967296.0);
  }
  return out;
}

}  // namespace

TEST(Sobol, FirstOneDimensionalPoints) {
  const Design d = sobol(4, 1);
  EXPECT_EQ(d.points(0, 0), 0.0);
  EXPECT_EQ(d.points(1, 0), 0.5);
  EXPECT_EQ(d.points(2, 0), 0.75);
  EXPECT_EQ(d.points(3, 0), 0.25);
  EXPECT_EQ(d.method, Method::M6_Sobol);
}

TEST(Sobol, MatchesFrozenReferenceEightDimensions) {
  // Unscrambled reference sequence, rows 1..8 (row 0 is the origin).
  const double ref[8][8] = {
      {.5, .5, .5, .5, .5, .5, .5, .5},
      {.75, .25, .25, .25, .75, .75, .25, .75},
      {.25, .75, .75, .75, .25, .25, .75, .25},
      {.375, .375, .625, .875, .375, .125, .375, .875},
      {.875, .875, .125, .375, .875, .625, .875, .375},
      {.625, .125, .875, .625, .625, .875, .125, .125},
      {.125, .625, .375, .125, .125, .375, .625, .625},
      {.1875, .3125, .9375, .4375, .5625, .3125, .4375, .9375},
  };
  const Design d = sobol(9, 8);
  for (int j = 0; j < 8; ++j) EXPECT_EQ(d.points(0, j), 0.0);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(d.points(i + 1, j), ref[i][j]) << i << "," << j;
}

TEST(Sobol, MatchesRecursionOracle) {
  const std::vector<OracleDim> dims = {
      {0, 0, {}},          {1, 0, {1}},          {2, 1, {1, 3}},          {3, 1, {1, 3, 1}},
      {3, 2, {1, 1, 1}},   {4, 1, {1, 1, 3, 3}}, {4, 4, {1, 3, 5, 13}},   {5, 2, {1, 1, 5, 5, 17}},
  };
  const int n = 1000;
  const Design d = sobol(n, 8);
  for (int j = 0; j < 8; ++j) {
    const auto col = oracle_column(dims[static_cast<std::size_t>(j)], n);
    for (int i = 0; i < n; ++i) ASSERT_EQ(d.points(i, j), col[static_cast<std::size_t>(i)]) << i << "," << j;
  }
}

TEST(Sobol, DyadicBalance) {
  for (int k = 0; k <= 6; ++k) {
    const int n = 1 << k;
    const Design d = sobol(n, 8);
    for (int j = 0; j < 8; ++j) {
      std::vector<int> hits(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(d.points(i, j) * n)];
      for (int h : hits) ASSERT_EQ(h, 1) << "k=" << k << " dim=" << j;
    }
  }
}

TEST(Sobol, DeterministicAndBounded) {
  EXPECT_EQ(sobol(100, 21).points, sobol(100, 21).points);
  const Design d = sobol(500, 21);
  EXPECT_GE(d.points.minCoeff(), 0.0);
  EXPECT_LT(d.points.maxCoeff(), 1.0);
}

TEST(Sobol, Errors) {
  EXPECT_EQ(sobol_max_dimension(), 21);
  EXPECT_THROW(sobol(10, 22), UnsupportedDimensionError);
  EXPECT_THROW(sobol(0, 2), std::invalid_argument);
}
