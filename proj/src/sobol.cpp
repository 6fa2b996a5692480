#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "simbench/design.hpp"

namespace simbench {

namespace {

struct Primitive {
  int degree;
  std::uint32_t coeffs;  // interior coefficients of the primitive polynomial
  std::array<std::uint32_t, 8> m;
};

// Joe & Kuo, new-joe-kuo-6.21201, dimensions 2..21. Dimension 1 is the
// van der Corput sequence (all m = 1).
constexpr std::array<Primitive, 20> kTable = {{
    {1, 0, {1}},
    {2, 1, {1, 3}},
    {3, 1, {1, 3, 1}},
    {3, 2, {1, 1, 1}},
    {4, 1, {1, 1, 3, 3}},
    {4, 4, {1, 3, 5, 13}},
    {5, 2, {1, 1, 5, 5, 17}},
    {5, 4, {1, 1, 5, 5, 5}},
    {5, 7, {1, 1, 7, 11, 19}},
    {5, 11, {1, 1, 5, 1, 1}},
    {5, 13, {1, 1, 1, 3, 11}},
    {5, 14, {1, 3, 5, 5, 31}},
    {6, 1, {1, 3, 3, 9, 7, 49}},
    {6, 13, {1, 1, 1, 15, 21, 21}},
    {6, 16, {1, 3, 1, 13, 27, 49}},
    {6, 19, {1, 1, 1, 15, 7, 5}},
    {6, 22, {1, 3, 1, 15, 13, 25}},
    {6, 25, {1, 1, 5, 5, 19, 61}},
    {7, 1, {1, 3, 7, 11, 23, 15, 103}},
    {7, 4, {1, 3, 7, 13, 13, 15, 69}},
}};

constexpr int kBits = 32;

std::array<std::uint32_t, kBits> direction_numbers(int dim) {
  std::array<std::uint32_t, kBits> v{};
  if (dim == 0) {
    for (int k = 0; k < kBits; ++k) v[k] = 1U << (kBits - 1 - k);
    return v;
  }
  const Primitive& p = kTable[static_cast<std::size_t>(dim - 1)];
  const int s = p.degree;
  for (int k = 0; k < s; ++k) v[k] = p.m[static_cast<std::size_t>(k)] << (kBits - 1 - k);
  for (int k = s; k < kBits; ++k) {
    std::uint32_t value = v[k - s] ^ (v[k - s] >> s);
    for (int i = 1; i < s; ++i)
      if ((p.coeffs >> (s - 1 - i)) & 1U) value ^= v[k - i];
    v[k] = value;
  }
  return v;
}

}  // namespace

int sobol_max_dimension() { return static_cast<int>(kTable.size()) + 1; }

Design sobol(int n, int d) {
  if (n < 1) throw std::invalid_argument("sobol: n must be >= 1");
  if (d < 1) throw std::invalid_argument("sobol: d must be >= 1");
  if (d > sobol_max_dimension())
    throw UnsupportedDimensionError("sobol: dimension " + std::to_string(d) + " exceeds the " +
                                    std::to_string(sobol_max_dimension()) +
                                    "-dimensional direction table");
  if (static_cast<std::uint64_t>(n) >= (std::uint64_t{1} << kBits))
    throw std::invalid_argument("sobol: n exceeds 2^32 - 1");

  std::vector<std::array<std::uint32_t, kBits>> dirs;
  for (int j = 0; j < d; ++j) dirs.push_back(direction_numbers(j));

  Design out;
  out.points.resize(n, d);
  out.method = Method::M6_Sobol;
  std::vector<std::uint32_t> state(static_cast<std::size_t>(d), 0);
  out.points.row(0).setZero();
  // Gray-code order: point i flips the direction number at the lowest zero bit of i - 1.
  for (std::uint32_t i = 1; i < static_cast<std::uint32_t>(n); ++i) {
    std::uint32_t c = 0;
    for (std::uint32_t prev = i - 1; prev & 1U; prev >>= 1) ++c;
    for (int j = 0; j < d; ++j) {
      state[static_cast<std::size_t>(j)] ^= dirs[static_cast<std::size_t>(j)][c];
      out.points(i, j) = static_cast<double>(state[static_cast<std::size_t>(j)]) * 0x1.0p-32;
    }
  }
  return out;
}

}  // namespace simbench
