#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace simbench {

/// The seven experiment designs compared by the built-in study.
enum class Method : std::uint8_t {
  M1_LHS,
  M2_MaximinLHS,
  M3_ZeroCorrLHS,
  M4_CosMaximin,
  M5_CosZeroCorr,
  M6_Sobol,
  M7_SRS,
};

inline constexpr std::array<Method, 7> kAllMethods = {
    Method::M1_LHS,        Method::M2_MaximinLHS,  Method::M3_ZeroCorrLHS, Method::M4_CosMaximin,
    Method::M5_CosZeroCorr, Method::M6_Sobol,       Method::M7_SRS};

/// Short label "M1".."M7"; the on-disk form.
std::string_view method_label(Method m);
/// Human-readable description, e.g. "maximin LHS".
std::string_view method_description(Method m);
/// Parses "M1".."M7". Throws std::invalid_argument otherwise.
Method parse_method(std::string_view label);
inline int method_index(Method m) { return static_cast<int>(m); }

struct Design {
  Eigen::MatrixXd points;  // n x d, every entry in [0,1]
  Method method = Method::M1_LHS;
  std::uint64_t seed = 0;
  std::uint32_t replicate_id = 0;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dimension() const { return points.cols(); }
};

class UnsupportedDimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// M1. One point per stratum [(i-1)/n, i/n) in every column, jittered uniformly.
Design lhs_random(int n, int d, std::uint64_t seed);

// M2. Hill-climbs from lhs_random(n, d, seed) by swapping two entries of one
// column; a swap is kept when the minimum pairwise Euclidean distance does not
// decrease. budget = 0 returns the starting design unchanged.
Design lhs_maximin(int n, int d, std::uint64_t seed, int budget);

/// Iman-Conover rank rearrangement towards identity correlation. Each column's
/// values are kept, only their row order changes. The returned design never has
/// a larger max |pairwise column correlation| than the input.
Design decorrelate(const Design& design);

// M3 = decorrelate(lhs_random(n, d, seed)).
Design lhs_zero_corr(int n, int d, std::uint64_t seed);

/// x -> (1 - cos(pi x)) / 2 on every coordinate. Retags M2 -> M4 and M3 -> M5.
/// Throws std::domain_error for coordinates outside [0,1].
Design cosine_transform(const Design& design);
double cosine_map(double x);

/// Unscrambled Sobol' points 0..n-1, starting at the origin so every
/// n = 2^k prefix is dyadically balanced. Joe-Kuo direction numbers.
/// Throws UnsupportedDimensionError past sobol_max_dimension().
Design sobol(int n, int d);
int sobol_max_dimension();

// M7. i.i.d. uniform points.
Design srs(int n, int d, std::uint64_t seed);

/// Reorders columns by a permutation drawn from (seed, replicate_id).
Design permute_columns(const Design& design, std::uint32_t replicate_id, std::uint64_t seed);

/// Builds the base design for a method. M3/M5 fall back to a plain LHS when
/// d = 1 or n < 3, where column correlation is undefined.
Design generate_design(Method method, int n, int d, std::uint64_t seed, int maximin_budget);

double min_pairwise_distance(const Eigen::MatrixXd& points);
double max_abs_column_correlation(const Eigen::MatrixXd& points);

/// CSV with header x1..xd, one row per point, 17 significant digits.
void write_design_csv(const Design& design, std::ostream& out);

}  // namespace simbench
