#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace simbench {

/// Dimension-scalable test functions on [0,1]^d, roughly ordered by how hard
/// they are to emulate. Constant is not part of the default registry; it
/// exists for degenerate-case studies.
enum class Family : std::uint8_t { Additive, Interaction, Oscillatory, Ridge, Constant };
enum class Variant : std::uint8_t { A, B };

std::string_view family_name(Family f);
Family parse_family(std::string_view name);  // throws ConfigError
std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);  // throws ConfigError

double evaluate_function(Family family, Variant variant, std::span<const double> x);

struct Problem {
  Family family = Family::Additive;
  Variant variant = Variant::A;
  int dimension = 0;
  std::string id;  // "family-variant-d"
  Eigen::MatrixXd holdout_points;
  Eigen::VectorXd holdout_values;

  /// Hash of the hold-out points and values.
  std::uint64_t checksum() const;
};

/// Sample-size ladder entry: n = multiplier * dimension.
struct SizeClass {
  int multiplier = 10;

  int resolve(int dimension) const { return multiplier * dimension; }
  std::string label() const { return std::to_string(multiplier) + "d"; }
  static SizeClass parse(std::string_view label);
  auto operator<=>(const SizeClass&) const = default;
};

struct RegistryConfig {
  std::vector<std::string> families = {"additive", "interaction", "oscillatory", "ridge"};
  std::vector<std::string> variants = {"A", "B"};
  std::vector<int> dimensions = {2, 4, 8};
  int holdout_size = 1000;
};

/// One problem per (family, variant, dimension) in config order, each with a
/// hold-out set drawn uniformly from a stream keyed by (master_seed, id).
std::vector<Problem> build_registry(const RegistryConfig& config, std::uint64_t master_seed);

/// Row-wise function values. Throws std::invalid_argument on a dimension mismatch.
Eigen::VectorXd evaluate(const Problem& problem, const Eigen::MatrixXd& points);

nlohmann::json registry_manifest(const std::vector<Problem>& problems);

}  // namespace simbench
