#include "simbench/testbed.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "simbench/errors.hpp"
#include "simbench/rng.hpp"

namespace simbench {

namespace {

constexpr std::array<std::string_view, 5> kFamilyNames = {"additive", "interaction", "oscillatory",
                                                          "ridge", "constant"};

constexpr double kPi = std::numbers::pi;

// sum_k sin(a pi x_k) / k
double additive(std::span<const double> x, double a) {
  double sum = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) sum += std::sin(a * kPi * x[k]) / static_cast<double>(k + 1);
  return sum;
}

// prod_k (1 + cos(b pi x_k) / (k + 1))
double interaction(std::span<const double> x, double b) {
  double prod = 1.0;
  for (std::size_t k = 0; k < x.size(); ++k) prod *= 1.0 + std::cos(b * kPi * x[k]) / static_cast<double>(k + 2);
  return prod;
}

// Genz oscillatory, weights proportional to 1/k and summing to h.
double oscillatory(std::span<const double> x, double h) {
  double norm = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) norm += 1.0 / static_cast<double>(k + 1);
  double phase = 2.0 * kPi * 0.25;
  for (std::size_t k = 0; k < x.size(); ++k) phase += h / (norm * static_cast<double>(k + 1)) * x[k];
  return std::cos(phase);
}

// Gaussian ridge along the hyperplane sum(x) = d/2 over a slight linear tilt.
double ridge(std::span<const double> x, double width) {
  double s = 0.0;
  double mean = 0.0;
  for (double v : x) {
    s += v - 0.5;
    mean += v;
  }
  const auto d = static_cast<double>(x.size());
  s /= std::sqrt(d);
  mean /= d;
  return 0.1 * mean + std::exp(-s * s / (2.0 * width * width));
}

}  // namespace

std::string_view family_name(Family f) { return kFamilyNames.at(static_cast<std::size_t>(f)); }

Family parse_family(std::string_view name) {
  for (std::size_t i = 0; i < kFamilyNames.size(); ++i)
    if (kFamilyNames[i] == name) return static_cast<Family>(i);
  throw ConfigError("unknown test function family: '" + std::string(name) + "'");
}

std::string_view variant_name(Variant v) { return v == Variant::A ? "A" : "B"; }

Variant parse_variant(std::string_view name) {
  if (name == "A") return Variant::A;
  if (name == "B") return Variant::B;
  throw ConfigError("unknown variant: '" + std::string(name) + "' (expected A or B)");
}

double evaluate_function(Family family, Variant variant, std::span<const double> x) {
  const bool a = variant == Variant::A;
  switch (family) {
    case Family::Additive:
      return additive(x, a ? 1.0 : 2.0);
    case Family::Interaction:
      return interaction(x, a ? 2.0 : 3.0);
    case Family::Oscillatory:
      return oscillatory(x, a ? 6.0 : 10.0);
    case Family::Ridge:
      return ridge(x, a ? 0.15 : 0.08);
    case Family::Constant:
      return a ? 1.0 : 2.0;
  }
  return 0.0;
}

std::uint64_t Problem::checksum() const {
  Hasher h;
  h.add(id);
  for (Eigen::Index i = 0; i < holdout_points.rows(); ++i)
    for (Eigen::Index j = 0; j < holdout_points.cols(); ++j) h.add(holdout_points(i, j));
  for (Eigen::Index i = 0; i < holdout_values.size(); ++i) h.add(holdout_values(i));
  return h.digest();
}

SizeClass SizeClass::parse(std::string_view label) {
  int multiplier = 0;
  const auto* end = label.data() + label.size();
  auto [ptr, ec] = std::from_chars(label.data(), end, multiplier);
  if (ec != std::errc{} || multiplier <= 0 || !(ptr + 1 == end && *ptr == 'd'))
    throw std::invalid_argument("bad size class label: '" + std::string(label) + "'");
  return SizeClass{multiplier};
}

std::vector<Problem> build_registry(const RegistryConfig& config, std::uint64_t master_seed) {
  if (config.holdout_size < 1) throw ConfigError("holdout size must be >= 1");
  std::vector<Family> families;
  for (const auto& name : config.families) families.push_back(parse_family(name));
  std::vector<Variant> variants;
  for (const auto& name : config.variants) variants.push_back(parse_variant(name));
  for (int d : config.dimensions)
    if (d < 1) throw ConfigError("dimensions must be positive");

  std::vector<Problem> problems;
  for (Family f : families) {
    for (Variant v : variants) {
      for (int d : config.dimensions) {
        Problem p;
        p.family = f;
        p.variant = v;
        p.dimension = d;
        p.id = std::string(family_name(f)) + "-" + std::string(variant_name(v)) + "-" + std::to_string(d);
        Rng rng(Hasher().add(master_seed).add(p.id).add("holdout").digest());
        p.holdout_points.resize(config.holdout_size, d);
        for (Eigen::Index i = 0; i < p.holdout_points.rows(); ++i)
          for (Eigen::Index j = 0; j < d; ++j) p.holdout_points(i, j) = rng.uniform01();
        p.holdout_values = evaluate(p, p.holdout_points);
        problems.push_back(std::move(p));
      }
    }
  }
  return problems;
}

Eigen::VectorXd evaluate(const Problem& problem, const Eigen::MatrixXd& points) {
  if (points.cols() != problem.dimension)
    throw std::invalid_argument("evaluate: points have " + std::to_string(points.cols()) +
                                " columns, problem " + problem.id + " expects " +
                                std::to_string(problem.dimension));
  Eigen::VectorXd out(points.rows());
  std::vector<double> row(static_cast<std::size_t>(problem.dimension));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) row[static_cast<std::size_t>(j)] = points(i, j);
    out(i) = evaluate_function(problem.family, problem.variant, row);
  }
  return out;
}

nlohmann::json registry_manifest(const std::vector<Problem>& problems) {
  nlohmann::json list = nlohmann::json::array();
  char hex[17];
  for (const auto& p : problems) {
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(p.checksum()));
    list.push_back({{"id", p.id},
                    {"family", family_name(p.family)},
                    {"variant", variant_name(p.variant)},
                    {"dimension", p.dimension},
                    {"holdout_size", p.holdout_points.rows()},
                    {"holdout_checksum", hex}});
  }
  return list;
}

}  // namespace simbench
