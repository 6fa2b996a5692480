#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "simbench/errors.hpp"
#include "simbench/testbed.hpp"

using namespace simbench;

TEST(Functions, MatchReferenceValues) {
  const std::vector<double> x = {0.2, 0.7, 0.4};
  EXPECT_NEAR(evaluate_function(Family::Additive, Variant::A, x), 1.309312588244998, 1e-14);
  EXPECT_NEAR(evaluate_function(Family::Interaction, Variant::B, x), 0.8883124203130579, 1e-14);
  EXPECT_NEAR(evaluate_function(Family::Oscillatory, Variant::A, x), -0.7865665949660275, 1e-14);
  EXPECT_NEAR(evaluate_function(Family::Ridge, Variant::B, x), 0.39619941479218224, 1e-14);
}

TEST(Functions, ConstantFamily) {
  const std::vector<double> a = {0.1, 0.9}, b = {0.6, 0.3};
  EXPECT_EQ(evaluate_function(Family::Constant, Variant::A, a), evaluate_function(Family::Constant, Variant::A, b));
  EXPECT_NE(evaluate_function(Family::Constant, Variant::A, a), evaluate_function(Family::Constant, Variant::B, a));
}

TEST(Functions, VariantsDiffer) {
  const std::vector<double> x = {0.3, 0.8};
  for (Family f : {Family::Additive, Family::Interaction, Family::Oscillatory, Family::Ridge})
    EXPECT_NE(evaluate_function(f, Variant::A, x), evaluate_function(f, Variant::B, x));
}

TEST(Functions, FiniteForManyDimensions) {
  for (int d : {1, 2, 4, 8, 16}) {
    const std::vector<double> x(static_cast<std::size_t>(d), 0.37);
    for (Family f : {Family::Additive, Family::Interaction, Family::Oscillatory, Family::Ridge})
      EXPECT_TRUE(std::isfinite(evaluate_function(f, Variant::A, x)));
  }
}

TEST(Registry, DefaultHasTwentyFourProblems) {
  RegistryConfig cfg;
  cfg.holdout_size = 10;
  const auto problems = build_registry(cfg, 1);
  ASSERT_EQ(problems.size(), 24u);
  std::set<std::string> ids;
  for (const auto& p : problems) ids.insert(p.id);
  EXPECT_EQ(ids.size(), 24u);
  EXPECT_EQ(problems.front().id, "additive-A-2");
  EXPECT_EQ(problems.back().id, "ridge-B-8");
}

TEST(Registry, CardinalityIsProduct) {
  RegistryConfig cfg;
  cfg.families = {"ridge"};
  cfg.variants = {"B"};
  cfg.dimensions = {3};
  cfg.holdout_size = 5;
  EXPECT_EQ(build_registry(cfg, 1).size(), 1u);
  cfg.families = {"ridge", "additive", "oscillatory"};
  cfg.dimensions = {1, 3};
  EXPECT_EQ(build_registry(cfg, 1).size(), 6u);
}

TEST(Registry, DeterministicHoldout) {
  RegistryConfig cfg;
  cfg.holdout_size = 100;
  const auto a = build_registry(cfg, 9);
  const auto b = build_registry(cfg, 9);
  const auto c = build_registry(cfg, 10);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].holdout_points, b[i].holdout_points);
    EXPECT_EQ(a[i].holdout_values, b[i].holdout_values);
    EXPECT_EQ(a[i].checksum(), b[i].checksum());
    EXPECT_NE(a[i].checksum(), c[i].checksum());
  }
}

TEST(Registry, HoldoutIndependentOfRegistryComposition) {
  RegistryConfig full;
  full.holdout_size = 50;
  RegistryConfig one = full;
  one.families = {"oscillatory"};
  one.variants = {"B"};
  one.dimensions = {4};
  const auto all = build_registry(full, 3);
  const auto single = build_registry(one, 3);
  for (const auto& p : all)
    if (p.id == "oscillatory-B-4") EXPECT_EQ(p.holdout_values, single[0].holdout_values);
}

TEST(Registry, HoldoutRecomputable) {
  RegistryConfig cfg;
  cfg.holdout_size = 200;
  for (const auto& p : build_registry(cfg, 2)) {
    EXPECT_EQ(p.holdout_points.rows(), 200);
    EXPECT_EQ(p.holdout_points.cols(), p.dimension);
    EXPECT_GE(p.holdout_points.minCoeff(), 0.0);
    EXPECT_LE(p.holdout_points.maxCoeff(), 1.0);
    EXPECT_EQ(evaluate(p, p.holdout_points), p.holdout_values);
  }
}

TEST(Registry, UnknownFamilyIsConfigError) {
  RegistryConfig cfg;
  cfg.families = {"additive", "banana"};
  EXPECT_THROW(build_registry(cfg, 1), ConfigError);
  cfg.families = {"additive"};
  cfg.variants = {"C"};
  EXPECT_THROW(build_registry(cfg, 1), ConfigError);
}

TEST(Evaluate, DimensionMismatch) {
  RegistryConfig cfg;
  cfg.families = {"additive"};
  cfg.variants = {"A"};
  cfg.dimensions = {2};
  cfg.holdout_size = 3;
  const auto p = build_registry(cfg, 1).front();
  EXPECT_THROW(evaluate(p, Eigen::MatrixXd::Zero(4, 3)), std::invalid_argument);
  EXPECT_EQ(evaluate(p, Eigen::MatrixXd::Zero(0, 2)).size(), 0);
}

TEST(SizeClassTest, ParseAndResolve) {
  EXPECT_EQ(SizeClass::parse("15d").multiplier, 15);
  EXPECT_EQ(SizeClass{10}.resolve(4), 40);
  EXPECT_EQ(SizeClass{5}.label(), "5d");
  EXPECT_THROW(SizeClass::parse("15"), std::invalid_argument);
  EXPECT_THROW(SizeClass::parse("0d"), std::invalid_argument);
  EXPECT_LT(SizeClass{5}, SizeClass{10});
}

TEST(Manifest, ListsProblems) {
  RegistryConfig cfg;
  cfg.holdout_size = 10;
  const auto problems = build_registry(cfg, 1);
  const auto m = registry_manifest(problems);
  ASSERT_EQ(m.size(), 24u);
  EXPECT_EQ(m[0]["id"], "additive-A-2");
  EXPECT_EQ(m[0]["dimension"], 2);
  EXPECT_EQ(m[0]["holdout_checksum"].get<std::string>().size(), 16u);
}
