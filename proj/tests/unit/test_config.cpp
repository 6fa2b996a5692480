#include <gtest/gtest.h>

#include "simbench/config.hpp"
#include "simbench/errors.hpp"

using namespace simbench;

TEST(Config, DefaultsDescribeTheFullStudy) {
  const StudyConfig c = parse_config("");
  EXPECT_EQ(c.registry.families.size(), 4u);
  EXPECT_EQ(c.registry.variants.size(), 2u);
  EXPECT_EQ(c.registry.dimensions, (std::vector<int>{2, 4, 8}));
  EXPECT_EQ(c.registry.holdout_size, 1000);
  EXPECT_EQ(c.methods.size(), 7u);
  EXPECT_EQ(c.multipliers, (std::vector<int>{5, 10, 15}));
  EXPECT_EQ(c.replicates, 50);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, ParsesAllKeys) {
  const StudyConfig c = parse_config(R"(# desk-scale study
families = additive, ridge
variants = A
dimensions = 2
holdout = 250   # points
methods = M1, M6
multipliers = 5,10
replicates = 3
seed = 18446744073709551615
maximin_budget = 10
gp_starts = 2
gp_evals_per_start = 50
gp_min_length = 0.05
gp_max_length = 4
gp_nugget = 1e-9
gp_max_nugget = 1e-5
record_wall_time = true
debug_models = yes
parallel = 4
)");
  EXPECT_EQ(c.registry.families, (std::vector<std::string>{"additive", "ridge"}));
  EXPECT_EQ(c.registry.holdout_size, 250);
  EXPECT_EQ(c.methods, (std::vector<Method>{Method::M1_LHS, Method::M6_Sobol}));
  EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
  EXPECT_EQ(c.gp.starts, 2);
  EXPECT_EQ(c.gp.min_length, 0.05);
  EXPECT_EQ(c.gp.nugget, 1e-9);
  EXPECT_TRUE(c.record_wall_time);
  EXPECT_TRUE(c.debug_models);
  EXPECT_EQ(c.parallelism, 4);
  EXPECT_NO_THROW(validate(c));
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("bogus = 1"), ConfigError);
  EXPECT_THROW(parse_config("replicates = 3\nreplicates = 4"), ConfigError);
  EXPECT_THROW(parse_config("replicates = three"), ConfigError);
  EXPECT_THROW(parse_config("methods = M1, M9"), ConfigError);
  EXPECT_THROW(parse_config("just text"), ConfigError);
  EXPECT_THROW(parse_config("record_wall_time = maybe"), ConfigError);
  EXPECT_THROW(validate(parse_config("replicates = 0")), ConfigError);
  EXPECT_THROW(validate(parse_config("families = additive, teapot")), ConfigError);
  EXPECT_THROW(validate(parse_config("dimensions = 1\nmultipliers = 1")), ConfigError);
  EXPECT_THROW(validate(parse_config("dimensions = 30")), ConfigError);
  EXPECT_NO_THROW(validate(parse_config("dimensions = 30\nmethods = M1, M2")));
  EXPECT_THROW(validate(parse_config("multipliers = 5, 5")), ConfigError);
  EXPECT_THROW(validate(parse_config("gp_nugget = 1e-3")), ConfigError);
}

TEST(Config, HashTracksResultAffectingKeysOnly) {
  const StudyConfig base = parse_config("");
  StudyConfig more = base;
  more.replicates = 80;
  more.parallelism = 8;
  more.output_dir = "/tmp/elsewhere";
  EXPECT_EQ(config_hash(base), config_hash(more));
  StudyConfig other = base;
  other.master_seed = 2;
  EXPECT_NE(config_hash(base), config_hash(other));
  other = base;
  other.gp.nugget = 1e-7;
  EXPECT_NE(config_hash(base), config_hash(other));
  EXPECT_EQ(config_hash(base).size(), 16u);
}

TEST(Config, CanonicalTextReparses) {
  StudyConfig c = parse_config("families = ridge\nmultipliers = 10, 15\ngp_min_length = 0.1");
  const StudyConfig back = parse_config(canonical_config(c));
  EXPECT_EQ(canonical_config(back), canonical_config(c));
}
