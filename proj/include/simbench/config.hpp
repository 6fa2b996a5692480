#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "simbench/design.hpp"
#include "simbench/emulator.hpp"
#include "simbench/testbed.hpp"

namespace simbench {

struct StudyConfig {
  RegistryConfig registry;
  std::vector<Method> methods = {kAllMethods.begin(), kAllMethods.end()};
  std::vector<int> multipliers = {5, 10, 15};
  int replicates = 50;
  std::uint64_t master_seed = 1;
  GPSettings gp;  // gp.seed is replaced per cell
  int maximin_budget = 2000;
  bool record_wall_time = false;
  bool debug_models = false;
  std::filesystem::path output_dir;
  int parallelism = 1;
};

/// Flat key-value text, one `key = value` per line, `#` starts a comment.
/// Lists are comma separated. Keys:
///   families, variants, dimensions, holdout, methods, multipliers, replicates,
///   seed, maximin_budget, gp_starts, gp_evals_per_start, gp_min_length,
///   gp_max_length, gp_nugget, gp_max_nugget, record_wall_time, debug_models,
///   parallel
/// Unset keys keep their defaults. Throws ConfigError on unknown keys or bad values.
StudyConfig parse_config(std::string_view text);
StudyConfig load_config(const std::filesystem::path& path);

/// Throws ConfigError when the config cannot describe a valid study.
void validate(const StudyConfig& config);

/// Canonical `key = value` lines for every setting that affects results.
/// Replicate count, output directory and parallelism are excluded so a store
/// can be extended and the hash is independent of scheduling.
std::string canonical_config(const StudyConfig& config);
/// Hex digest of canonical_config.
std::string config_hash(const StudyConfig& config);

}  // namespace simbench
