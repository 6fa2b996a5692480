#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "simbench/config.hpp"
#include "simbench/metrics.hpp"
#include "simbench/testbed.hpp"

namespace simbench {

inline constexpr std::string_view kVersion = "simbench 0.1.0";

/// Startup failures (unwritable output directory and the like).
class StudyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Records in canonical key order plus the provenance manifest.
struct ResultsStore {
  std::vector<EvaluationRecord> records;
  nlohmann::json manifest;

  std::size_t failed() const;
};

/// Stable 64-bit seed for a cell; independent of platform and run.
std::uint64_t derive_cell_seed(std::uint64_t master_seed, std::string_view problem_id, Method method,
                               SizeClass size_class, std::uint32_t replicate);
/// Seed of the base design shared by all replicates of (problem, method, size).
std::uint64_t derive_design_seed(std::uint64_t master_seed, std::string_view problem_id, Method method,
                                 SizeClass size_class);

/// Computes one cell from scratch. Fit failures become a fit_failed record.
EvaluationRecord compute_cell(const StudyConfig& config, const Problem& problem, const CellKey& key);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every missing cell of the factorial study and writes
/// <out>/results.csv and <out>/manifest.json (plus models.jsonl with
/// debug_models). Results do not depend on config.parallelism.
/// Throws StudyError if the output directory is unusable and ConfigError on
/// an invalid config; individual cell failures never abort the run.
ResultsStore run_study(const StudyConfig& config, const ProgressFn& progress = {});

/// Continues an interrupted or shorter run stored in config.output_dir. The
/// stored config hash must match; otherwise ConfigError lists the differing keys.
ResultsStore resume(const std::filesystem::path& store_dir, const StudyConfig& config,
                    const ProgressFn& progress = {});

std::vector<EvaluationRecord> load_records(const std::filesystem::path& csv_path);

}  // namespace simbench
