#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include <gtest/gtest.h>

#include "simbench/errors.hpp"
#include "simbench/runner.hpp"

using namespace simbench;
namespace fs = std::filesystem;

namespace {

StudyConfig small_config(const std::string& name) {
  StudyConfig c = parse_config(R"(
families = additive, ridge
variants = A
dimensions = 2
holdout = 200
multipliers = 5, 10
replicates = 3
seed = 11
maximin_budget = 200
gp_starts = 2
gp_evals_per_start = 60
)");
  c.output_dir = fs::temp_directory_path() / ("simbench_unit_" + name);
  fs::remove_all(c.output_dir);
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

}  // namespace

TEST(Seeds, StableAndDistinct) {
  EXPECT_EQ(derive_cell_seed(1, "additive-A-2", Method::M1_LHS, SizeClass{5}, 0),
            derive_cell_seed(1, "additive-A-2", Method::M1_LHS, SizeClass{5}, 0));
  std::unordered_set<std::uint64_t> seen;
  std::size_t tuples = 0;
  const std::vector<std::string> problems = {"additive-A-2", "ridge-B-8", "oscillatory-A-4", "interaction-B-2"};
  for (const auto& p : problems)
    for (Method m : kAllMethods)
      for (int size : {5, 10, 15})
        for (std::uint32_t r = 0; r < 1200; ++r) {
          seen.insert(derive_cell_seed(42, p, m, SizeClass{size}, r));
          ++tuples;
        }
  EXPECT_GE(tuples, 100000u);
  EXPECT_EQ(seen.size(), tuples);
}

TEST(Seeds, MasterSeedChangesEverySeed) {
  for (Method m : kAllMethods)
    for (std::uint32_t r = 0; r < 200; ++r) {
      EXPECT_NE(derive_cell_seed(1, "ridge-A-4", m, SizeClass{10}, r), derive_cell_seed(2, "ridge-A-4", m, SizeClass{10}, r));
      EXPECT_NE(derive_design_seed(1, "ridge-A-4", m, SizeClass{10}), derive_design_seed(2, "ridge-A-4", m, SizeClass{10}));
    }
}

TEST(Runner, CountsAndManifest) {
  const StudyConfig c = small_config("counts");
  const ResultsStore s = run_study(c);
  EXPECT_EQ(s.records.size(), 2u * 7u * 2u * 3u);
  std::set<CellKey> keys;
  for (const auto& r : s.records) keys.insert(r.key);
  EXPECT_EQ(keys.size(), s.records.size());
  EXPECT_TRUE(std::is_sorted(s.records.begin(), s.records.end(),
                             [](const auto& a, const auto& b) { return a.key < b.key; }));
  EXPECT_EQ(s.manifest["config_hash"], config_hash(c));
  EXPECT_EQ(s.manifest["records"], s.records.size());
  EXPECT_EQ(s.manifest["complete"], true);
  EXPECT_EQ(s.manifest["version"], std::string(kVersion));
  EXPECT_EQ(s.manifest["registry"].size(), 2u);
  const auto csv = slurp(c.output_dir / "results.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 2 * 84);
  EXPECT_EQ(load_records(c.output_dir / "results.csv").size(), 84u);
  for (const auto& r : s.records) {
    EXPECT_EQ(r.status, Status::Ok);
    EXPECT_LE(r.rmse, r.ame);
    EXPECT_GT(r.rmse_trivial, 0.0);
  }
}

TEST(Runner, SingleProblemSevenRecords) {
  StudyConfig c = small_config("seven");
  c.registry.families = {"oscillatory"};
  c.multipliers = {10};
  c.replicates = 1;
  EXPECT_EQ(run_study(c).records.size(), 7u);
}

TEST(Runner, DeterministicAcrossRunsAndParallelism) {
  StudyConfig a = small_config("det_a");
  StudyConfig b = small_config("det_b");
  b.parallelism = 4;
  run_study(a);
  run_study(b);
  EXPECT_EQ(slurp(a.output_dir / "results.csv"), slurp(b.output_dir / "results.csv"));
  run_study(a);
  EXPECT_EQ(slurp(a.output_dir / "results.csv"), slurp(b.output_dir / "results.csv"));
}

TEST(Runner, ResumeAfterInterruptionMatchesFullRun) {
  const StudyConfig full = small_config("resume_full");
  run_study(full);
  const std::string expected = slurp(full.output_dir / "results.csv");

  StudyConfig part = small_config("resume_part");
  run_study(part);
  // Simulate an interrupted journal: roughly half the rows, cut mid-line.
  const std::string text = slurp(part.output_dir / "results.csv");
  spit(part.output_dir / "results.csv", text.substr(0, text.size() / 2 + 7));
  std::size_t computed = 0;
  resume(part.output_dir, part, [&](std::size_t, std::size_t total) { computed = total; });
  EXPECT_GT(computed, 30u);
  EXPECT_LT(computed, 60u);
  EXPECT_EQ(slurp(part.output_dir / "results.csv"), expected);
}

TEST(Runner, ResumeFromLiveJournal) {
  const StudyConfig full = small_config("journal_full");
  run_study(full);
  const std::string expected = slurp(full.output_dir / "results.csv");

  for (bool cut : {false, true}) {
    StudyConfig part = small_config(cut ? "journal_cut" : "journal");
    EXPECT_THROW(run_study(part, [](std::size_t done, std::size_t) {
                   if (done == 25) throw std::runtime_error("interrupted");
                 }),
                 std::runtime_error);
    const std::string journal = slurp(part.output_dir / "results.csv");
    EXPECT_EQ(std::count(journal.begin(), journal.end(), '\n'), 1 + 2 * 25);
    if (cut) spit(part.output_dir / "results.csv", journal.substr(0, journal.size() - 5));
    std::size_t computed = 0;
    resume(part.output_dir, part, [&](std::size_t, std::size_t total) { computed = total; });
    EXPECT_EQ(computed, cut ? 60u : 59u);
    EXPECT_EQ(slurp(part.output_dir / "results.csv"), expected);
  }
}

TEST(Runner, ResumeCompleteStoreIsNoOp) {
  const StudyConfig c = small_config("resume_noop");
  run_study(c);
  const std::string before = slurp(c.output_dir / "results.csv");
  bool called = false;
  const ResultsStore s = resume(c.output_dir, c, [&](std::size_t, std::size_t) { called = true; });
  EXPECT_FALSE(called);
  EXPECT_EQ(s.records.size(), 84u);
  EXPECT_EQ(slurp(c.output_dir / "results.csv"), before);
}

TEST(Runner, ResumeWithMoreReplicatesComputesOnlyNewOnes) {
  StudyConfig c = small_config("resume_more");
  c.replicates = 2;
  run_study(c);
  c.replicates = 3;
  std::size_t computed = 0;
  resume(c.output_dir, c, [&](std::size_t, std::size_t total) { computed = total; });
  EXPECT_EQ(computed, 2u * 7u * 2u);

  const StudyConfig fresh = small_config("resume_more_fresh");
  run_study(fresh);
  EXPECT_EQ(slurp(c.output_dir / "results.csv"), slurp(fresh.output_dir / "results.csv"));
}

TEST(Runner, ResumeRefusesChangedConfig) {
  StudyConfig c = small_config("resume_mismatch");
  c.replicates = 1;
  run_study(c);
  c.master_seed = 12;
  try {
    resume(c.output_dir, c);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("seed"), std::string::npos) << e.what();
  }
}

TEST(Runner, CellIndependence) {
  const StudyConfig c = small_config("independent");
  const ResultsStore s = run_study(c);
  const auto problems = build_registry(c.registry, c.master_seed);
  for (std::size_t i = 0; i < s.records.size(); i += 7) {
    const auto& want = s.records[i];
    const Problem* p = nullptr;
    for (const auto& q : problems)
      if (q.id == want.key.problem_id) p = &q;
    ASSERT_NE(p, nullptr);
    const EvaluationRecord got = compute_cell(c, *p, want.key);
    EXPECT_EQ(got.rmse, want.rmse);
    EXPECT_EQ(got.ame, want.ame);
    EXPECT_EQ(got.rmse_trivial, want.rmse_trivial);
  }
}

TEST(Runner, UnwritableOutputIsStartupError) {
  StudyConfig c = small_config("unwritable");
  fs::create_directories(c.output_dir);
  spit(c.output_dir / "file", "x");
  c.output_dir = c.output_dir / "file" / "sub";
  EXPECT_THROW(run_study(c), StudyError);
}

TEST(Runner, DebugModelsWritten) {
  StudyConfig c = small_config("debug");
  c.replicates = 1;
  c.debug_models = true;
  run_study(c);
  const std::string text = slurp(c.output_dir / "models.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2 * 7 * 2);
  EXPECT_NE(text.find("corr_lengths"), std::string::npos);
}

TEST(Runner, FitFailuresRecordedNotFatal) {
  StudyConfig c = small_config("failing");
  c.registry.families = {"additive"};
  c.methods = {Method::M1_LHS};
  c.multipliers = {10};
  c.replicates = 2;
  c.gp.min_length = 1000.0;
  c.gp.max_length = 2000.0;
  c.gp.nugget = 1e-300;
  c.gp.max_nugget = 1e-300;
  const ResultsStore s = run_study(c);
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_EQ(s.failed(), 2u);
  EXPECT_EQ(s.manifest["fit_failed"], 2);
  EXPECT_TRUE(std::isnan(s.records[0].rmse));
}

TEST(Cli, ExitCodes) {
  const fs::path dir = fs::temp_directory_path() / "simbench_unit_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  spit(dir / "ok.cfg", "families = ridge\nvariants = A\ndimensions = 2\nmultipliers = 5\nreplicates = 1\nholdout = 50\n");
  spit(dir / "fail.cfg",
       "families = additive\nvariants = A\ndimensions = 2\nmultipliers = 10\nreplicates = 1\nholdout = 50\nmethods = M1\n"
       "gp_min_length = 1000\ngp_max_length = 2000\ngp_nugget = 1e-300\ngp_max_nugget = 1e-300\n");
  const std::string exe = BENCH_EXE;
  auto run = [&](const std::string& args) {
    const int status = std::system((exe + " " + args + " > " + (dir / "log.txt").string() + " 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  EXPECT_EQ(run("run --config " + (dir / "ok.cfg").string() + " --seed 3 --out " + (dir / "ok").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "ok" / "results.csv"));
  EXPECT_TRUE(fs::exists(dir / "ok" / "manifest.json"));
  EXPECT_EQ(run("run --config " + (dir / "fail.cfg").string() + " --seed 3 --out " + (dir / "fail").string()), 2);
  spit(dir / "bad.cfg", "replicates = 0\n");
  EXPECT_EQ(run("run --config " + (dir / "bad.cfg").string() + " --seed 3 --out " + (dir / "bad").string()), 1);
  EXPECT_EQ(run("summary --store " + (dir / "ok" / "results.csv").string()), 0);
  EXPECT_EQ(run("run --config " + (dir / "ok.cfg").string() + " --seed 4 --out " + (dir / "ok").string() + " --resume"), 1);
  EXPECT_EQ(run("run --config " + (dir / "ok.cfg").string() + " --seed 3 --out " + (dir / "ok").string() + " --resume"), 0);
}
