#include "simbench/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "simbench/design.hpp"
#include "simbench/emulator.hpp"
#include "simbench/errors.hpp"
#include "simbench/rng.hpp"

namespace simbench {

namespace fs = std::filesystem;

namespace {

constexpr const char* kResultsFile = "results.csv";
constexpr const char* kManifestFile = "manifest.json";
constexpr const char* kModelsFile = "models.jsonl";

struct CellOutput {
  EvaluationRecord record;
  nlohmann::json model;  // null unless debug_models
};

CellOutput cell_from_base(const StudyConfig& config, const Problem& problem, const CellKey& key, const Design& base) {
  CellOutput out;
  EvaluationRecord& rec = out.record;
  rec.key = key;
  const std::uint64_t design_seed = derive_design_seed(config.master_seed, key.problem_id, key.method, key.size_class);
  const Design design = permute_columns(base, key.replicate, design_seed);
  const Eigen::VectorXd y = evaluate(problem, design.points);

  const TrivialModel trivial = fit_trivial(y);
  const Eigen::VectorXd trivial_pred = predict(trivial, problem.holdout_points);
  rec.rmse_trivial = rmse(problem.holdout_values, trivial_pred);
  rec.ame_trivial = ame(problem.holdout_values, trivial_pred);

  GPSettings gp = config.gp;
  gp.seed = derive_cell_seed(config.master_seed, key.problem_id, key.method, key.size_class, key.replicate);
  const auto start = std::chrono::steady_clock::now();
  try {
    const GPModel model = fit_gp(design.points, y, gp);
    const Eigen::VectorXd pred = predict(model, problem.holdout_points);
    if (!pred.allFinite()) throw FitError("non-finite GP predictions");
    rec.rmse = rmse(problem.holdout_values, pred);
    rec.ame = ame(problem.holdout_values, pred);
    rec.status = Status::Ok;
    if (config.debug_models) out.model = model_summary(model);
  } catch (const FitError& e) {
    rec.rmse = rec.ame = std::numeric_limits<double>::quiet_NaN();
    rec.status = Status::FitFailed;
    if (config.debug_models) out.model = {{"error", e.what()}};
  }
  if (config.record_wall_time)
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

nlohmann::json config_object(const StudyConfig& config) {
  nlohmann::json obj = nlohmann::json::object();
  std::istringstream in(canonical_config(config));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq != std::string::npos) obj[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return obj;
}

nlohmann::json build_manifest(const StudyConfig& config, const std::vector<Problem>& problems,
                              std::size_t records, std::size_t failed, bool complete) {
  return {{"version", kVersion},
          {"config_hash", config_hash(config)},
          {"config", config_object(config)},
          {"replicates", config.replicates},
          {"registry", registry_manifest(problems)},
          {"records", records},
          {"fit_failed", failed},
          {"complete", complete},
          {"metrics_per_record", {"rmse", "ame"}},
          {"failure_policy", "fit_failed cells are excluded from profiles and counted in diagnostics"}};
}

void write_text_atomically(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StudyError("cannot write " + tmp.string());
    out << text;
    if (!out) throw StudyError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct WorkItem {
  const Problem* problem;
  Method method;
  SizeClass size;
  std::vector<std::uint32_t> replicates;
};

ResultsStore run_impl(const StudyConfig& config, std::vector<EvaluationRecord> existing, const ProgressFn& progress) {
  validate(config);
  const fs::path dir = config.output_dir;
  if (dir.empty()) throw StudyError("no output directory given");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw StudyError("cannot create output directory " + dir.string());

  const std::vector<Problem> problems = build_registry(config.registry, config.master_seed);

  // Keep only stored cells that belong to this study.
  std::set<CellKey> wanted;
  for (const auto& p : problems)
    for (Method m : config.methods)
      for (int mult : config.multipliers)
        for (int r = 0; r < config.replicates; ++r)
          wanted.insert(CellKey{p.id, m, SizeClass{mult}, static_cast<std::uint32_t>(r)});
  std::erase_if(existing, [&](const EvaluationRecord& r) { return !wanted.contains(r.key); });
  std::set<CellKey> done;
  for (const auto& r : existing) done.insert(r.key);

  std::vector<WorkItem> work;
  std::size_t total = 0;
  for (const auto& p : problems) {
    for (Method m : config.methods) {
      for (int mult : config.multipliers) {
        WorkItem item{&p, m, SizeClass{mult}, {}};
        for (int r = 0; r < config.replicates; ++r)
          if (!done.contains(CellKey{p.id, m, item.size, static_cast<std::uint32_t>(r)}))
            item.replicates.push_back(static_cast<std::uint32_t>(r));
        total += item.replicates.size();
        if (!item.replicates.empty()) work.push_back(std::move(item));
      }
    }
  }

  write_text_atomically(dir / kManifestFile,
                        build_manifest(config, problems, existing.size(), 0, false).dump(2) + "\n");
  std::ofstream journal(dir / kResultsFile, std::ios::binary | std::ios::trunc);
  if (!journal) throw StudyError("cannot write " + (dir / kResultsFile).string());
  write_records_csv(existing, journal);
  journal.flush();

  std::mutex mu;
  std::vector<EvaluationRecord> fresh;
  std::vector<std::pair<CellKey, nlohmann::json>> models;
  std::exception_ptr fatal;
  std::atomic<std::size_t> next{0};
  std::size_t completed = 0;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const WorkItem& item = work[i];
      try {
        const int n = item.size.resolve(item.problem->dimension);
        const std::uint64_t seed = derive_design_seed(config.master_seed, item.problem->id, item.method, item.size);
        const Design base = generate_design(item.method, n, item.problem->dimension, seed, config.maximin_budget);
        for (std::uint32_t rep : item.replicates) {
          CellOutput cell =
              cell_from_base(config, *item.problem, CellKey{item.problem->id, item.method, item.size, rep}, base);
          std::lock_guard lock(mu);
          write_records_csv({cell.record}, journal, false);
          fresh.push_back(cell.record);
          if (config.debug_models) models.emplace_back(cell.record.key, std::move(cell.model));
          ++completed;
          if (progress) progress(completed, total);
        }
        std::lock_guard lock(mu);
        journal.flush();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!fatal) fatal = std::current_exception();
        next = work.size();
        return;
      }
    }
  };

  const int width = std::max(1, std::min<int>(config.parallelism, static_cast<int>(work.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 1; t < width; ++t) pool.emplace_back(worker);
    worker();
  }
  journal.close();
  if (fatal) std::rethrow_exception(fatal);

  ResultsStore store;
  store.records = std::move(existing);
  store.records.insert(store.records.end(), fresh.begin(), fresh.end());
  std::sort(store.records.begin(), store.records.end(),
            [](const EvaluationRecord& a, const EvaluationRecord& b) { return a.key < b.key; });
  store.manifest = build_manifest(config, problems, store.records.size(), store.failed(), true);

  std::ostringstream csv;
  write_records_csv(store.records, csv);
  write_text_atomically(dir / kResultsFile, csv.str());
  write_text_atomically(dir / kManifestFile, store.manifest.dump(2) + "\n");
  if (config.debug_models) {
    std::sort(models.begin(), models.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    for (const auto& [key, model] : models) {
      nlohmann::json line = {{"problem_id", key.problem_id},
                             {"method", method_label(key.method)},
                             {"size_class", key.size_class.label()},
                             {"replicate", key.replicate},
                             {"model", model}};
      os << line.dump() << '\n';
    }
    write_text_atomically(dir / kModelsFile, os.str());
  }
  return store;
}

}  // namespace

std::size_t ResultsStore::failed() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(),
                                                [](const auto& r) { return r.status == Status::FitFailed; }));
}

std::uint64_t derive_cell_seed(std::uint64_t master_seed, std::string_view problem_id, Method method,
                               SizeClass size_class, std::uint32_t replicate) {
  return Hasher()
      .add(master_seed)
      .add(problem_id)
      .add(method_label(method))
      .add(static_cast<std::uint64_t>(size_class.multiplier))
      .add(std::uint64_t{replicate})
      .add("cell")
      .digest();
}

std::uint64_t derive_design_seed(std::uint64_t master_seed, std::string_view problem_id, Method method,
                                 SizeClass size_class) {
  return Hasher()
      .add(master_seed)
      .add(problem_id)
      .add(method_label(method))
      .add(static_cast<std::uint64_t>(size_class.multiplier))
      .add("design")
      .digest();
}

EvaluationRecord compute_cell(const StudyConfig& config, const Problem& problem, const CellKey& key) {
  const int n = key.size_class.resolve(problem.dimension);
  const std::uint64_t seed = derive_design_seed(config.master_seed, key.problem_id, key.method, key.size_class);
  const Design base = generate_design(key.method, n, problem.dimension, seed, config.maximin_budget);
  return cell_from_base(config, problem, key, base).record;
}

ResultsStore run_study(const StudyConfig& config, const ProgressFn& progress) {
  return run_impl(config, {}, progress);
}

ResultsStore resume(const fs::path& store_dir, const StudyConfig& config, const ProgressFn& progress) {
  std::ifstream in(store_dir / kManifestFile);
  if (!in) throw StudyError("no manifest in " + store_dir.string() + "; nothing to resume");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw StudyError(std::string("unreadable manifest: ") + e.what());
  }
  if (manifest.value("config_hash", "") != config_hash(config)) {
    const nlohmann::json stored = manifest.value("config", nlohmann::json::object());
    const nlohmann::json current = config_object(config);
    std::string diff;
    for (const auto& [key, value] : current.items()) {
      const std::string old = stored.contains(key) ? stored[key].get<std::string>() : std::string("<unset>");
      if (old != value.get<std::string>()) diff += "\n  " + key + ": stored '" + old + "', requested '" + value.get<std::string>() + "'";
    }
    throw ConfigError("config hash mismatch; refusing to resume. Differences:" + (diff.empty() ? std::string(" (unknown)") : diff));
  }

  StudyConfig cfg = config;
  cfg.output_dir = store_dir;
  std::vector<EvaluationRecord> existing;
  if (fs::exists(store_dir / kResultsFile)) existing = load_records(store_dir / kResultsFile);
  return run_impl(cfg, std::move(existing), progress);
}

std::vector<EvaluationRecord> load_records(const fs::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw StudyError("cannot read store " + csv_path.string());
  return read_records_csv(in);
}

}  // namespace simbench
