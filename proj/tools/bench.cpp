// bench: run the design-comparison study and turn its store into ECDF figures.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simbench/config.hpp"
#include "simbench/errors.hpp"
#include "simbench/metrics.hpp"
#include "simbench/profiles.hpp"
#include "simbench/report.hpp"
#include "simbench/runner.hpp"

namespace {

using namespace simbench;

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitFitFailed = 2;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Scheme scheme_from(const std::string& s) { return s == "best" ? Scheme::RelativeToBest : Scheme::Log10TrivialRatio; }

bool matches(const StandardizedScore& s, const Panel& p) {
  return (!p.problem_id || s.key.problem_id == *p.problem_id) && (!p.size_class || s.key.size_class == *p.size_class) &&
         (!p.metric || s.metric == *p.metric);
}

struct RunArgs {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> parallel;
  bool resume = false;
};

int cmd_run(const RunArgs& a) {
  StudyConfig config = a.config.empty() ? StudyConfig{} : load_config(a.config);
  if (a.seed) config.master_seed = *a.seed;
  if (a.parallel) config.parallelism = *a.parallel;
  config.output_dir = a.out;

  std::size_t last_pct = 101;
  auto progress = [&](std::size_t done, std::size_t total) {
    const std::size_t pct = total ? done * 100 / total : 100;
    if (pct != last_pct && pct % 5 == 0) {
      std::cerr << "\r" << done << "/" << total << " cells (" << pct << "%)" << std::flush;
      last_pct = pct;
    }
  };
  const ResultsStore store = a.resume ? resume(a.out, config, progress) : run_study(config, progress);
  std::cerr << "\n";
  std::cout << "wrote " << store.records.size() << " cells (" << store.records.size() * 2 << " rows) to " << a.out
            << "/results.csv; fit_failed: " << store.failed() << "\n";
  return store.failed() ? kExitFitFailed : kExitOk;
}

struct ProfileArgs {
  std::string store;
  std::string scheme = "trivial";
  std::string metric = "rmse";
  std::string collapse = "none";
  std::string kind = "ecdf";
  bool boundaries = false;
  std::optional<std::string> problem;
  std::optional<std::string> size;
  double threshold = kDefaultSolveThreshold;
  std::string out;
  std::string bundle;
  std::string curves_csv;
};

int cmd_profile(const ProfileArgs& a) {
  const auto records = load_records(a.store);
  if (records.empty()) throw std::runtime_error("store " + a.store + " has no records");
  const Metric metric = parse_metric(a.metric);
  const Scheme scheme = scheme_from(a.scheme);

  std::vector<ProfileCurve> all_curves;
  std::vector<EcdfPanelInput> inputs;
  PlotSpec spec;
  spec.boundaries = a.boundaries;

  if (a.kind == "ecdf") {
    StandardizeDiagnostics diag;
    const auto scores = standardize_records(records, scheme, metric, &diag);
    CollapseSpec cs;
    cs.metric = metric;
    cs.problem = a.problem;
    if (a.size) cs.size_class = SizeClass::parse(*a.size);
    cs.pool_sizes = a.collapse == "sizes" || a.collapse == "all";
    cs.pool_problems = a.collapse == "all";
    for (auto& panel : collapse(scores, cs)) {
      for (const auto& w : panel.warnings) std::cerr << "warning: " << w << "\n";
      EcdfPanelInput in;
      if (a.boundaries && cs.pool_sizes) {
        std::vector<StandardizedScore> subset;
        for (const auto& s : scores)
          if (matches(s, panel)) subset.push_back(s);
        const Boundaries b = size_boundaries(subset);
        for (const auto& w : b.warnings) std::cerr << "warning: " << w << "\n";
        in.boundaries = b.values;
      }
      all_curves.insert(all_curves.end(), panel.curves.begin(), panel.curves.end());
      in.panel = std::move(panel);
      inputs.push_back(std::move(in));
    }
    if (diag.failed_cells || diag.degenerate_cells || diag.degenerate_groups)
      std::cerr << "excluded: " << diag.failed_cells << " fit_failed, " << diag.degenerate_cells
                << " degenerate cells, " << diag.degenerate_groups << " degenerate groups\n";
  } else if (a.kind == "performance") {
    auto groups = group_by_replicate(records, metric);
    std::erase_if(groups, [&](const auto& kv) {
      if (a.problem && kv.first.problem_id != *a.problem) return true;
      if (a.size && kv.first.size_class != SizeClass::parse(*a.size)) return true;
      for (const auto& [m, v] : kv.second)
        if (v == 0.0) return true;
      return false;
    });
    std::set<double> taus{1.0};
    for (const auto& [gk, values] : groups) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& [m, v] : values) best = std::min(best, v);
      for (const auto& [m, v] : values)
        if (std::isfinite(v)) taus.insert(v / best);
    }
    const std::vector<double> grid(taus.begin(), taus.end());
    Panel p;
    p.problem_id = a.problem;
    if (a.size) p.size_class = SizeClass::parse(*a.size);
    p.metric = metric;
    p.curves = performance_profile(groups, grid);
    all_curves = p.curves;
    inputs.push_back({std::move(p), {}});
  } else if (a.kind == "data") {
    auto scores = standardize_records(records, Scheme::Log10TrivialRatio, metric);
    std::erase_if(scores, [&](const auto& s) { return a.problem && s.key.problem_id != *a.problem; });
    std::set<double> budgets;
    for (const auto& s : scores) budgets.insert(s.key.size_class.multiplier);
    const std::vector<double> grid(budgets.begin(), budgets.end());
    Panel p;
    p.problem_id = a.problem;
    p.metric = metric;
    p.curves = data_profile(budget_scores(scores), grid, a.threshold);
    all_curves = p.curves;
    inputs.push_back({std::move(p), {}});
  } else {
    throw std::invalid_argument("unknown --kind " + a.kind);
  }

  if (inputs.empty()) throw std::runtime_error("no scores match the requested filters");
  write_file(a.out, render_ecdf_panels(inputs, spec));
  if (!a.curves_csv.empty()) {
    std::ofstream csv(a.curves_csv);
    write_curves_csv(all_curves, csv);
  }
  if (!a.bundle.empty()) {
    nlohmann::json bundle = nlohmann::json::array();
    for (const auto& in : inputs) {
      Boundaries b;
      b.values = in.boundaries;
      bundle.push_back(panel_bundle(in.panel, in.boundaries.empty() ? nullptr : &b));
    }
    write_file(a.bundle, bundle.dump(2) + "\n");
  }
  std::cout << "wrote " << a.out << " (" << inputs.size() << " panel" << (inputs.size() == 1 ? "" : "s") << ")\n";
  return kExitOk;
}

int cmd_boxplot(const std::string& store, const std::string& problem, const std::string& metric_name_arg, bool log_ratio,
                const std::string& out) {
  const auto records = load_records(store);
  const Metric metric = parse_metric(metric_name_arg);
  std::map<SizeClass, std::map<Method, std::vector<double>>> by_size;
  for (const auto& r : records) {
    if (r.key.problem_id != problem || r.status != Status::Ok) continue;
    double v = r.value(metric);
    if (log_ratio) {
      if (!(r.trivial(metric) > 0.0)) continue;
      v = standardize_trivial(v, r.trivial(metric));
    }
    by_size[r.key.size_class][r.key.method].push_back(v);
  }
  if (by_size.empty()) throw std::runtime_error("no successful records for problem '" + problem + "'");

  std::vector<BoxPanel> panels;
  for (const auto& [size, methods] : by_size) {
    BoxPanel p;
    p.title = problem + " | n = " + size.label();
    for (const auto& [m, values] : methods) p.groups.push_back({m, values});
    panels.push_back(std::move(p));
  }
  PlotSpec spec;
  spec.y_label = log_ratio ? "log10(" + metric_name_arg + " / trivial)" : metric_name_arg;
  std::vector<std::string> warnings;
  write_file(out, render_boxplot_panels(panels, spec, &warnings));
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "wrote " << out << "\n";
  return kExitOk;
}

int cmd_summary(const std::string& store, const std::string& scheme, const std::string& metric, const std::string& csv) {
  const auto records = load_records(store);
  const Summary s = summarize(records, scheme_from(scheme), parse_metric(metric));
  write_summary_text(s, std::cout);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write " + csv);
    write_summary_csv(s, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark statistical methods over a simulation study and summarize with ECDF profiles"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run (or resume) the factorial design study");
  run_cmd->add_option("--config", run.config, "Flat key = value config file")->check(CLI::ExistingFile);
  run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
  run_cmd->add_option("--out", run.out, "Output directory")->required();
  run_cmd->add_option("--parallel", run.parallel, "Worker threads")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--resume", run.resume, "Complete missing cells of an existing store");

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "Render ECDF / performance / data profiles as SVG");
  prof_cmd->add_option("--store", prof.store, "results.csv")->required()->check(CLI::ExistingFile);
  prof_cmd->add_option("--scheme", prof.scheme, "Standardization")->check(CLI::IsMember({"trivial", "best"}));
  prof_cmd->add_option("--metric", prof.metric, "Accuracy metric")->check(CLI::IsMember({"rmse", "ame"}));
  prof_cmd->add_option("--collapse", prof.collapse, "What to pool into one panel")
      ->check(CLI::IsMember({"none", "sizes", "all"}));
  prof_cmd->add_option("--kind", prof.kind, "Curve type")->check(CLI::IsMember({"ecdf", "performance", "data"}));
  prof_cmd->add_flag("--boundaries", prof.boundaries, "Draw size-class boundary lines");
  prof_cmd->add_option("--problem", prof.problem, "Restrict to one problem id");
  prof_cmd->add_option("--size", prof.size, "Restrict to one size class, e.g. 10d");
  prof_cmd->add_option("--threshold", prof.threshold, "Solve threshold for --kind data (log10 trivial ratio)");
  prof_cmd->add_option("--out", prof.out, "Output SVG")->required();
  prof_cmd->add_option("--bundle", prof.bundle, "Also write the curves and metadata as JSON");
  prof_cmd->add_option("--curves-csv", prof.curves_csv, "Also write the curves as CSV");

  std::string box_store, box_problem, box_out, box_metric = "rmse";
  bool box_log = false;
  auto* box_cmd = app.add_subcommand("boxplot", "Per-size boxplots of one problem's raw errors");
  box_cmd->add_option("--store", box_store, "results.csv")->required()->check(CLI::ExistingFile);
  box_cmd->add_option("--problem", box_problem, "Problem id, e.g. additive-A-2")->required();
  box_cmd->add_option("--metric", box_metric, "Accuracy metric")->check(CLI::IsMember({"rmse", "ame"}));
  box_cmd->add_flag("--log-ratio", box_log, "Plot log10(metric / trivial) instead of raw values");
  box_cmd->add_option("--out", box_out, "Output SVG")->required();

  std::string sum_store, sum_scheme = "trivial", sum_metric = "rmse", sum_csv;
  auto* sum_cmd = app.add_subcommand("summary", "Per-method table: scores, win fractions, poor fits");
  sum_cmd->add_option("--store", sum_store, "results.csv")->required()->check(CLI::ExistingFile);
  sum_cmd->add_option("--scheme", sum_scheme, "Standardization")->check(CLI::IsMember({"trivial", "best"}));
  sum_cmd->add_option("--metric", sum_metric, "Accuracy metric")->check(CLI::IsMember({"rmse", "ame"}));
  sum_cmd->add_option("--csv", sum_csv, "Also write the table as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return cmd_run(run);
    if (*prof_cmd) return cmd_profile(prof);
    if (*box_cmd) return cmd_boxplot(box_store, box_problem, box_metric, box_log, box_out);
    if (*sum_cmd) return cmd_summary(sum_store, sum_scheme, sum_metric, sum_csv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}
