#include "simbench/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace simbench {

namespace {

constexpr std::string_view kHeader =
    "problem_id,method,size_class,replicate,metric,value,trivial_value,status,wall_time";

void check_pair(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
  if (truth.size() == 0) throw std::invalid_argument("error metric: empty input");
  if (truth.size() != pred.size()) throw std::invalid_argument("error metric: length mismatch");
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw std::invalid_argument("bad number in store: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::string_view metric_name(Metric m) { return m == Metric::Rmse ? "rmse" : "ame"; }

Metric parse_metric(std::string_view name) {
  if (name == "rmse") return Metric::Rmse;
  if (name == "ame") return Metric::Ame;
  throw std::invalid_argument("unknown metric: '" + std::string(name) + "'");
}

std::string_view status_name(Status s) { return s == Status::Ok ? "ok" : "fit_failed"; }

Status parse_status(std::string_view name) {
  if (name == "ok") return Status::Ok;
  if (name == "fit_failed") return Status::FitFailed;
  throw std::invalid_argument("unknown status: '" + std::string(name) + "'");
}

std::string_view scheme_name(Scheme s) {
  return s == Scheme::Log10TrivialRatio ? "log10_trivial_ratio" : "relative_to_best";
}

double rmse(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
  check_pair(truth, pred);
  return std::sqrt((truth - pred).squaredNorm() / static_cast<double>(truth.size()));
}

double ame(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
  check_pair(truth, pred);
  return (truth - pred).cwiseAbs().maxCoeff();
}

double standardize_trivial(double metric_value, double trivial_value) {
  if (!(trivial_value > 0.0)) throw DegenerateError("trivial predictor error is zero: ratio undefined");
  if (metric_value < 0.0) throw std::invalid_argument("standardize_trivial: negative metric value");
  return std::log10(std::max(metric_value, kZeroClamp) / trivial_value);
}

BestRelative standardize_best(const std::vector<double>& group) {
  if (group.empty()) throw std::invalid_argument("standardize_best: empty group");
  BestRelative out;
  const double best = *std::min_element(group.begin(), group.end());
  if (best < 0.0) throw std::invalid_argument("standardize_best: negative metric value");
  if (best == 0.0) {
    out.degenerate = true;
    return out;
  }
  out.values.reserve(group.size());
  for (double f : group) out.values.push_back(f == best ? 0.0 : (f - best) / best);
  return out;
}

std::map<GroupKey, std::map<Method, double>> group_by_replicate(const std::vector<EvaluationRecord>& records,
                                                                 Metric metric) {
  std::map<GroupKey, std::map<Method, double>> groups;
  for (const auto& r : records) {
    const double v = r.status == Status::Ok ? r.value(metric) : std::numeric_limits<double>::infinity();
    groups[GroupKey{r.key.problem_id, r.key.size_class, r.key.replicate}][r.key.method] = v;
  }
  std::erase_if(groups, [](const auto& kv) {
    return std::none_of(kv.second.begin(), kv.second.end(), [](const auto& mv) { return std::isfinite(mv.second); });
  });
  return groups;
}

std::vector<StandardizedScore> standardize_records(const std::vector<EvaluationRecord>& records, Scheme scheme,
                                                   Metric metric, StandardizeDiagnostics* diagnostics) {
  StandardizeDiagnostics diag;
  std::vector<StandardizedScore> out;
  for (const auto& r : records)
    if (r.status != Status::Ok) ++diag.failed_cells;

  if (scheme == Scheme::Log10TrivialRatio) {
    for (const auto& r : records) {
      if (r.status != Status::Ok) continue;
      if (!(r.trivial(metric) > 0.0)) {
        ++diag.degenerate_cells;
        continue;
      }
      out.push_back({standardize_trivial(r.value(metric), r.trivial(metric)), scheme, metric, r.key});
    }
  } else {
    for (const auto& [gk, methods] : group_by_replicate(records, metric)) {
      std::vector<Method> ms;
      std::vector<double> vs;
      for (const auto& [m, v] : methods) {
        if (!std::isfinite(v)) continue;
        ms.push_back(m);
        vs.push_back(v);
      }
      const BestRelative rel = standardize_best(vs);
      if (rel.degenerate) {
        ++diag.degenerate_groups;
        continue;
      }
      for (std::size_t i = 0; i < ms.size(); ++i)
        out.push_back({rel.values[i], scheme, metric, CellKey{gk.problem_id, ms[i], gk.size_class, gk.replicate}});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  }
  if (diagnostics) *diagnostics = diag;
  return out;
}

std::map<Method, double> best_win_fractions(const std::vector<EvaluationRecord>& records, Metric metric) {
  std::map<Method, double> wins;
  for (const auto& r : records) wins.emplace(r.key.method, 0.0);
  std::size_t groups = 0;
  for (const auto& [gk, methods] : group_by_replicate(records, metric)) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [m, v] : methods) best = std::min(best, v);
    if (best == 0.0) continue;
    ++groups;
    for (const auto& [m, v] : methods)
      if (v == best) wins[m] += 1.0;
  }
  for (auto& [m, w] : wins) w = groups ? w / static_cast<double>(groups) : 0.0;
  return wins;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_records_csv(const std::vector<EvaluationRecord>& records, std::ostream& out, bool header) {
  if (header) out << kHeader << '\n';
  for (const auto& r : records) {
    for (Metric m : {Metric::Rmse, Metric::Ame}) {
      out << r.key.problem_id << ',' << method_label(r.key.method) << ',' << r.key.size_class.label() << ','
          << r.key.replicate << ',' << metric_name(m) << ',' << format_double(r.value(m)) << ','
          << format_double(r.trivial(m)) << ',' << status_name(r.status) << ','
          << (r.wall_time ? format_double(*r.wall_time) : std::string()) << '\n';
    }
  }
}

std::vector<EvaluationRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  if (line != kHeader) throw std::invalid_argument("store CSV: unexpected header '" + line + "'");

  struct Partial {
    EvaluationRecord record;
    bool has_rmse = false;
    bool has_ame = false;
  };
  std::map<CellKey, Partial> cells;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    // Rows are newline-terminated; a final line without one was cut mid-write.
    if (in.eof()) break;
    const auto f = split(line, ',');
    if (f.size() != 9) throw std::invalid_argument("store CSV: expected 9 fields in '" + line + "'");
    CellKey key{std::string(f[0]), parse_method(f[1]), SizeClass::parse(f[2]), 0};
    std::uint32_t rep = 0;
    auto [ptr, ec] = std::from_chars(f[3].data(), f[3].data() + f[3].size(), rep);
    if (ec != std::errc{} || ptr != f[3].data() + f[3].size())
      throw std::invalid_argument("store CSV: bad replicate '" + std::string(f[3]) + "'");
    key.replicate = rep;
    const Metric metric = parse_metric(f[4]);
    const double value = parse_double(f[5]);
    const double trivial = parse_double(f[6]);
    const Status status = parse_status(f[7]);

    auto& cell = cells[key];
    cell.record.key = key;
    cell.record.status = status;
    if (!f[8].empty()) cell.record.wall_time = parse_double(f[8]);
    if (metric == Metric::Rmse) {
      cell.record.rmse = value;
      cell.record.rmse_trivial = trivial;
      cell.has_rmse = true;
    } else {
      cell.record.ame = value;
      cell.record.ame_trivial = trivial;
      cell.has_ame = true;
    }
  }
  std::vector<EvaluationRecord> out;
  for (auto& [key, cell] : cells)
    if (cell.has_rmse && cell.has_ame) out.push_back(std::move(cell.record));
  return out;
}

}  // namespace simbench
