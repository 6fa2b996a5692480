#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simbench/design.hpp"
#include "simbench/testbed.hpp"

namespace simbench {

enum class Metric : std::uint8_t { Rmse, Ame };
enum class Status : std::uint8_t { Ok, FitFailed };
enum class Scheme : std::uint8_t { Log10TrivialRatio, RelativeToBest };

std::string_view metric_name(Metric m);  // "rmse" / "ame"
Metric parse_metric(std::string_view name);
std::string_view status_name(Status s);  // "ok" / "fit_failed"
Status parse_status(std::string_view name);
std::string_view scheme_name(Scheme s);  // "log10_trivial_ratio" / "relative_to_best"

/// Identifies one cell of the factorial study. Ordering is the canonical store
/// order: problem id (lexicographic), method, size multiplier, replicate.
struct CellKey {
  std::string problem_id;
  Method method = Method::M1_LHS;
  SizeClass size_class;
  std::uint32_t replicate = 0;

  auto operator<=>(const CellKey&) const = default;
};

struct EvaluationRecord {
  CellKey key;
  double rmse = 0.0;
  double ame = 0.0;
  double rmse_trivial = 0.0;
  double ame_trivial = 0.0;
  std::optional<double> wall_time;  // seconds
  Status status = Status::Ok;

  double value(Metric m) const { return m == Metric::Rmse ? rmse : ame; }
  double trivial(Metric m) const { return m == Metric::Rmse ? rmse_trivial : ame_trivial; }
};

struct StandardizedScore {
  double value = 0.0;
  Scheme scheme = Scheme::Log10TrivialRatio;
  Metric metric = Metric::Rmse;
  CellKey key;
};

class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// sqrt(mean squared error). Throws std::invalid_argument on empty or mismatched input.
double rmse(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred);
/// max_i |truth_i - pred_i|.
double ame(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred);

inline constexpr double kZeroClamp = 1e-300;

/// log10(max(metric, 1e-300) / trivial). Throws DegenerateError if trivial <= 0.
double standardize_trivial(double metric_value, double trivial_value);

struct BestRelative {
  std::vector<double> values;  // (f - f*) / f*, aligned with the input group
  bool degenerate = false;     // f* == 0; values left empty
};
/// Relative-to-best error within one group of competing methods.
BestRelative standardize_best(const std::vector<double>& group);

struct StandardizeDiagnostics {
  std::size_t failed_cells = 0;
  std::size_t degenerate_cells = 0;   // trivial value <= 0
  std::size_t degenerate_groups = 0;  // best value == 0
};

/// Scores for every usable record. Failed fits and degenerate cells/groups are
/// excluded and counted in diagnostics. RelativeToBest groups records by
/// (problem, size class, replicate).
std::vector<StandardizedScore> standardize_records(const std::vector<EvaluationRecord>& records, Scheme scheme,
                                                   Metric metric, StandardizeDiagnostics* diagnostics = nullptr);

struct GroupKey {
  std::string problem_id;
  SizeClass size_class;
  std::uint32_t replicate = 0;
  auto operator<=>(const GroupKey&) const = default;
};

/// Per group, each method's raw metric value (+inf for failed fits).
/// Groups without any successful fit are dropped.
std::map<GroupKey, std::map<Method, double>> group_by_replicate(const std::vector<EvaluationRecord>& records,
                                                                 Metric metric);

/// Fraction of non-degenerate groups in which each method attains the best
/// value. Ties count as a win for every tied method.
std::map<Method, double> best_win_fractions(const std::vector<EvaluationRecord>& records, Metric metric);

/// Store CSV: header problem_id,method,size_class,replicate,metric,value,trivial_value,status,wall_time
/// and one row per (cell, metric), rmse before ame. header = false appends rows only.
void write_records_csv(const std::vector<EvaluationRecord>& records, std::ostream& out, bool header = true);
/// Reads the store CSV. A truncated trailing line and cells missing one of their
/// metric rows are skipped (an interrupted run). Other malformed rows throw.
std::vector<EvaluationRecord> read_records_csv(std::istream& in);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

}  // namespace simbench
