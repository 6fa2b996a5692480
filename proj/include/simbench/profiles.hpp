#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "simbench/metrics.hpp"

namespace simbench {

enum class ProfileKind : std::uint8_t { Ecdf, PerformanceProfile, DataProfile };
std::string_view profile_kind_name(ProfileKind k);

/// Right-continuous step function: value(x) = counts[i] / n_points for the
/// last xs[i] <= x, and 0 left of xs[0].
struct ProfileCurve {
  Method method = Method::M1_LHS;
  ProfileKind kind = ProfileKind::Ecdf;
  std::vector<double> xs;            // strictly increasing
  std::vector<std::size_t> counts;   // non-decreasing, <= n_points
  std::vector<double> ps;            // counts / n_points
  std::size_t n_points = 0;

  std::size_t count_at(double x) const;
  double value_at(double x) const;
};

/// Throws std::invalid_argument on empty or non-finite input.
ProfileCurve ecdf(std::span<const double> scores, Method method = Method::M1_LHS);

/// Which dimensions are pooled into one ECDF; the rest split panels. The
/// optional filters restrict the input before pooling.
struct CollapseSpec {
  bool pool_problems = false;
  bool pool_sizes = false;
  bool pool_metrics = false;
  std::optional<std::string> problem;
  std::optional<SizeClass> size_class;
  std::optional<Metric> metric;
};

struct Panel {
  // Fixed coordinates; empty when pooled.
  std::optional<std::string> problem_id;
  std::optional<SizeClass> size_class;
  std::optional<Metric> metric;
  Scheme scheme = Scheme::Log10TrivialRatio;
  std::vector<ProfileCurve> curves;  // method order M1..M7
  std::vector<std::string> warnings;
  std::size_t pooled = 0;  // number of scores in the panel
};

/// Throws ContractError when scores mix standardization schemes.
std::vector<Panel> collapse(const std::vector<StandardizedScore>& scores, const CollapseSpec& spec,
                            std::span<const Method> methods = kAllMethods);

/// Moré-Wild ratios r = value / best per group; failed methods carry +inf and
/// are never counted. A method absent from a group counts as failed.
/// Throws std::invalid_argument on non-positive values or an empty grid.
std::vector<ProfileCurve> performance_profile(const std::map<GroupKey, std::map<Method, double>>& groups,
                                              std::span<const double> tau_grid);

/// One accuracy score at one budget level for a (problem, replicate) pair.
struct BudgetScore {
  std::string problem_id;
  std::uint32_t replicate = 0;
  Method method = Method::M1_LHS;
  double budget = 0.0;
  double score = 0.0;
};

/// Default solve threshold on the log10 trivial-ratio scale: one decimal digit
/// of accuracy over the mean predictor.
inline constexpr double kDefaultSolveThreshold = -1.0;

/// curve(b) = fraction of (problem, replicate) pairs with some score at a
/// budget <= b that is <= threshold. Throws std::invalid_argument on an empty grid.
std::vector<ProfileCurve> data_profile(const std::vector<BudgetScore>& scores, std::span<const double> budget_grid,
                                       double threshold = kDefaultSolveThreshold);

/// Uses the size multiplier as the budget axis.
std::vector<BudgetScore> budget_scores(const std::vector<StandardizedScore>& scores);

struct Boundaries {
  std::vector<double> values;
  std::vector<SizeClass> order;  // size classes from best to worst median score
  bool overlap = false;
  std::vector<std::string> warnings;
};

/// Vertical guide lines between size-class clusters: for classes ordered by
/// median score, the midpoint of the better class's 97.5th percentile and the
/// worse class's 2.5th percentile. Fewer than two classes gives no lines.
Boundaries size_boundaries(const std::vector<StandardizedScore>& scores);

/// Linear interpolation between order statistics (R type 7). sorted must be
/// non-empty and ascending.
double quantile_type7(std::span<const double> sorted, double p);

void write_curves_csv(const std::vector<ProfileCurve>& curves, std::ostream& out);
nlohmann::json panel_bundle(const Panel& panel, const Boundaries* boundaries = nullptr);

}  // namespace simbench
