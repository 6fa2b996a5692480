#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "simbench/metrics.hpp"
#include "simbench/profiles.hpp"

namespace simbench {

struct MethodStyle {
  std::string_view color;
  std::string_view dash;  // empty for solid
};

/// Fixed method -> style map shared by every figure.
MethodStyle method_style(Method m);

struct PlotSpec {
  std::string title;    // document title; empty for none
  std::string x_label;  // empty: derived from the panel's scheme and metric
  std::string y_label;  // empty: derived from the plot kind
  int columns = 3;      // panels per row
  bool boundaries = true;
};

struct EcdfPanelInput {
  Panel panel;
  std::vector<double> boundaries;  // vertical guide lines; drawn when spec.boundaries
};

/// One step path per curve, legend in M1..M7 order. Throws ContractError when
/// panels mix standardization schemes or curve kinds, std::invalid_argument
/// when there is nothing to draw.
std::string render_ecdf_panels(const std::vector<EcdfPanelInput>& panels, const PlotSpec& spec);

struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_low = 0.0;   // smallest value >= q1 - 1.5 IQR
  double whisker_high = 0.0;  // largest value <= q3 + 1.5 IQR
  std::vector<double> outliers;
};
/// Type-7 quartiles. Throws std::invalid_argument on an empty sample.
BoxStats box_stats(std::vector<double> values);

struct BoxGroup {
  Method method = Method::M1_LHS;
  std::vector<double> values;
};
struct BoxPanel {
  std::string title;
  std::vector<BoxGroup> groups;
};

/// One box per group, each panel on its own y-scale. Empty groups are skipped
/// and reported through warnings when given.
std::string render_boxplot_panels(const std::vector<BoxPanel>& panels, const PlotSpec& spec,
                                  std::vector<std::string>* warnings = nullptr);

struct SummaryRow {
  Method method = Method::M1_LHS;
  std::size_t cells = 0;   // scored cells
  std::size_t failed = 0;  // fit_failed cells
  double median = 0.0;
  double mean = 0.0;
  double win_fraction = 0.0;   // best value in its (problem, size, replicate) group
  double poor_fit_fraction = 0.0;  // trivial ratio above 0.5
};

struct Summary {
  Scheme scheme = Scheme::Log10TrivialRatio;
  Metric metric = Metric::Rmse;
  std::vector<SummaryRow> rows;
  std::size_t groups = 0;  // groups used for win fractions
  StandardizeDiagnostics diagnostics;
};

inline constexpr double kPoorFitRatio = 0.5;

/// Throws std::invalid_argument on an empty record set.
Summary summarize(const std::vector<EvaluationRecord>& records, Scheme scheme, Metric metric);
void write_summary_csv(const Summary& summary, std::ostream& out);
void write_summary_text(const Summary& summary, std::ostream& out);

}  // namespace simbench
