#include "simbench/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>

#include "simbench/errors.hpp"
#include "simbench/svg.hpp"

namespace simbench {

namespace {

constexpr double kPanelW = 380.0;
constexpr double kPanelH = 300.0;
constexpr double kLeft = 58.0;
constexpr double kRight = 14.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 46.0;
constexpr double kTitleH = 30.0;
constexpr double kLegendH = 34.0;

struct Frame {
  double x0, y0;  // panel origin in the document

  double left() const { return x0 + kLeft; }
  double right() const { return x0 + kPanelW - kRight; }
  double top() const { return y0 + kTop; }
  double bottom() const { return y0 + kPanelH - kBottom; }
};

struct Scale {
  double lo, hi, px_lo, px_hi;
  double operator()(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }
};

std::pair<double, double> padded(double lo, double hi, double frac) {
  if (!(hi > lo)) return {lo - 0.5, hi + 0.5};
  const double pad = (hi - lo) * frac;
  return {lo - pad, hi + pad};
}

std::string fmt_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void draw_axes(svg::Document& doc, const Frame& f, const Scale& sx, const Scale& sy, const std::vector<double>& xticks,
               const std::vector<double>& yticks, const std::string& title, const std::string& xlabel,
               const std::string& ylabel) {
  doc.rect(f.left(), f.top(), f.right() - f.left(), f.bottom() - f.top(), "none", "#333333", "frame");
  for (double t : xticks) {
    const double x = sx(t);
    if (x < f.left() - 0.01 || x > f.right() + 0.01) continue;
    doc.line(x, f.bottom(), x, f.bottom() + 4, "#333333");
    doc.text(x, f.bottom() + 16, fmt_tick(t), 10, "middle");
  }
  for (double t : yticks) {
    const double y = sy(t);
    if (y < f.top() - 0.01 || y > f.bottom() + 0.01) continue;
    doc.line(f.left() - 4, y, f.left(), y, "#333333");
    doc.line(f.left(), y, f.right(), y, "#eeeeee");
    doc.text(f.left() - 6, y + 3.5, fmt_tick(t), 10, "end");
  }
  doc.text(0.5 * (f.left() + f.right()), f.y0 + 18, title, 12, "middle");
  doc.text(0.5 * (f.left() + f.right()), f.bottom() + 34, xlabel, 11, "middle");
  doc.text(f.x0 + 14, 0.5 * (f.top() + f.bottom()), ylabel, 11, "middle", -90.0);
}

void draw_legend(svg::Document& doc, const std::set<Method>& methods, double y, double width) {
  const double slot = 52.0;
  double x = std::max(10.0, 0.5 * (width - slot * static_cast<double>(methods.size())));
  doc.begin_group("legend");
  for (Method m : methods) {
    const MethodStyle st = method_style(m);
    doc.line(x, y, x + 22, y, st.color, 2.5, "legend-swatch", st.dash);
    doc.text(x + 27, y + 4, method_label(m), 11);
    x += slot;
  }
  doc.end_group();
}

std::string panel_title(const Panel& p) {
  std::string t = p.problem_id ? *p.problem_id : std::string("all problems");
  t += " | ";
  t += p.size_class ? "n = " + p.size_class->label() : std::string("all sizes");
  t += " | ";
  t += p.metric ? std::string(metric_name(*p.metric)) : std::string("all metrics");
  return t;
}

std::string metric_text(const Panel& p) {
  if (!p.metric) return "error";
  return *p.metric == Metric::Rmse ? "RMSE" : "AME";
}

std::string default_xlabel(const Panel& p, ProfileKind kind) {
  if (kind == ProfileKind::PerformanceProfile) return "performance ratio tau";
  if (kind == ProfileKind::DataProfile) return "budget (size multiplier)";
  const std::string m = metric_text(p);
  if (p.scheme == Scheme::Log10TrivialRatio) return "log10(" + m + " / trivial-predictor " + m + ")";
  return "(" + m + " - best " + m + ") / best " + m;
}

std::string default_ylabel(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::Ecdf:
      return "proportion of cells <= x";
    case ProfileKind::PerformanceProfile:
      return "fraction with ratio <= tau";
    case ProfileKind::DataProfile:
      return "fraction solved";
  }
  return "";
}

std::string step_path(const ProfileCurve& c, const Scale& sx, const Scale& sy) {
  std::string d = "M" + svg::num(sx(sx.lo)) + "," + svg::num(sy(0.0));
  for (std::size_t i = 0; i < c.xs.size(); ++i) d += " H" + svg::num(sx(c.xs[i])) + " V" + svg::num(sy(c.ps[i]));
  d += " H" + svg::num(sx(sx.hi));
  return d;
}

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

MethodStyle method_style(Method m) {
  switch (m) {
    case Method::M1_LHS:
      return {"#1b9e77", ""};
    case Method::M2_MaximinLHS:
      return {"#d95f02", ""};
    case Method::M3_ZeroCorrLHS:
      return {"#7570b3", ""};
    case Method::M4_CosMaximin:
      return {"#e7298a", "6 3"};
    case Method::M5_CosZeroCorr:
      return {"#66a61e", "6 3"};
    case Method::M6_Sobol:
      return {"#a6761d", "2 2"};
    case Method::M7_SRS:
      return {"#444444", "8 3 2 3"};
  }
  return {"#000000", ""};
}

std::string render_ecdf_panels(const std::vector<EcdfPanelInput>& panels, const PlotSpec& spec) {
  if (panels.empty()) throw std::invalid_argument("render_ecdf_panels: no panels");
  const Scheme scheme = panels.front().panel.scheme;
  std::optional<ProfileKind> kind;
  std::set<Method> methods;
  for (const auto& in : panels) {
    if (in.panel.scheme != scheme) throw ContractError("render_ecdf_panels: panels mix standardization schemes");
    for (const auto& c : in.panel.curves) {
      if (kind && c.kind != *kind) throw ContractError("render_ecdf_panels: curves mix profile kinds");
      kind = c.kind;
      methods.insert(c.method);
    }
  }
  if (!kind) throw std::invalid_argument("render_ecdf_panels: no curves to draw");

  const int cols = std::max(1, std::min<int>(spec.columns, static_cast<int>(panels.size())));
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  const double title_h = spec.title.empty() ? 0.0 : kTitleH;
  const double width = cols * kPanelW;
  const double height = title_h + rows * kPanelH + kLegendH;
  svg::Document doc(width, height);
  if (!spec.title.empty()) doc.text(0.5 * width, 20, spec.title, 14, "middle");

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const Panel& p = panels[i].panel;
    const Frame f{static_cast<double>(static_cast<int>(i) % cols) * kPanelW,
                  title_h + static_cast<double>(static_cast<int>(i) / cols) * kPanelH};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& c : p.curves) {
      if (c.xs.empty()) continue;
      lo = std::min(lo, c.xs.front());
      hi = std::max(hi, c.xs.back());
    }
    const bool draw_bounds = spec.boundaries && !panels[i].boundaries.empty();
    if (draw_bounds)
      for (double b : panels[i].boundaries) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
      }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    const auto [xlo, xhi] = padded(lo, hi, 0.04);
    const Scale sx{xlo, xhi, f.left(), f.right()};
    const Scale sy{0.0, 1.0, f.bottom(), f.top()};

    doc.begin_group("panel", panel_title(p));
    draw_axes(doc, f, sx, sy, svg::nice_ticks(xlo, xhi, 5), {0.0, 0.25, 0.5, 0.75, 1.0}, panel_title(p),
              spec.x_label.empty() ? default_xlabel(p, *kind) : spec.x_label,
              spec.y_label.empty() ? default_ylabel(*kind) : spec.y_label);
    if (draw_bounds)
      for (double b : panels[i].boundaries) doc.line(sx(b), f.top(), sx(b), f.bottom(), "#888888", 1.2, "boundary", "4 3");
    for (const auto& c : p.curves) {
      const MethodStyle st = method_style(c.method);
      doc.path(step_path(c, sx, sy), st.color, 1.8, st.dash, "curve", method_label(c.method));
    }
    doc.end_group();
  }
  draw_legend(doc, methods, height - kLegendH * 0.5, width);
  return doc.str();
}

BoxStats box_stats(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("box_stats: empty sample");
  std::sort(values.begin(), values.end());
  BoxStats s;
  s.q1 = quantile_type7(values, 0.25);
  s.median = quantile_type7(values, 0.5);
  s.q3 = quantile_type7(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  s.whisker_low = s.q1;
  s.whisker_high = s.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
      continue;
    }
    s.whisker_low = std::min(s.whisker_low, v);
    s.whisker_high = std::max(s.whisker_high, v);
  }
  return s;
}

std::string render_boxplot_panels(const std::vector<BoxPanel>& panels, const PlotSpec& spec,
                                  std::vector<std::string>* warnings) {
  if (panels.empty()) throw std::invalid_argument("render_boxplot_panels: no panels");
  const int cols = std::max(1, std::min<int>(spec.columns, static_cast<int>(panels.size())));
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  const double title_h = spec.title.empty() ? 0.0 : kTitleH;
  const double width = cols * kPanelW;
  const double height = title_h + rows * kPanelH;
  svg::Document doc(width, height);
  if (!spec.title.empty()) doc.text(0.5 * width, 20, spec.title, 14, "middle");

  for (std::size_t i = 0; i < panels.size(); ++i) {
    const BoxPanel& p = panels[i];
    const Frame f{static_cast<double>(static_cast<int>(i) % cols) * kPanelW,
                  title_h + static_cast<double>(static_cast<int>(i) / cols) * kPanelH};
    std::vector<std::pair<Method, BoxStats>> boxes;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& g : p.groups) {
      if (g.values.empty()) {
        if (warnings) warnings->push_back(p.title + ": " + std::string(method_label(g.method)) + " has no values; omitted");
        continue;
      }
      BoxStats s = box_stats(g.values);
      lo = std::min({lo, s.whisker_low, s.outliers.empty() ? s.whisker_low : s.outliers.front()});
      hi = std::max({hi, s.whisker_high, s.outliers.empty() ? s.whisker_high : s.outliers.back()});
      boxes.emplace_back(g.method, std::move(s));
    }
    if (boxes.empty()) continue;
    const auto [ylo, yhi] = padded(lo, hi, 0.06);
    const Scale sy{ylo, yhi, f.bottom(), f.top()};
    const double slot = (f.right() - f.left()) / static_cast<double>(boxes.size());
    const Scale sx{0.0, 1.0, f.left(), f.right()};

    doc.begin_group("panel", p.title);
    draw_axes(doc, f, sx, sy, {}, svg::nice_ticks(ylo, yhi, 5), p.title, "method",
              spec.y_label.empty() ? std::string("value") : spec.y_label);
    for (std::size_t k = 0; k < boxes.size(); ++k) {
      const auto& [m, s] = boxes[k];
      const MethodStyle st = method_style(m);
      const double cx = f.left() + (static_cast<double>(k) + 0.5) * slot;
      const double half = std::min(16.0, slot * 0.3);
      doc.begin_group("box-group", method_label(m));
      doc.line(cx, sy(s.q3), cx, sy(s.whisker_high), st.color, 1.2, "whisker");
      doc.line(cx, sy(s.q1), cx, sy(s.whisker_low), st.color, 1.2, "whisker");
      doc.line(cx - half * 0.5, sy(s.whisker_high), cx + half * 0.5, sy(s.whisker_high), st.color, 1.2, "whisker-cap");
      doc.line(cx - half * 0.5, sy(s.whisker_low), cx + half * 0.5, sy(s.whisker_low), st.color, 1.2, "whisker-cap");
      doc.rect(cx - half, sy(s.q3), 2 * half, sy(s.q1) - sy(s.q3), "#ffffff", st.color, "box");
      doc.line(cx - half, sy(s.median), cx + half, sy(s.median), st.color, 2.2, "median");
      for (double o : s.outliers) doc.circle(cx, sy(o), 2.2, st.color, "outlier");
      doc.text(cx, f.bottom() + 16, method_label(m), 10, "middle");
      doc.end_group();
    }
    doc.end_group();
  }
  return doc.str();
}

Summary summarize(const std::vector<EvaluationRecord>& records, Scheme scheme, Metric metric) {
  if (records.empty()) throw std::invalid_argument("summarize: empty store");
  Summary out;
  out.scheme = scheme;
  out.metric = metric;
  const auto scores = standardize_records(records, scheme, metric, &out.diagnostics);
  const auto best = standardize_records(records, Scheme::RelativeToBest, metric);

  std::set<GroupKey> groups;
  std::map<Method, std::size_t> wins;
  for (const auto& s : best) {
    groups.insert(GroupKey{s.key.problem_id, s.key.size_class, s.key.replicate});
    if (s.value == 0.0) ++wins[s.key.method];
  }
  out.groups = groups.size();

  std::map<Method, std::vector<double>> by_method;
  for (const auto& s : scores) by_method[s.key.method].push_back(s.value);
  std::map<Method, std::size_t> failed;
  std::map<Method, std::pair<std::size_t, std::size_t>> poor;  // (poor, usable)
  std::set<Method> methods;
  for (const auto& r : records) {
    methods.insert(r.key.method);
    if (r.status != Status::Ok) {
      ++failed[r.key.method];
      continue;
    }
    if (!(r.trivial(metric) > 0.0)) continue;
    auto& [bad, usable] = poor[r.key.method];
    ++usable;
    if (r.value(metric) / r.trivial(metric) > kPoorFitRatio) ++bad;
  }

  for (Method m : methods) {
    SummaryRow row;
    row.method = m;
    auto values = by_method[m];
    row.cells = values.size();
    row.failed = failed[m];
    if (!values.empty()) {
      std::sort(values.begin(), values.end());
      row.median = quantile_type7(values, 0.5);
      row.mean = mean_of(values);
    } else {
      row.median = row.mean = std::numeric_limits<double>::quiet_NaN();
    }
    row.win_fraction = out.groups ? static_cast<double>(wins[m]) / static_cast<double>(out.groups) : 0.0;
    const auto [bad, usable] = poor[m];
    row.poor_fit_fraction = usable ? static_cast<double>(bad) / static_cast<double>(usable) : 0.0;
    out.rows.push_back(row);
  }
  return out;
}

void write_summary_csv(const Summary& s, std::ostream& out) {
  out << "method,scheme,metric,cells,fit_failed,median,mean,win_fraction,poor_fit_fraction\n";
  for (const auto& r : s.rows)
    out << method_label(r.method) << ',' << scheme_name(s.scheme) << ',' << metric_name(s.metric) << ',' << r.cells
        << ',' << r.failed << ',' << format_double(r.median) << ',' << format_double(r.mean) << ','
        << format_double(r.win_fraction) << ',' << format_double(r.poor_fit_fraction) << '\n';
}

void write_summary_text(const Summary& s, std::ostream& out) {
  char line[200];
  out << "Scheme: " << scheme_name(s.scheme) << "   metric: " << metric_name(s.metric) << '\n';
  out << "Wins are counted over " << s.groups
      << " (problem, size, replicate) groups; tied methods each get the win.\n";
  std::snprintf(line, sizeof line, "%-6s %-28s %7s %7s %10s %10s %8s %9s\n", "method", "design", "cells", "failed",
                "median", "mean", "wins", ">0.5 triv");
  out << line;
  for (const auto& r : s.rows) {
    std::snprintf(line, sizeof line, "%-6s %-28s %7zu %7zu %10.4f %10.4f %8.3f %9.3f\n",
                  std::string(method_label(r.method)).c_str(), std::string(method_description(r.method)).c_str(),
                  r.cells, r.failed, r.median, r.mean, r.win_fraction, r.poor_fit_fraction);
    out << line;
  }
  const auto& d = s.diagnostics;
  if (d.failed_cells || d.degenerate_cells || d.degenerate_groups)
    out << "Excluded: " << d.failed_cells << " fit_failed cells, " << d.degenerate_cells
        << " cells with a zero trivial-predictor error, " << d.degenerate_groups << " groups with a zero best value.\n";
}

}  // namespace simbench
