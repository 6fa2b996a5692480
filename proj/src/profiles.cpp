#include "simbench/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

#include "simbench/errors.hpp"

namespace simbench {

namespace {

ProfileCurve grid_curve(Method method, ProfileKind kind, std::span<const double> grid,
                        std::vector<std::size_t> counts, std::size_t denominator) {
  ProfileCurve c;
  c.method = method;
  c.kind = kind;
  c.xs.assign(grid.begin(), grid.end());
  c.counts = std::move(counts);
  c.n_points = denominator;
  for (std::size_t k : c.counts) c.ps.push_back(denominator ? static_cast<double>(k) / static_cast<double>(denominator) : 0.0);
  return c;
}

void check_grid(std::span<const double> grid, const char* what) {
  if (grid.empty()) throw std::invalid_argument(std::string(what) + ": empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw std::invalid_argument(std::string(what) + ": grid must be strictly increasing");
}

}  // namespace

std::string_view profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::Ecdf:
      return "ecdf";
    case ProfileKind::PerformanceProfile:
      return "performance_profile";
    case ProfileKind::DataProfile:
      return "data_profile";
  }
  return "";
}

std::size_t ProfileCurve::count_at(double x) const {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0;
  return counts[static_cast<std::size_t>(it - xs.begin()) - 1];
}

double ProfileCurve::value_at(double x) const {
  return n_points ? static_cast<double>(count_at(x)) / static_cast<double>(n_points) : 0.0;
}

ProfileCurve ecdf(std::span<const double> scores, Method method) {
  if (scores.empty()) throw std::invalid_argument("ecdf: no scores");
  std::vector<double> sorted(scores.begin(), scores.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw std::invalid_argument("ecdf: non-finite score");
  std::sort(sorted.begin(), sorted.end());

  ProfileCurve c;
  c.method = method;
  c.kind = ProfileKind::Ecdf;
  c.n_points = sorted.size();
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    c.xs.push_back(sorted[i]);
    c.counts.push_back(i + 1);
    c.ps.push_back(static_cast<double>(i + 1) / static_cast<double>(sorted.size()));
  }
  return c;
}

std::vector<Panel> collapse(const std::vector<StandardizedScore>& scores, const CollapseSpec& spec,
                            std::span<const Method> methods) {
  if (scores.empty()) return {};
  const Scheme scheme = scores.front().scheme;
  for (const auto& s : scores)
    if (s.scheme != scheme) throw ContractError("collapse: scores mix standardization schemes");

  using PanelKey = std::tuple<std::string, int, int>;
  std::map<PanelKey, std::map<Method, std::vector<double>>> pooled;
  for (const auto& s : scores) {
    if (spec.problem && s.key.problem_id != *spec.problem) continue;
    if (spec.size_class && s.key.size_class != *spec.size_class) continue;
    if (spec.metric && s.metric != *spec.metric) continue;
    PanelKey key{spec.pool_problems ? std::string() : s.key.problem_id,
                 spec.pool_sizes ? 0 : s.key.size_class.multiplier,
                 spec.pool_metrics ? -1 : static_cast<int>(s.metric)};
    pooled[key][s.key.method].push_back(s.value);
  }

  std::vector<Panel> panels;
  for (const auto& [key, by_method] : pooled) {
    Panel p;
    p.scheme = scheme;
    if (!spec.pool_problems) p.problem_id = std::get<0>(key);
    if (!spec.pool_sizes) p.size_class = SizeClass{std::get<1>(key)};
    if (!spec.pool_metrics) p.metric = static_cast<Metric>(std::get<2>(key));
    for (Method m : methods) {
      const auto it = by_method.find(m);
      if (it == by_method.end()) {
        p.warnings.push_back(std::string(method_label(m)) + " has no scores in this panel; omitted");
        continue;
      }
      p.curves.push_back(ecdf(it->second, m));
      p.pooled += it->second.size();
    }
    panels.push_back(std::move(p));
  }
  return panels;
}

std::vector<ProfileCurve> performance_profile(const std::map<GroupKey, std::map<Method, double>>& groups,
                                              std::span<const double> tau_grid) {
  check_grid(tau_grid, "performance_profile");
  std::set<Method> methods;
  for (const auto& [gk, values] : groups) {
    for (const auto& [m, v] : values) {
      if (!(v > 0.0)) throw std::invalid_argument("performance_profile: values must be positive");
      methods.insert(m);
    }
  }

  std::map<Method, std::vector<double>> ratios;
  for (const auto& [gk, values] : groups) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [m, v] : values) best = std::min(best, v);
    for (Method m : methods) {
      const auto it = values.find(m);
      double r = std::numeric_limits<double>::infinity();
      if (it != values.end() && std::isfinite(it->second) && std::isfinite(best)) {
        // Only exact ties with the best get ratio 1.
        r = it->second == best ? 1.0 : std::max(it->second / best, std::nextafter(1.0, 2.0));
      }
      ratios[m].push_back(r);
    }
  }

  std::vector<ProfileCurve> curves;
  for (Method m : methods) {
    std::vector<double> rs = ratios[m];
    std::sort(rs.begin(), rs.end());
    std::vector<std::size_t> counts;
    for (double tau : tau_grid)
      counts.push_back(static_cast<std::size_t>(std::upper_bound(rs.begin(), rs.end(), tau) - rs.begin()));
    curves.push_back(grid_curve(m, ProfileKind::PerformanceProfile, tau_grid, std::move(counts), groups.size()));
  }
  return curves;
}

std::vector<ProfileCurve> data_profile(const std::vector<BudgetScore>& scores, std::span<const double> budget_grid,
                                       double threshold) {
  check_grid(budget_grid, "data_profile");
  using Pair = std::pair<std::string, std::uint32_t>;
  std::set<Pair> pairs;
  std::set<Method> methods;
  // Smallest budget at which each (method, pair) is solved.
  std::map<Method, std::map<Pair, double>> solved_at;
  for (const auto& s : scores) {
    const Pair pr{s.problem_id, s.replicate};
    pairs.insert(pr);
    methods.insert(s.method);
    if (!(s.score <= threshold)) continue;
    auto& slot = solved_at[s.method];
    const auto it = slot.find(pr);
    if (it == slot.end() || s.budget < it->second) slot[pr] = s.budget;
  }

  std::vector<ProfileCurve> curves;
  for (Method m : methods) {
    std::vector<double> first;
    for (const auto& [pr, b] : solved_at[m]) first.push_back(b);
    std::sort(first.begin(), first.end());
    std::vector<std::size_t> counts;
    for (double b : budget_grid)
      counts.push_back(static_cast<std::size_t>(std::upper_bound(first.begin(), first.end(), b) - first.begin()));
    curves.push_back(grid_curve(m, ProfileKind::DataProfile, budget_grid, std::move(counts), pairs.size()));
  }
  return curves;
}

std::vector<BudgetScore> budget_scores(const std::vector<StandardizedScore>& scores) {
  std::vector<BudgetScore> out;
  out.reserve(scores.size());
  for (const auto& s : scores)
    out.push_back({s.key.problem_id, s.key.replicate, s.key.method,
                   static_cast<double>(s.key.size_class.multiplier), s.value});
  return out;
}

double quantile_type7(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Boundaries size_boundaries(const std::vector<StandardizedScore>& scores) {
  std::map<SizeClass, std::vector<double>> by_size;
  for (const auto& s : scores) by_size[s.key.size_class].push_back(s.value);
  Boundaries out;
  if (by_size.size() < 2) return out;

  struct Band {
    SizeClass size;
    double median, low, high;
  };
  std::vector<Band> bands;
  for (auto& [size, values] : by_size) {
    std::sort(values.begin(), values.end());
    bands.push_back({size, quantile_type7(values, 0.5), quantile_type7(values, 0.025), quantile_type7(values, 0.975)});
  }
  std::stable_sort(bands.begin(), bands.end(), [](const Band& a, const Band& b) { return a.median < b.median; });
  for (const auto& b : bands) out.order.push_back(b.size);
  for (std::size_t i = 0; i + 1 < bands.size(); ++i) {
    const Band& better = bands[i];
    const Band& worse = bands[i + 1];
    out.values.push_back(0.5 * (better.high + worse.low));
    if (better.high > worse.low) {
      out.overlap = true;
      out.warnings.push_back("size classes " + better.size.label() + " and " + worse.size.label() +
                             " overlap; boundary is approximate");
    }
  }
  return out;
}

void write_curves_csv(const std::vector<ProfileCurve>& curves, std::ostream& out) {
  out << "method,kind,x,p\n";
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.xs.size(); ++i)
      out << method_label(c.method) << ',' << profile_kind_name(c.kind) << ',' << format_double(c.xs[i]) << ','
          << format_double(c.ps[i]) << '\n';
}

nlohmann::json panel_bundle(const Panel& panel, const Boundaries* boundaries) {
  nlohmann::json j;
  j["scheme"] = scheme_name(panel.scheme);
  j["problem"] = panel.problem_id ? nlohmann::json(*panel.problem_id) : nlohmann::json("pooled");
  j["size_class"] = panel.size_class ? nlohmann::json(panel.size_class->label()) : nlohmann::json("pooled");
  j["metric"] = panel.metric ? nlohmann::json(metric_name(*panel.metric)) : nlohmann::json("pooled");
  j["pooled_scores"] = panel.pooled;
  j["warnings"] = panel.warnings;
  nlohmann::json curves = nlohmann::json::array();
  for (const auto& c : panel.curves)
    curves.push_back({{"method", method_label(c.method)},
                      {"kind", profile_kind_name(c.kind)},
                      {"n_points", c.n_points},
                      {"x", c.xs},
                      {"p", c.ps}});
  j["curves"] = std::move(curves);
  if (boundaries) {
    j["boundaries"] = {{"values", boundaries->values},
                       {"rule", "midpoint of 97.5th percentile (better class) and 2.5th percentile (worse class)"},
                       {"approximate", true},
                       {"overlap", boundaries->overlap}};
  }
  return j;
}

}  // namespace simbench
