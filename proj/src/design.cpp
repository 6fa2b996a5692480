#include "simbench/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "simbench/rng.hpp"

namespace simbench {

namespace {

constexpr std::array<std::string_view, 7> kLabels = {"M1", "M2", "M3", "M4", "M5", "M6", "M7"};
constexpr std::array<std::string_view, 7> kDescriptions = {
    "random LHS",       "maximin LHS", "zero-correlation LHS", "cosine maximin LHS",
    "cosine zero-correlation LHS", "Sobol sequence", "simple random sample"};

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Terms are summed in sorted order so the result does not depend on column order.
double squared_distance(const Eigen::MatrixXd& x, Eigen::Index a, Eigen::Index b) {
  Eigen::RowVectorXd terms = (x.row(a) - x.row(b)).array().square().matrix();
  std::sort(terms.data(), terms.data() + terms.size());
  double sum = 0.0;
  for (Eigen::Index j = 0; j < terms.size(); ++j) sum += terms(j);
  return sum;
}

double min_of_upper(const Eigen::MatrixXd& dist2) {
  double best = std::numeric_limits<double>::infinity();
  const Eigen::Index n = dist2.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) best = std::min(best, dist2(i, j));
  return best;
}

// 0-based ranks, ties broken by row index.
std::vector<Eigen::Index> column_ranks(const Eigen::VectorXd& column) {
  const auto n = column.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return column(a) < column(b); });
  std::vector<Eigen::Index> rank(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<Eigen::Index>(r);
  return rank;
}

}  // namespace

std::string_view method_label(Method m) { return kLabels.at(static_cast<std::size_t>(m)); }

std::string_view method_description(Method m) {
  return kDescriptions.at(static_cast<std::size_t>(m));
}

Method parse_method(std::string_view label) {
  for (std::size_t i = 0; i < kLabels.size(); ++i)
    if (kLabels[i] == label) return static_cast<Method>(i);
  throw std::invalid_argument("unknown method label: " + std::string(label));
}

Design lhs_random(int n, int d, std::uint64_t seed) {
  require(n >= 1, "lhs_random: n must be >= 1");
  require(d >= 1, "lhs_random: d must be >= 1");
  Rng rng(seed);
  Design out;
  out.points.resize(n, d);
  out.method = Method::M1_LHS;
  out.seed = seed;
  std::vector<int> strata(static_cast<std::size_t>(n));
  for (int j = 0; j < d; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    rng.shuffle(std::span<int>(strata));
    for (int i = 0; i < n; ++i) {
      const int s = strata[static_cast<std::size_t>(i)];
      const double upper = static_cast<double>(s + 1) / n;
      double x = (s + rng.uniform01()) / n;
      if (x >= upper) x = std::nextafter(upper, 0.0);
      out.points(i, j) = x;
    }
  }
  return out;
}

Design lhs_maximin(int n, int d, std::uint64_t seed, int budget) {
  require(n >= 2, "lhs_maximin: n must be >= 2");
  require(budget >= 0, "lhs_maximin: budget must be >= 0");
  Design out = lhs_random(n, d, seed);
  out.method = Method::M2_MaximinLHS;
  if (budget == 0) return out;

  Eigen::MatrixXd& x = out.points;
  Eigen::MatrixXd dist2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) dist2(i, j) = dist2(j, i) = squared_distance(x, i, j);
  double current = min_of_upper(dist2);

  Rng rng(Hasher().add(seed).add("maximin").digest());
  Eigen::VectorXd saved_a(n), saved_b(n);
  for (int it = 0; it < budget; ++it) {
    const auto col = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(d)));
    const auto a = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
    auto b = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n - 1)));
    if (b >= a) ++b;

    std::swap(x(a, col), x(b, col));
    saved_a = dist2.row(a).transpose();
    saved_b = dist2.row(b).transpose();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != a) dist2(a, k) = dist2(k, a) = squared_distance(x, a, k);
      if (k != b) dist2(b, k) = dist2(k, b) = squared_distance(x, b, k);
    }
    const double candidate = min_of_upper(dist2);
    if (candidate >= current) {
      current = candidate;
      continue;
    }
    std::swap(x(a, col), x(b, col));
    for (Eigen::Index k = 0; k < n; ++k) {
      dist2(a, k) = dist2(k, a) = saved_a(k);
      dist2(b, k) = dist2(k, b) = saved_b(k);
    }
  }
  return out;
}

Design decorrelate(const Design& design) {
  const Eigen::Index n = design.size();
  const Eigen::Index d = design.dimension();
  require(n >= 3, "decorrelate: n must be >= 3");
  require(d >= 2, "decorrelate: d must be >= 2");

  // Van der Waerden scores for ranks 1..n.
  const boost::math::normal_distribution<double> normal;
  Eigen::VectorXd scores(n);
  for (Eigen::Index r = 0; r < n; ++r)
    scores(r) = boost::math::quantile(normal, static_cast<double>(r + 1) / static_cast<double>(n + 1));

  std::vector<Eigen::VectorXd> sorted_columns;
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::VectorXd col = design.points.col(j);
    std::sort(col.data(), col.data() + n);
    sorted_columns.push_back(std::move(col));
  }

  Design best = design;
  double best_corr = max_abs_column_correlation(design.points);
  Eigen::MatrixXd current = design.points;
  constexpr int kPasses = 5;
  for (int pass = 0; pass < kPasses; ++pass) {
    Eigen::MatrixXd s(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto rank = column_ranks(current.col(j));
      for (Eigen::Index i = 0; i < n; ++i) s(i, j) = scores(rank[static_cast<std::size_t>(i)]);
    }
    const Eigen::MatrixXd centered = s.rowwise() - s.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    Eigen::LLT<Eigen::MatrixXd> llt(corr);
    if (llt.info() != Eigen::Success) break;
    // Rows of s mapped through L^{-1}: the result has identity sample correlation.
    const Eigen::MatrixXd target =
        llt.matrixL().solve(s.transpose()).transpose();

    Eigen::MatrixXd next(n, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto rank = column_ranks(target.col(j));
      for (Eigen::Index i = 0; i < n; ++i)
        next(i, j) = sorted_columns[static_cast<std::size_t>(j)](rank[static_cast<std::size_t>(i)]);
    }
    const double c = max_abs_column_correlation(next);
    if (c < best_corr) {
      best_corr = c;
      best.points = next;
    }
    if (next == current) break;
    current = std::move(next);
  }
  best.method = Method::M3_ZeroCorrLHS;
  return best;
}

Design lhs_zero_corr(int n, int d, std::uint64_t seed) {
  require(n >= 3, "lhs_zero_corr: n must be >= 3");
  require(d >= 2, "lhs_zero_corr: d must be >= 2");
  return decorrelate(lhs_random(n, d, seed));
}

double cosine_map(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("cosine_transform: coordinate outside [0,1]");
  // (1 - cos(pi x))/2 written as 1/2 + sin(pi (x - 1/2))/2 so 0, 1/2 and 1 map exactly.
  const double y = 0.5 + 0.5 * std::sin(std::numbers::pi * (x - 0.5));
  return std::clamp(y, 0.0, 1.0);
}

Design cosine_transform(const Design& design) {
  Design out = design;
  out.points = design.points.unaryExpr([](double x) { return cosine_map(x); });
  if (design.method == Method::M2_MaximinLHS) out.method = Method::M4_CosMaximin;
  if (design.method == Method::M3_ZeroCorrLHS) out.method = Method::M5_CosZeroCorr;
  return out;
}

Design srs(int n, int d, std::uint64_t seed) {
  require(n >= 1, "srs: n must be >= 1");
  require(d >= 1, "srs: d must be >= 1");
  Rng rng(seed);
  Design out;
  out.points.resize(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) out.points(i, j) = rng.uniform01();
  out.method = Method::M7_SRS;
  out.seed = seed;
  return out;
}

Design permute_columns(const Design& design, std::uint32_t replicate_id, std::uint64_t seed) {
  const Eigen::Index d = design.dimension();
  require(d >= 1, "permute_columns: empty design");
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(d));
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  Rng rng(Hasher().add(seed).add(std::uint64_t{replicate_id}).add("columns").digest());
  rng.shuffle(std::span<Eigen::Index>(perm));

  Design out = design;
  for (Eigen::Index j = 0; j < d; ++j) out.points.col(j) = design.points.col(perm[static_cast<std::size_t>(j)]);
  out.replicate_id = replicate_id;
  return out;
}

Design generate_design(Method method, int n, int d, std::uint64_t seed, int maximin_budget) {
  const bool can_decorrelate = d >= 2 && n >= 3;
  Design out;
  switch (method) {
    case Method::M1_LHS:
      out = lhs_random(n, d, seed);
      break;
    case Method::M2_MaximinLHS:
      out = lhs_maximin(n, d, seed, maximin_budget);
      break;
    case Method::M3_ZeroCorrLHS:
      out = can_decorrelate ? lhs_zero_corr(n, d, seed) : lhs_random(n, d, seed);
      break;
    case Method::M4_CosMaximin:
      out = cosine_transform(lhs_maximin(n, d, seed, maximin_budget));
      break;
    case Method::M5_CosZeroCorr:
      out = cosine_transform(can_decorrelate ? lhs_zero_corr(n, d, seed) : lhs_random(n, d, seed));
      break;
    case Method::M6_Sobol:
      out = sobol(n, d);
      break;
    case Method::M7_SRS:
      out = srs(n, d, seed);
      break;
  }
  out.method = method;
  out.seed = seed;
  return out;
}

double min_pairwise_distance(const Eigen::MatrixXd& points) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < points.rows(); ++i)
    for (Eigen::Index j = i + 1; j < points.rows(); ++j)
      best = std::min(best, squared_distance(points, i, j));
  return std::sqrt(best);
}

double max_abs_column_correlation(const Eigen::MatrixXd& points) {
  const Eigen::MatrixXd centered = points.rowwise() - points.colwise().mean();
  const Eigen::VectorXd norms = centered.colwise().norm().transpose();
  double worst = 0.0;
  for (Eigen::Index a = 0; a < points.cols(); ++a) {
    for (Eigen::Index b = a + 1; b < points.cols(); ++b) {
      if (norms(a) == 0.0 || norms(b) == 0.0) continue;
      const double r = centered.col(a).dot(centered.col(b)) / (norms(a) * norms(b));
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

void write_design_csv(const Design& design, std::ostream& out) {
  for (Eigen::Index j = 0; j < design.dimension(); ++j) out << (j ? "," : "") << 'x' << (j + 1);
  out << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < design.size(); ++i) {
    for (Eigen::Index j = 0; j < design.dimension(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", design.points(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

}  // namespace simbench
