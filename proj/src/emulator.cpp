#include "simbench/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "simbench/rng.hpp"

namespace simbench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd correlation(const Eigen::MatrixXd& points, const Eigen::VectorXd& lengths) {
  const Eigen::Index n = points.rows();
  const Eigen::VectorXd inv = lengths.cwiseInverse();
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double s = ((points.row(i) - points.row(j)).transpose().cwiseProduct(inv)).squaredNorm();
      r(i, j) = r(j, i) = std::exp(-s);
    }
  }
  return r;
}

struct Profile {
  Eigen::LLT<Eigen::MatrixXd> llt;
  Eigen::MatrixXd kernel;
  double mean = 0.0;
  double variance = 0.0;
  Eigen::VectorXd alpha;
  double nll = kInf;
};

// Profiles out the mean and process variance. nll stays +inf on failure.
Profile profile(const Eigen::VectorXd& lengths, const Eigen::MatrixXd& points,
                const Eigen::VectorXd& values, double nugget) {
  Profile p;
  const Eigen::Index n = points.rows();
  if ((lengths.array() <= 0.0).any() || !lengths.allFinite()) return p;
  p.kernel = correlation(points, lengths);
  Eigen::MatrixXd r = p.kernel;
  r.diagonal().array() += nugget;
  p.llt.compute(r);
  if (p.llt.info() != Eigen::Success) return p;
  const Eigen::MatrixXd& lower = p.llt.matrixLLT();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(lower(i, i) > 0.0)) return p;
    logdet += 2.0 * std::log(lower(i, i));
  }
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd rinv_one = p.llt.solve(ones);
  const Eigen::VectorXd rinv_y = p.llt.solve(values);
  const double denom = ones.dot(rinv_one);
  if (!(denom > 0.0)) return p;
  p.mean = ones.dot(rinv_y) / denom;
  p.alpha = rinv_y - p.mean * rinv_one;
  const Eigen::VectorXd resid = values - p.mean * ones;
  p.variance = std::max(resid.dot(p.alpha) / static_cast<double>(n), std::numeric_limits<double>::min());
  const double nd = static_cast<double>(n);
  p.nll = 0.5 * nd * std::log(p.variance) + 0.5 * logdet +
          0.5 * nd * (1.0 + std::log(2.0 * std::numbers::pi));
  if (!std::isfinite(p.nll)) p.nll = kInf;
  return p;
}

// Weights that solve R w = y - mean without the nugget, by conjugate gradients
// preconditioned with the nugget factor. Keeps the iterate with the smallest residual.
Eigen::VectorXd interpolating_weights(const Profile& p, const Eigen::VectorXd& resid) {
  const Eigen::Index n = resid.size();
  const double tol = 1e-13 * std::max(resid.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  Eigen::VectorXd w = p.alpha;
  Eigen::VectorXd r = resid - p.kernel * w;
  Eigen::VectorXd best = w;
  double best_norm = r.cwiseAbs().maxCoeff();
  Eigen::VectorXd z = p.llt.solve(r);
  Eigen::VectorXd dir = z;
  double rz = r.dot(z);
  for (Eigen::Index k = 0; k < 2 * n && best_norm > tol; ++k) {
    const Eigen::VectorXd kd = p.kernel * dir;
    const double curv = dir.dot(kd);
    if (!(curv > 0.0) || !(rz > 0.0)) break;
    const double step = rz / curv;
    w += step * dir;
    r -= step * kd;
    const double norm = r.cwiseAbs().maxCoeff();
    if (!std::isfinite(norm)) break;
    if (norm < best_norm) best_norm = norm, best = w;
    z = p.llt.solve(r);
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;
  }
  return best;
}

// Nelder-Mead on a box; trial points are clamped into the box before evaluation.
struct SearchResult {
  Eigen::VectorXd x;
  double f = kInf;
};

SearchResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                         const Eigen::VectorXd& start, double lo, double hi, int budget) {
  const Eigen::Index d = start.size();
  int evals = 0;
  auto eval = [&](Eigen::VectorXd& x) {
    x = x.cwiseMax(lo).cwiseMin(hi);
    ++evals;
    return objective(x);
  };

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> f;
  simplex.push_back(start);
  f.push_back(eval(simplex.back()));
  const double step = 0.1 * (hi - lo);
  for (Eigen::Index k = 0; k < d; ++k) {
    Eigen::VectorXd v = start;
    v(k) += (v(k) + step <= hi) ? step : -step;
    simplex.push_back(v);
    f.push_back(eval(simplex.back()));
  }

  std::vector<std::size_t> order(simplex.size());
  while (evals < budget) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    const double spread = f[worst] - f[best];
    double size = 0.0;
    for (const auto& v : simplex) size = std::max(size, (v - simplex[best]).lpNorm<Eigen::Infinity>());
    if (std::isfinite(spread) && spread <= 1e-10 * (1.0 + std::abs(f[best])) && size <= 1e-6) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(d);

    Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double fr = eval(reflected);
    if (fr < f[best]) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = eval(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        f[worst] = fe;
      } else {
        simplex[worst] = reflected;
        f[worst] = fr;
      }
      continue;
    }
    if (fr < f[second]) {
      simplex[worst] = reflected;
      f[worst] = fr;
      continue;
    }
    const bool outside = fr < f[worst];
    Eigen::VectorXd contracted = outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                                         : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = eval(contracted);
    if (fc < (outside ? fr : f[worst])) {
      simplex[worst] = contracted;
      f[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      f[i] = eval(simplex[i]);
    }
  }
  const auto it = std::min_element(f.begin(), f.end());
  return {simplex[static_cast<std::size_t>(it - f.begin())], *it};
}

// Lexicographic row order so the fit is a function of the point set only.
std::vector<Eigen::Index> canonical_order(const Eigen::MatrixXd& points, const Eigen::VectorXd& values) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index j = 0; j < points.cols(); ++j)
      if (points(a, j) != points(b, j)) return points(a, j) < points(b, j);
    return values(a) < values(b);
  });
  return order;
}

}  // namespace

double neg_log_likelihood(const Eigen::VectorXd& corr_lengths, const Eigen::MatrixXd& points,
                          const Eigen::VectorXd& values, double nugget) {
  return profile(corr_lengths, points, values, nugget).nll;
}

LikelihoodWithGradient neg_log_likelihood_gradient(const Eigen::VectorXd& corr_lengths,
                                                   const Eigen::MatrixXd& points,
                                                   const Eigen::VectorXd& values, double nugget) {
  const Profile p = profile(corr_lengths, points, values, nugget);
  LikelihoodWithGradient out;
  out.value = p.nll;
  out.gradient = Eigen::VectorXd::Constant(corr_lengths.size(), std::numeric_limits<double>::quiet_NaN());
  if (!std::isfinite(p.nll)) return out;

  const Eigen::Index n = points.rows();
  const Eigen::MatrixXd rinv = p.llt.solve(Eigen::MatrixXd::Identity(n, n));
  for (Eigen::Index k = 0; k < corr_lengths.size(); ++k) {
    const double l = corr_lengths(k);
    double trace = 0.0;
    double quad = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        const double h = points(i, k) - points(j, k);
        const double dr = p.kernel(i, j) * 2.0 * h * h / (l * l * l);
        trace += rinv(i, j) * dr;
        quad += p.alpha(i) * dr * p.alpha(j);
      }
    }
    out.gradient(k) = 0.5 * trace - quad / (2.0 * p.variance);
  }
  return out;
}

std::vector<Eigen::VectorXd> gp_start_points(const GPSettings& settings, int dimension) {
  Rng rng(Hasher().add(settings.seed).add("gp-starts").digest());
  const double lo = std::log(settings.min_length);
  const double hi = std::log(settings.max_length);
  std::vector<Eigen::VectorXd> starts;
  for (int s = 0; s < settings.starts; ++s) {
    Eigen::VectorXd v(dimension);
    for (int k = 0; k < dimension; ++k) v(k) = std::exp(rng.uniform(lo, hi));
    starts.push_back(std::move(v));
  }
  return starts;
}

GPModel fit_gp(const Eigen::MatrixXd& points, const Eigen::VectorXd& values, const GPSettings& settings) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (n < 2) throw std::invalid_argument("fit_gp: need at least 2 training points");
  if (d < 1) throw std::invalid_argument("fit_gp: points have no columns");
  if (values.size() != n) throw std::invalid_argument("fit_gp: points/values length mismatch");
  if (!values.allFinite() || !points.allFinite()) throw std::invalid_argument("fit_gp: non-finite training data");
  if (settings.starts < 1 || !(settings.min_length > 0.0) || !(settings.max_length > settings.min_length))
    throw std::invalid_argument("fit_gp: invalid settings");

  GPModel model;
  const auto order = canonical_order(points, values);
  model.train_points.resize(n, d);
  model.train_values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    model.train_points.row(i) = points.row(order[static_cast<std::size_t>(i)]);
    model.train_values(i) = values(order[static_cast<std::size_t>(i)]);
  }
  const Eigen::MatrixXd& x = model.train_points;
  const Eigen::VectorXd& y = model.train_values;

  const double lo = std::log(settings.min_length);
  const double hi = std::log(settings.max_length);
  const auto starts = gp_start_points(settings, static_cast<int>(d));
  const bool flat = y.maxCoeff() == y.minCoeff();

  for (double nugget = settings.nugget; nugget <= settings.max_nugget * (1.0 + 1e-9);
       nugget *= settings.nugget_growth) {
    SearchResult best;
    if (flat) {
      best.x = Eigen::VectorXd::Constant(d, 0.5 * (lo + hi));
      best.f = neg_log_likelihood(best.x.array().exp().matrix(), x, y, nugget);
    } else {
      const auto objective = [&](const Eigen::VectorXd& log_lengths) {
        return neg_log_likelihood(log_lengths.array().exp().matrix(), x, y, nugget);
      };
      for (const auto& start : starts) {
        SearchResult r = nelder_mead(objective, start.array().log().matrix(), lo, hi, settings.evals_per_start);
        if (r.f < best.f) best = std::move(r);
      }
    }
    if (!std::isfinite(best.f) && !flat) continue;

    const Eigen::VectorXd lengths = best.x.array().exp().matrix();
    Profile p = profile(lengths, x, y, nugget);
    if (flat && p.llt.info() == Eigen::Success) {
      p.mean = y(0);
      p.alpha = Eigen::VectorXd::Zero(n);
    } else if (!std::isfinite(p.nll)) {
      continue;
    } else {
      p.alpha = interpolating_weights(p, y - Eigen::VectorXd::Constant(n, p.mean));
    }
    model.corr_lengths = lengths;
    model.nugget = nugget;
    model.mean = p.mean;
    model.process_variance = p.variance;
    model.factor = p.llt.matrixL();
    model.weights = p.alpha;
    model.log_likelihood = -p.nll;
    return model;
  }
  throw FitError("fit_gp: correlation matrix not positive definite up to nugget " +
                 std::to_string(settings.max_nugget));
}

Eigen::VectorXd predict(const GPModel& model, const Eigen::MatrixXd& points) {
  if (points.cols() != model.train_points.cols())
    throw std::invalid_argument("predict: dimension mismatch");
  const Eigen::VectorXd inv = model.corr_lengths.cwiseInverse();
  Eigen::VectorXd out(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < model.train_points.rows(); ++j) {
      const double s = ((points.row(i) - model.train_points.row(j)).transpose().cwiseProduct(inv)).squaredNorm();
      acc += std::exp(-s) * model.weights(j);
    }
    out(i) = model.mean + acc;
  }
  return out;
}

TrivialModel fit_trivial(const Eigen::VectorXd& values) {
  if (values.size() == 0) throw std::invalid_argument("fit_trivial: empty values");
  return TrivialModel{values.mean()};
}

Eigen::VectorXd predict(const TrivialModel& model, const Eigen::MatrixXd& points) {
  return Eigen::VectorXd::Constant(points.rows(), model.mean);
}

nlohmann::json model_summary(const GPModel& model) {
  return {{"corr_lengths", std::vector<double>(model.corr_lengths.data(),
                                               model.corr_lengths.data() + model.corr_lengths.size())},
          {"nugget", model.nugget},
          {"mean", model.mean},
          {"process_variance", model.process_variance},
          {"log_likelihood", model.log_likelihood},
          {"n", model.train_points.rows()}};
}

}  // namespace simbench
