#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace simbench {

/// Kriging with a constant mean and a squared-exponential product kernel,
///   corr(x, x') = exp(-sum_k ((x_k - x'_k) / l_k)^2),
/// hyperparameters by maximum profile likelihood.
struct GPSettings {
  std::uint64_t seed = 0;
  int starts = 8;
  int evals_per_start = 200;  // Nelder-Mead evaluations per start
  double min_length = 0.01;
  double max_length = 10.0;
  double nugget = 1e-8;
  double max_nugget = 1e-4;
  double nugget_growth = 10.0;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GPModel {
  Eigen::MatrixXd train_points;  // stored in canonical (sorted) row order
  Eigen::VectorXd train_values;
  Eigen::VectorXd corr_lengths;
  double process_variance = 0.0;
  double mean = 0.0;
  double nugget = 0.0;
  Eigen::MatrixXd factor;   // lower Cholesky factor of R + nugget I
  Eigen::VectorXd weights;  // R^{-1} (y - mean), refined from the nugget solve
  double log_likelihood = 0.0;
};

struct TrivialModel {
  double mean = 0.0;
};

/// Profiled negative log-likelihood, constants included:
///   n/2 log(sigma^2) + 1/2 log|R| + n/2 (1 + log 2 pi).
/// Returns +infinity when R + nugget I is not numerically SPD.
double neg_log_likelihood(const Eigen::VectorXd& corr_lengths, const Eigen::MatrixXd& points,
                          const Eigen::VectorXd& values, double nugget);

struct LikelihoodWithGradient {
  double value = 0.0;
  Eigen::VectorXd gradient;  // d value / d corr_lengths
};
LikelihoodWithGradient neg_log_likelihood_gradient(const Eigen::VectorXd& corr_lengths,
                                                   const Eigen::MatrixXd& points,
                                                   const Eigen::VectorXd& values, double nugget);

/// The seeded multi-start points (length-scales) fit_gp begins from.
std::vector<Eigen::VectorXd> gp_start_points(const GPSettings& settings, int dimension);

/// Throws std::invalid_argument on bad input and FitError when the nugget
/// ladder is exhausted. The result does not depend on the row order of the
/// training data.
GPModel fit_gp(const Eigen::MatrixXd& points, const Eigen::VectorXd& values,
               const GPSettings& settings);

Eigen::VectorXd predict(const GPModel& model, const Eigen::MatrixXd& points);

TrivialModel fit_trivial(const Eigen::VectorXd& values);
Eigen::VectorXd predict(const TrivialModel& model, const Eigen::MatrixXd& points);

nlohmann::json model_summary(const GPModel& model);

}  // namespace simbench
