#pragma once

#include <Eigen/Dense>
#include <vector>

#include "inar/errors.hpp"
#include "inar/model.hpp"

namespace inar {

struct ClsOptions {
  // Q_n with eigenvalue ratio above this is treated as singular.
  double condition_cap = 1e12;
};

// Conditional least squares fit of a count autoregression on a lag support.
// theta stacks the thinning coefficients (support order) with the intercept
// (innovation mean) last. Diagnostic flags are warnings, not errors: an
// explosive fit or a negative variance estimate still produces a fit, and
// downstream consumers decide what is usable.
struct EstimationResult {
  std::vector<int> lag_support;
  Eigen::VectorXd theta;         // size d+1, d = |support|
  Eigen::VectorXd residuals;     // size n
  Eigen::MatrixXd q_matrix;      // sum of regressor outer products
  double q_condition = 0.0;
  double sigma2 = 0.0;
  Eigen::MatrixXd information;   // weighted regressor outer products
  bool alpha_sum_warning = false;   // fitted coefficients sum to >= 1
  bool sigma2_negative = false;     // variance estimate came out below zero

  int n() const { return (int)residuals.size(); }
  int dimension() const { return (int)theta.size(); }
  double mu_hat() const { return theta(theta.size() - 1); }
};

// Regressor row for observation k: lagged counts on the support, then 1.
Eigen::MatrixXd regressor_matrix(const ObservationSeries& series,
                                 const std::vector<int>& lag_support);

// Solves the normal equations Q theta = sum X_k r_k. Throws SingularDesign
// when cond(Q_n) exceeds opts.condition_cap (constant series, support lag
// beyond the initial segment, n < d+1, ...).
EstimationResult cls_estimate(const ObservationSeries& series,
                              const std::vector<int>& lag_support,
                              const ClsOptions& opts = {});

// One-step-ahead residuals X_k - theta . (lags; 1) for a given theta.
Eigen::VectorXd residuals(const ObservationSeries& series,
                          const std::vector<int>& lag_support,
                          const Eigen::VectorXd& theta);

// Innovation variance estimate: mean over k of
//   resid_k^2 - sum_i a_i (1 - a_i) X_{k-i}.
// The subtraction removes the thinning part of the conditional variance;
// the sign convention is fixed by E[M_k^2 | past] = thinning term + sigma2.
double sigma2_estimate(const ObservationSeries& series,
                       const std::vector<int>& lag_support,
                       const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& resid);

// Estimated conditional-variance-weighted design:
//   sum_k (sum_i a_i(1-a_i) X_{k-i} + sigma2) r_k r_k^T.
Eigen::MatrixXd information_matrix(const ObservationSeries& series,
                                   const std::vector<int>& lag_support,
                                   const Eigen::VectorXd& theta, double sigma2);

// Symmetric inverse square root via eigendecomposition. Throws
// NotPositiveDefinite when min/max eigenvalue falls below eigenvalue_ratio_tol
// (or the matrix is not symmetric to within a scaled tolerance).
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& m,
                             double eigenvalue_ratio_tol = 1e-10);

}  // namespace inar
