#pragma once

#include <Eigen/Dense>
#include <vector>

#include "inar/estimate.hpp"

namespace inar {

enum class ScanKind { ArgmaxSum, ArgminSum, ArgmaxAbsSum };

// Change-point estimate from a residual partial-sum scan. tau is the first
// index k in 1..n at which the scanned functional of S_k = sum_{j<=k} w_j M_j
// attains its extremum (ties resolve to the smallest index).
struct ChangePointEstimate {
  int tau = 0;
  double extremum = 0.0;
  Eigen::VectorXd partial_sums;  // S_1..S_n
};

ChangePointEstimate changepoint_scan(const Eigen::VectorXd& residuals,
                                     const Eigen::VectorXd& weights,
                                     ScanKind kind);

// Scan weights: lag 0 gives all-ones (intercept change); lag q > 0 gives the
// lagged counts X_{k-q}, which target a change in the lag-q coefficient.
Eigen::VectorXd scan_weights(const ObservationSeries& series, int weight_lag);

// Probability limit of the full-sample CLS estimator under a single change:
// with Qmix = rho C_pre + (1-rho) C_post,
//   theta_limit = Qmix^{-1} (rho C_pre theta_pre + (1-rho) C_post theta_post).
Eigen::VectorXd theta_tilde(double rho, const Eigen::MatrixXd& c_pre,
                            const Eigen::MatrixXd& c_post,
                            const Eigen::VectorXd& theta_pre,
                            const Eigen::VectorXd& theta_post);

// Linear growth rate of the peak residual partial sum under a mean change:
//   psi = rho (1-rho) (mu_pre - mu_post) e^T C_post Qmix^{-1} C_pre e,
// where e selects the intercept coordinate. Positive when mu decreases.
// Both factor orderings around Qmix^{-1} are evaluated; they agree as an
// algebraic identity, so disagreement beyond 1e-10 aborts the computation.
double psi_mu(double rho, const Eigen::MatrixXd& c_pre,
              const Eigen::MatrixXd& c_post, double mu_pre, double mu_post);

// Same rate for a change in one thinning coefficient, scanning with lag-q
// weights: e becomes the coordinate of that lag (0-based position `coord` in
// the moment matrix), and the mean difference becomes a_pre - a_post.
double psi_alpha(double rho, const Eigen::MatrixXd& c_pre,
                 const Eigen::MatrixXd& c_post, int coord, double a_pre,
                 double a_post);

}  // namespace inar
