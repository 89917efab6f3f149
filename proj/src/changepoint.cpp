#include "inar/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace inar {

ChangePointEstimate changepoint_scan(const Eigen::VectorXd& residuals,
                                     const Eigen::VectorXd& weights,
                                     ScanKind kind) {
  const int n = (int)residuals.size();
  if (n < 1) throw std::invalid_argument("empty residual vector");
  if (weights.size() != n)
    throw std::invalid_argument("one weight per residual required");

  ChangePointEstimate est;
  est.partial_sums.resize(n);
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += weights(k) * residuals(k);
    est.partial_sums(k) = acc;
  }

  // First index attaining the extremum; strict comparison keeps ties at the
  // smallest index.
  int best = 0;
  auto score = [&](int k) {
    const double s = est.partial_sums(k);
    switch (kind) {
      case ScanKind::ArgmaxSum:    return s;
      case ScanKind::ArgminSum:    return -s;
      case ScanKind::ArgmaxAbsSum: return std::fabs(s);
    }
    throw std::logic_error("unreachable scan kind");
  };
  for (int k = 1; k < n; ++k)
    if (score(k) > score(best)) best = k;
  est.tau = best + 1;
  est.extremum = est.partial_sums(best);
  return est;
}

Eigen::VectorXd scan_weights(const ObservationSeries& series, int weight_lag) {
  const int n = series.n();
  if (weight_lag == 0) return Eigen::VectorXd::Ones(n);
  if (weight_lag < 0 || weight_lag > series.max_initial_lag())
    throw std::invalid_argument("weight lag exceeds the starting window");
  Eigen::VectorXd w(n);
  for (int k = 1; k <= n; ++k) w(k - 1) = (double)series.lagged(k, weight_lag);
  return w;
}

namespace {

Eigen::MatrixXd mixed_design(double rho, const Eigen::MatrixXd& c_pre,
                             const Eigen::MatrixXd& c_post) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("change fraction rho must lie strictly in (0,1)");
  if (c_pre.rows() != c_pre.cols() || c_post.rows() != c_post.cols() ||
      c_pre.rows() != c_post.rows())
    throw std::invalid_argument("moment matrices must be square and same size");
  return rho * c_pre + (1.0 - rho) * c_post;
}

// e_coord^T C_post Qmix^{-1} C_pre e_coord, evaluated in both orderings as a
// numerical self-check. The orderings agree identically: with Qmix a mix of
// the two factors, both collapse to (C_pre - rho C_pre Qmix^{-1} C_pre)/(1-rho),
// so disagreement flags a numerically unusable Qmix, not bad inputs.
double sandwich(double rho, const Eigen::MatrixXd& c_pre,
                const Eigen::MatrixXd& c_post, int coord) {
  const Eigen::MatrixXd qmix = mixed_design(rho, c_pre, c_post);
  if (coord < 0 || coord >= (int)c_pre.rows())
    throw std::invalid_argument("coordinate out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(c_pre.rows());
  e(coord) = 1.0;
  const auto lu = qmix.partialPivLu();
  const double a = e.dot(c_post * lu.solve(c_pre * e));
  const double b = e.dot(c_pre * lu.solve(c_post * e));
  const double scale = std::max({std::fabs(a), std::fabs(b), 1.0});
  if (std::fabs(a - b) > 1e-10 * scale)
    throw std::logic_error("moment sandwich orderings disagree; inputs asymmetric?");
  return 0.5 * (a + b);
}

}  // namespace

Eigen::VectorXd theta_tilde(double rho, const Eigen::MatrixXd& c_pre,
                            const Eigen::MatrixXd& c_post,
                            const Eigen::VectorXd& theta_pre,
                            const Eigen::VectorXd& theta_post) {
  const Eigen::MatrixXd qmix = mixed_design(rho, c_pre, c_post);
  if (theta_pre.size() != c_pre.rows() || theta_post.size() != c_pre.rows())
    throw std::invalid_argument("parameter vectors must match the moment matrices");
  return qmix.partialPivLu().solve(rho * (c_pre * theta_pre) +
                                   (1.0 - rho) * (c_post * theta_post));
}

double psi_mu(double rho, const Eigen::MatrixXd& c_pre,
              const Eigen::MatrixXd& c_post, double mu_pre, double mu_post) {
  const int intercept = (int)c_pre.rows() - 1;
  return rho * (1.0 - rho) * (mu_pre - mu_post) *
         sandwich(rho, c_pre, c_post, intercept);
}

double psi_alpha(double rho, const Eigen::MatrixXd& c_pre,
                 const Eigen::MatrixXd& c_post, int coord, double a_pre,
                 double a_post) {
  return rho * (1.0 - rho) * (a_pre - a_post) *
         sandwich(rho, c_pre, c_post, coord);
}

}  // namespace inar
