#include "inar/estimate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace inar {

namespace {

void check_support(const ObservationSeries& series,
                   const std::vector<int>& lag_support) {
  if (lag_support.empty())
    throw std::invalid_argument("lag support must not be empty");
  if (!std::is_sorted(lag_support.begin(), lag_support.end()) ||
      std::adjacent_find(lag_support.begin(), lag_support.end()) !=
          lag_support.end())
    throw std::invalid_argument("lag support must be strictly increasing");
  if (lag_support.front() < 1)
    throw std::invalid_argument("lags start at 1");
  if (lag_support.back() > series.max_initial_lag())
    throw std::invalid_argument(
        "largest support lag exceeds the starting window (" +
        std::to_string(series.max_initial_lag()) + " values)");
  if (series.n() < 1) throw std::invalid_argument("empty observation segment");
}

}  // namespace

Eigen::MatrixXd regressor_matrix(const ObservationSeries& series,
                                 const std::vector<int>& lag_support) {
  check_support(series, lag_support);
  const int n = series.n();
  const int d = (int)lag_support.size();
  Eigen::MatrixXd r(n, d + 1);
  for (int k = 1; k <= n; ++k) {
    for (int i = 0; i < d; ++i)
      r(k - 1, i) = (double)series.lagged(k, lag_support[(std::size_t)i]);
    r(k - 1, d) = 1.0;
  }
  return r;
}

EstimationResult cls_estimate(const ObservationSeries& series,
                              const std::vector<int>& lag_support,
                              const ClsOptions& opts) {
  const Eigen::MatrixXd reg = regressor_matrix(series, lag_support);
  const int n = series.n();
  const int d = (int)lag_support.size();

  Eigen::VectorXd y(n);
  for (int k = 0; k < n; ++k) y(k) = (double)series.values[(std::size_t)k];

  // Count data keeps these sums integral, so double accumulation is exact
  // until ~2^53; no scaling tricks needed.
  const Eigen::MatrixXd q = reg.transpose() * reg;
  const Eigen::VectorXd rhs = reg.transpose() * y;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
  const Eigen::VectorXd ev = es.eigenvalues();  // ascending
  const double lo = ev(0), hi = ev(d);
  const double condition =
      (lo > 0.0 && hi > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition < opts.condition_cap)) {
    std::ostringstream os;
    os << "design matrix is numerically singular (condition " << condition
       << ", cap " << opts.condition_cap
       << "); constant or too-short series?";
    throw SingularDesign(os.str(), condition);
  }

  EstimationResult out;
  out.lag_support = lag_support;
  out.q_matrix = q;
  out.q_condition = condition;
  out.theta = es.eigenvectors() *
              (es.eigenvectors().transpose() * rhs).cwiseQuotient(ev);
  out.residuals = y - reg * out.theta;

  double alpha_sum = 0.0;
  for (int i = 0; i < d; ++i) alpha_sum += out.theta(i);
  out.alpha_sum_warning = !(alpha_sum < 1.0);

  out.sigma2 = sigma2_estimate(series, lag_support, out.theta, out.residuals);
  out.sigma2_negative = out.sigma2 < 0.0;
  out.information = information_matrix(series, lag_support, out.theta, out.sigma2);
  return out;
}

Eigen::VectorXd residuals(const ObservationSeries& series,
                          const std::vector<int>& lag_support,
                          const Eigen::VectorXd& theta) {
  const Eigen::MatrixXd reg = regressor_matrix(series, lag_support);
  if (theta.size() != reg.cols())
    throw std::invalid_argument("theta dimension must be |support| + 1");
  Eigen::VectorXd y(series.n());
  for (int k = 0; k < series.n(); ++k) y(k) = (double)series.values[(std::size_t)k];
  return y - reg * theta;
}

double sigma2_estimate(const ObservationSeries& series,
                       const std::vector<int>& lag_support,
                       const Eigen::VectorXd& theta,
                       const Eigen::VectorXd& resid) {
  check_support(series, lag_support);
  const int n = series.n();
  const int d = (int)lag_support.size();
  if (theta.size() != d + 1)
    throw std::invalid_argument("theta dimension must be |support| + 1");
  if (resid.size() != n)
    throw std::invalid_argument("one residual per observation required");
  double acc = 0.0;
  for (int k = 1; k <= n; ++k) {
    double thin = 0.0;
    for (int i = 0; i < d; ++i) {
      const double a = theta(i);
      thin += a * (1.0 - a) * (double)series.lagged(k, lag_support[(std::size_t)i]);
    }
    acc += resid(k - 1) * resid(k - 1) - thin;
  }
  return acc / (double)n;
}

Eigen::MatrixXd information_matrix(const ObservationSeries& series,
                                   const std::vector<int>& lag_support,
                                   const Eigen::VectorXd& theta, double sigma2) {
  const Eigen::MatrixXd reg = regressor_matrix(series, lag_support);
  const int n = series.n();
  const int d = (int)lag_support.size();
  if (theta.size() != d + 1)
    throw std::invalid_argument("theta dimension must be |support| + 1");
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(d + 1, d + 1);
  for (int k = 0; k < n; ++k) {
    double w = sigma2;
    for (int i = 0; i < d; ++i) w += theta(i) * (1.0 - theta(i)) * reg(k, i);
    info.noalias() += w * reg.row(k).transpose() * reg.row(k);
  }
  return info;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& m,
                             double eigenvalue_ratio_tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("square matrix required");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw std::invalid_argument("symmetric matrix required");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  const Eigen::VectorXd ev = es.eigenvalues();
  const double lo = ev(0), hi = ev(ev.size() - 1);
  const double ratio = (hi > 0.0) ? lo / hi : -1.0;
  if (!(ratio > eigenvalue_ratio_tol)) {
    std::ostringstream os;
    os << "matrix is not positive definite (eigenvalue ratio " << ratio
       << ", tolerance " << eigenvalue_ratio_tol << ")";
    throw NotPositiveDefinite(os.str(), ratio);
  }
  return es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

}  // namespace inar
