#include "inar/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace inar {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeriesEps = 1e-14;
constexpr int kSeriesCap = 10000;
constexpr double kBisectTol = 1e-10;

}  // namespace

CusumPath cusum_path(const ObservationSeries& series, const EstimationResult& fit) {
  const Eigen::MatrixXd reg = regressor_matrix(series, fit.lag_support);
  const int n = series.n();
  const int d = (int)fit.theta.size();
  if (fit.residuals.size() != n)
    throw std::invalid_argument("fit does not belong to this series");
  const Eigen::MatrixXd root = inverse_sqrt(fit.information);

  CusumPath path;
  path.values = Eigen::MatrixXd::Zero(n + 1, d);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
  for (int k = 1; k <= n; ++k) {
    acc.noalias() += fit.residuals(k - 1) * reg.row(k - 1).transpose();
    path.values.row(k) = (root * acc).transpose();
  }
  return path;
}

double statistic(const CusumPath& path, int component, TestKind kind) {
  if (component < 1 || component > path.dimension())
    throw std::invalid_argument("component index out of range");
  const auto col = path.values.col(component - 1);
  switch (kind) {
    case TestKind::OneSidedSup: return col.maxCoeff();
    case TestKind::OneSidedInf: return col.minCoeff();
    case TestKind::TwoSided:    return col.cwiseAbs().maxCoeff();
    case TestKind::Epidemic:    return col.maxCoeff() - col.minCoeff();
  }
  throw std::logic_error("unreachable test kind");
}

double alpha_star(double overall_alpha, int n_components) {
  if (!(overall_alpha > 0.0 && overall_alpha < 1.0))
    throw std::invalid_argument("significance level must lie in (0,1)");
  if (n_components < 1)
    throw std::invalid_argument("at least one monitored component required");
  return 1.0 - std::pow(1.0 - overall_alpha, 1.0 / (double)n_components);
}

double bridge_sup_tail(double x) {
  if (x <= 0.0) return 1.0;
  return std::exp(-2.0 * x * x);
}

double bridge_abs_tail(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.75) {
    // Dual theta series: P(max|B| <= x) = sqrt(2*pi)/x * sum over odd j of
    // exp(-j^2 pi^2 / (8 x^2)); fast for small x where the direct
    // alternating series grinds.
    double cdf = 0.0;
    for (int j = 1; j < 2 * kSeriesCap; j += 2) {
      const double term = std::exp(-(double)j * (double)j * kPi * kPi / (8.0 * x * x));
      cdf += term;
      if (term < kSeriesEps) break;
    }
    cdf *= std::sqrt(2.0 * kPi) / x;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double tail = 0.0;
  for (int k = 1; k <= kSeriesCap; ++k) {
    const double term = std::exp(-2.0 * (double)k * (double)k * x * x);
    tail += (k % 2 == 1) ? term : -term;
    if (term < kSeriesEps) break;
  }
  return std::clamp(2.0 * tail, 0.0, 1.0);
}

double bridge_range_tail(double x) {
  if (x <= 0.0) return 1.0;
  double tail = 0.0;
  for (int k = 1; k <= kSeriesCap; ++k) {
    const double kk = (double)k * (double)k;
    const double e = std::exp(-2.0 * kk * x * x);
    tail += (4.0 * kk * x * x - 1.0) * e;
    // The envelope bounds |every later term|; single terms can vanish
    // near 4 k^2 x^2 = 1, so do not stop on the term itself.
    if ((4.0 * kk * x * x + 1.0) * e < kSeriesEps) break;
  }
  return std::clamp(2.0 * tail, 0.0, 1.0);
}

namespace {

double invert_tail(double (*tail)(double), double alpha, double lo, double hi) {
  if (tail(lo) <= alpha) return lo;
  if (tail(hi) > alpha)
    throw std::invalid_argument("significance level out of reach");
  while (hi - lo > kBisectTol) {
    const double mid = 0.5 * (lo + hi);
    (tail(mid) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double critical_value(TestKind kind, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("significance level must lie in (0,1)");
  switch (kind) {
    case TestKind::OneSidedSup:
    case TestKind::OneSidedInf:
      // exp(-2 x^2) = alpha, same magnitude for both directions.
      return std::sqrt(-std::log(alpha) / 2.0);
    case TestKind::TwoSided:
      return invert_tail(&bridge_abs_tail, alpha, 1e-6, 10.0);
    case TestKind::Epidemic:
      return invert_tail(&bridge_range_tail, alpha, 5e-3, 10.0);
  }
  throw std::logic_error("unreachable test kind");
}

TestReport evaluate_path(const CusumPath& path, const EstimationResult& fit,
                         const TestConfig& config) {
  std::vector<int> monitored = config.monitored;
  if (monitored.empty())
    for (int c = 1; c <= path.dimension(); ++c) monitored.push_back(c);
  for (int c : monitored)
    if (c < 1 || c > path.dimension())
      throw std::invalid_argument("monitored component out of range");
  {
    std::vector<int> sorted = monitored;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("monitored components must be distinct");
  }

  TestReport report;
  report.config = config;
  report.fit = fit;
  report.path = path;
  report.alpha_star_used = alpha_star(config.overall_alpha, (int)monitored.size());
  const double crit = critical_value(config.kind, report.alpha_star_used);

  for (int c : monitored) {
    ComponentDecision dec;
    dec.component = c;
    dec.stat = statistic(path, c, config.kind);
    dec.critical = crit;
    switch (config.kind) {
      case TestKind::OneSidedSup:
        dec.reject = dec.stat >= crit;
        dec.direction = "decrease";
        break;
      case TestKind::OneSidedInf:
        dec.reject = dec.stat <= -crit;
        dec.direction = "increase";
        break;
      case TestKind::TwoSided:
      case TestKind::Epidemic:
        dec.reject = dec.stat >= crit;
        break;
    }
    report.reject = report.reject || dec.reject;
    report.components.push_back(std::move(dec));
  }
  return report;
}

TestReport run_test(const ObservationSeries& series,
                    const std::vector<int>& lag_support, const TestConfig& config) {
  EstimationResult fit = cls_estimate(series, lag_support);
  CusumPath path = cusum_path(series, fit);
  return evaluate_path(path, fit, config);
}

}  // namespace inar
