#pragma once

// Independent reference computations used to pin expected values in tests.
// Everything here is deliberately written the dumb way: long double
// accumulators, explicit loops, hand-rolled Gaussian elimination, no Eigen.
// If the library and these disagree, trust neither and find out why.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

// Solve A x = b by Gaussian elimination with partial pivoting.
// A is row-major d x d. Throws if a pivot underflows.
inline std::vector<long double> solve_dense(std::vector<std::vector<long double>> a,
                                            std::vector<long double> b) {
  const std::size_t d = b.size();
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs((double)a[r][col]) > std::fabs((double)a[piv][col])) piv = r;
    if (std::fabs((double)a[piv][col]) < 1e-30)
      throw std::runtime_error("oracle: singular system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < d; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < d; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<long double> x(d, 0.0L);
  for (std::size_t ri = d; ri-- > 0;) {
    long double s = b[ri];
    for (std::size_t c = ri + 1; c < d; ++c) s -= a[ri][c] * x[c];
    x[ri] = s / a[ri][ri];
  }
  return x;
}

// Value of the series at time k-lag, where values[0] is time 1 and
// initial[initial.size()-1] is time 0.
inline long double lagged_at(const std::vector<std::uint32_t>& initial,
                             const std::vector<std::uint32_t>& values, int k, int lag) {
  const int t = k - lag;
  if (t >= 1) return (long double)values[(std::size_t)(t - 1)];
  const int idx = (int)initial.size() + t - 1;
  if (idx < 0) throw std::runtime_error("oracle: lag reaches before initial segment");
  return (long double)initial[(std::size_t)idx];
}

struct ClsFit {
  std::vector<long double> theta;      // coefficients on support, then intercept
  std::vector<long double> residuals;  // one per observation
  long double sigma2 = 0.0L;
};

// Conditional least squares by explicit normal equations: regressors are the
// lagged counts on the requested support plus a constant term. The variance
// estimate subtracts the thinning contribution a(1-a)X from each squared
// residual (plus sign; see the module docs for why).
inline ClsFit cls_fit(const std::vector<std::uint32_t>& initial,
                      const std::vector<std::uint32_t>& values,
                      const std::vector<int>& support) {
  const std::size_t n = values.size();
  const std::size_t d = support.size() + 1;
  std::vector<std::vector<long double>> q(d, std::vector<long double>(d, 0.0L));
  std::vector<long double> rhs(d, 0.0L);
  std::vector<long double> reg(d, 1.0L);
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t i = 0; i < support.size(); ++i)
      reg[i] = lagged_at(initial, values, (int)k, support[i]);
    reg[d - 1] = 1.0L;
    for (std::size_t r = 0; r < d; ++r) {
      rhs[r] += reg[r] * (long double)values[k - 1];
      for (std::size_t c = 0; c < d; ++c) q[r][c] += reg[r] * reg[c];
    }
  }
  ClsFit fit;
  fit.theta = solve_dense(q, rhs);
  fit.residuals.resize(n);
  long double s2 = 0.0L;
  for (std::size_t k = 1; k <= n; ++k) {
    long double pred = fit.theta[d - 1];
    long double thin = 0.0L;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const long double x = lagged_at(initial, values, (int)k, support[i]);
      pred += fit.theta[i] * x;
      thin += fit.theta[i] * (1.0L - fit.theta[i]) * x;
    }
    const long double m = (long double)values[k - 1] - pred;
    fit.residuals[k - 1] = m;
    s2 += m * m - thin;
  }
  fit.sigma2 = s2 / (long double)n;
  return fit;
}

// Information matrix by the literal definition: sum over observations of
// (sum_i a_i(1-a_i) X_{k-i} + sigma2) r_k r_k^T, long double accumulation.
inline std::vector<std::vector<long double>> information(
    const std::vector<std::uint32_t>& initial, const std::vector<std::uint32_t>& values,
    const std::vector<int>& support, const std::vector<long double>& theta,
    long double sigma2) {
  const std::size_t n = values.size();
  const std::size_t d = support.size() + 1;
  std::vector<std::vector<long double>> info(d, std::vector<long double>(d, 0.0L));
  std::vector<long double> reg(d, 1.0L);
  for (std::size_t k = 1; k <= n; ++k) {
    long double w = sigma2;
    for (std::size_t i = 0; i < support.size(); ++i) {
      reg[i] = lagged_at(initial, values, (int)k, support[i]);
      w += theta[i] * (1.0L - theta[i]) * reg[i];
    }
    reg[d - 1] = 1.0L;
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) info[r][c] += w * reg[r] * reg[c];
  }
  return info;
}

// Raw residual partial sums sum_{j<=k} M_j r_j (no normalization), k = 0..n.
inline std::vector<std::vector<long double>> weighted_partial_sums(
    const std::vector<std::uint32_t>& initial, const std::vector<std::uint32_t>& values,
    const std::vector<int>& support, const std::vector<long double>& theta) {
  const std::size_t n = values.size();
  const std::size_t d = support.size() + 1;
  std::vector<std::vector<long double>> sums(n + 1, std::vector<long double>(d, 0.0L));
  for (std::size_t k = 1; k <= n; ++k) {
    long double pred = theta[d - 1];
    std::vector<long double> reg(d, 1.0L);
    for (std::size_t i = 0; i < support.size(); ++i) {
      reg[i] = lagged_at(initial, values, (int)k, support[i]);
      pred += theta[i] * reg[i];
    }
    const long double m = (long double)values[k - 1] - pred;
    for (std::size_t c = 0; c < d; ++c) sums[k][c] = sums[k - 1][c] + m * reg[c];
  }
  return sums;
}

// Stationary moments of a first-order model, derived by hand from
//   X_k = a o X_{k-1} + e_k:
//   m = mu / (1 - a)
//   E X^2 solves S = a^2 S + a(1-a) m + 2 a mu m + mu^2 + sigma2.
struct FirstOrderMoments {
  long double mean;
  long double second;  // E X^2
};
inline FirstOrderMoments first_order_moments(long double a, long double mu,
                                             long double sigma2) {
  FirstOrderMoments mo{};
  mo.mean = mu / (1.0L - a);
  mo.second =
      (a * (1.0L - a) * mo.mean + 2.0L * a * mu * mo.mean + mu * mu + sigma2) /
      (1.0L - a * a);
  return mo;
}

// Nearest-rank quantile (the convention used across the tests): the smallest
// element with rank >= ceil(p * N) in the sorted sample.
inline double nearest_rank_quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::runtime_error("oracle: quantile of empty sample");
  std::size_t rank = (std::size_t)std::ceil(p * (double)xs.size());
  if (rank == 0) rank = 1;
  if (rank > xs.size()) rank = xs.size();
  std::sort(xs.begin(), xs.end());
  return xs[rank - 1];
}

}  // namespace oracle
