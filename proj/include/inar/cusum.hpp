#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "inar/estimate.hpp"

namespace inar {

// Normalized residual partial-sum process evaluated on the grid t = k/n,
// k = 0..n. Row k holds I_hat^{-1/2} sum_{j<=k} resid_j r_j; under a correct
// stable model the process approximates a vector of independent standard
// Brownian bridges, which is what the critical values assume. Rows 0 and n
// are zero (the last by the normal equations).
struct CusumPath {
  Eigen::MatrixXd values;  // (n+1) x d

  int n() const { return (int)values.rows() - 1; }
  int dimension() const { return (int)values.cols(); }
};

CusumPath cusum_path(const ObservationSeries& series, const EstimationResult& fit);

enum class TestKind { OneSidedSup, OneSidedInf, TwoSided, Epidemic };

// Scalar functional of one path component over the full grid:
//   OneSidedSup: max, OneSidedInf: min, TwoSided: max |.|,
//   Epidemic: max - min. Component indices are 1-based.
double statistic(const CusumPath& path, int component, TestKind kind);

// Per-component level from an overall level when d components are monitored
// marginally: alpha* = 1 - (1 - alpha)^(1/d).
double alpha_star(double overall_alpha, int n_components);

// Tail probabilities of the corresponding Brownian-bridge functionals.
// sup:      exp(-2 x^2)
// max |.|:  2 sum_{k>=1} (-1)^(k+1) exp(-2 k^2 x^2)   (dual theta form for
//           small x, where the alternating series converges slowly)
// max-min:  2 sum_{k>=1} (4 k^2 x^2 - 1) exp(-2 k^2 x^2)
// Series are truncated when a term drops below 1e-14 (capped at 1e4 terms).
double bridge_sup_tail(double x);
double bridge_abs_tail(double x);
double bridge_range_tail(double x);

// Smallest x with tail(x) <= alpha for the kind's functional; closed form for
// the one-sided kinds, bisection to 1e-10 otherwise.
double critical_value(TestKind kind, double alpha);

struct TestConfig {
  std::vector<int> monitored;  // 1-based component indices; empty = all
  TestKind kind = TestKind::TwoSided;
  double overall_alpha = 0.05;
};

struct ComponentDecision {
  int component = 0;
  double stat = 0.0;
  double critical = 0.0;
  bool reject = false;
  // For the one-sided kinds: "decrease" (sup branch) or "increase" (inf
  // branch), the direction of parameter change the rejection indicates.
  std::string direction;
};

struct TestReport {
  TestConfig config;
  double alpha_star_used = 0.0;
  std::vector<ComponentDecision> components;
  bool reject = false;
  EstimationResult fit;
  CusumPath path;
};

// Fits the model, builds the path, and evaluates every monitored component
// against the shared critical value. Estimation errors propagate.
TestReport run_test(const ObservationSeries& series,
                    const std::vector<int>& lag_support, const TestConfig& config);

// Same evaluation on an already-built path/fit (used to run several kinds on
// one fit without refitting).
TestReport evaluate_path(const CusumPath& path, const EstimationResult& fit,
                         const TestConfig& config);

}  // namespace inar
