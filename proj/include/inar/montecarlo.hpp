#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "inar/changepoint.hpp"
#include "inar/cusum.hpp"
#include "inar/model.hpp"

namespace inar {

// Replica r of a run with master seed s always uses RngStream(s, r), and
// results are aggregated by replica index, so summaries do not depend on
// execution order or thread count. Replicas whose fit fails (singular design,
// non-positive-definite information) are counted per error kind and excluded
// from rates; completed + failed == replications always holds.
struct MonteCarloSummary {
  int replications = 0;
  int completed = 0;
  int failed = 0;
  std::map<std::string, int> failure_kinds;
  double rejection_rate = 0.0;
  double rejection_se = 0.0;  // binomial SE over completed replicas
  double seconds = 0.0;
};

// Rejection rate under the null: stationary simulation of `model` (burn-in
// start), fit on the model's support, test per `config`.
MonteCarloSummary empirical_size(const InarModel& model, int n, int replications,
                                 const TestConfig& config, std::uint64_t seed,
                                 int threads = 0);

// Rejection rate under a single change; the pre-change regime provides the
// stationary starting window.
MonteCarloSummary empirical_power(const ChangeSpec& change, int n,
                                  int replications, const TestConfig& config,
                                  std::uint64_t seed, int threads = 0);

// Quantiles of the change-point error tau_hat - change_index(n) for each n.
struct QuantileRow {
  int n = 0;
  int completed = 0;
  int failed = 0;
  std::vector<double> quantiles;  // one per requested probability
};
std::vector<QuantileRow> changepoint_error_quantiles(
    const ChangeSpec& change, const std::vector<int>& ns, int replications,
    ScanKind kind, int weight_lag, const std::vector<double>& probabilities,
    std::uint64_t seed, int threads = 0);

// Monte Carlo tail probability of a Brownian-bridge functional: Wiener paths
// on a uniform grid (cumulative scaled normals), bridged by subtracting
// t * W(1), functional per TestKind. The simulation route is the yardstick
// for the analytic critical values, so it must stay independent of them.
struct BridgeTailEstimate {
  double estimate = 0.0;
  double se = 0.0;
  int replications = 0;
  int grid_points = 0;
};
BridgeTailEstimate bridge_tail(TestKind kind, double x, int replications,
                               int grid_points, std::uint64_t seed,
                               int threads = 0);

// Nearest-rank sample quantile used by the tables above.
double sample_quantile(std::vector<double> xs, double p);

}  // namespace inar
