#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "inar/rng.hpp"

namespace inar {

// Innovation (arrival) distribution of the count autoregression. Each family
// has all moments finite, so the moment side of the stability condition is
// settled by family membership alone.
enum class InnovationFamily { Poisson, NegativeBinomial, Degenerate, FinitePmf };

class InnovationSpec {
 public:
  static InnovationSpec poisson(double mean);
  // Parameterized by mean and variance; requires variance > mean > 0.
  static InnovationSpec negative_binomial(double mean, double variance);
  // Point mass at a nonnegative integer.
  static InnovationSpec degenerate(std::uint32_t value);
  // masses[i] = P(innovation = i); must be nonnegative and sum to 1 (1e-12).
  static InnovationSpec finite_pmf(std::vector<double> masses);

  InnovationFamily family() const { return family_; }
  double mean() const { return mean_; }
  double variance() const { return variance_; }
  const std::vector<double>& masses() const { return masses_; }

  std::uint32_t sample(RngStream& rng) const;
  std::string describe() const;

 private:
  InnovationSpec() = default;
  InnovationFamily family_ = InnovationFamily::Degenerate;
  double mean_ = 0.0;
  double variance_ = 0.0;
  std::vector<double> masses_;  // FinitePmf only
  std::vector<double> cdf_;     // FinitePmf only
};

// Stable count autoregression of order p with Bernoulli thinning:
//   X_k = sum_{i in support} thin(alpha_i, X_{k-i}) + eps_k.
// A seasonal model is a full order-p model whose coefficients vanish off the
// lag support; only support lags are thinned (an off-support lag is a no-op).
class InarModel {
 public:
  // Full coefficient vector (alpha[i] belongs to lag i+1); support is the set
  // of nonzero positions unless all are zero, in which case it is {1}.
  InarModel(std::vector<double> alpha, InnovationSpec innovation);
  // Sparse form: alpha_on_support[j] belongs to lag support[j]. Order is
  // max(order, max lag); pass order = 0 to let the support determine it.
  InarModel(int order, std::vector<int> lag_support,
            std::vector<double> alpha_on_support, InnovationSpec innovation);

  int order() const { return order_; }
  const std::vector<int>& lag_support() const { return support_; }
  double alpha(int lag) const { return alpha_full_[(std::size_t)(lag - 1)]; }
  const std::vector<double>& alpha_full() const { return alpha_full_; }
  std::vector<double> alpha_on_support() const;
  double alpha_sum() const;
  const InnovationSpec& innovation() const { return innovation_; }

  bool is_stable() const { return alpha_sum() < 1.0; }
  // Stability condition for the asymptotics: sum alpha < 1, innovation mean
  // > 0, and not (all alpha zero and innovation degenerate). Returns false
  // with a reason instead of throwing.
  bool satisfies_stability_condition(std::string* why = nullptr) const;

 private:
  void validate() const;
  int order_ = 0;
  std::vector<int> support_;
  std::vector<double> alpha_full_;
  InnovationSpec innovation_;
};

// A count series split into the p starting values (times 1-p .. 0) and the
// n modeled observations (times 1 .. n). All estimation indices are relative
// to `values`; a raw file row r corresponds to values[r - initial.size() - 1].
struct ObservationSeries {
  std::vector<std::uint32_t> initial;
  std::vector<std::uint32_t> values;

  int n() const { return (int)values.size(); }
  int max_initial_lag() const { return (int)initial.size(); }
  // X_{k - lag} for an observation index k in 1..n.
  std::uint32_t lagged(int k, int lag) const {
    const int t = k - lag;
    if (t >= 1) return values[(std::size_t)(t - 1)];
    return initial[(std::size_t)((int)initial.size() + t - 1)];
  }
};

// Single change in the model at step change_index(n): steps 1..tau follow
// `pre`, steps tau+1..n follow `post`. Orders must match so the state window
// carries across the switch.
struct ChangeSpec {
  double rho;  // in (0,1)
  InarModel pre;
  InarModel post;

  ChangeSpec(double rho_, InarModel pre_, InarModel post_);
  int change_index(int n) const;  // max(floor(rho*n), 1)
};

// Simulation. The draw discipline per step is: for each support lag in
// increasing order, one uniform per unit of the lagged count; then the
// innovation draw. simulate(...) uses stream 0 of `seed`; with pre == post,
// simulate_with_change consumes the identical draw sequence and reproduces
// simulate bit for bit.
ObservationSeries simulate(const InarModel& model, int n,
                           const std::vector<std::uint32_t>& initial,
                           std::uint64_t seed);
ObservationSeries simulate_with_change(const ChangeSpec& change, int n,
                                       const std::vector<std::uint32_t>& initial,
                                       std::uint64_t seed);

// Same, but on a caller-provided stream (Monte Carlo replicas pass their own).
ObservationSeries simulate_on_stream(const InarModel& model, int n,
                                     const std::vector<std::uint32_t>& initial,
                                     RngStream& rng);
ObservationSeries simulate_with_change_on_stream(const ChangeSpec& change, int n,
                                                 const std::vector<std::uint32_t>& initial,
                                                 RngStream& rng);

// Approximately stationary start: burn max(500, 50*order) steps from an
// all-zero window, then record n observations. Requires a stable model.
ObservationSeries simulate_stationary(const InarModel& model, int n,
                                      std::uint64_t seed);
ObservationSeries simulate_stationary_on_stream(const InarModel& model, int n,
                                                RngStream& rng);
int burn_in_length(int order);

// Companion form of the coefficient vector: first row alpha_1..alpha_p,
// ones on the subdiagonal. Its spectral radius is < 1 iff sum alpha < 1.
Eigen::MatrixXd companion_matrix(const InarModel& model);
double spectral_radius(const Eigen::MatrixXd& m);

// First and second moments of the stationary law (stable models only):
// mean solves (I - A) m = mu e1; the second-moment matrix S = E[X X^T] (state
// window form) solves S = A S A^T + B via vectorization, where B collects the
// innovation mean/variance and the thinning variance term.
struct StationaryMoments {
  Eigen::VectorXd mean;           // length p, all entries mu / (1 - sum alpha)
  Eigen::MatrixXd second_moment;  // p x p, E[window window^T]
};
StationaryMoments stationary_moments(const InarModel& model);

// E[(window; 1)(window; 1)^T], the (p+1) x (p+1) moment matrix that drives
// the estimator limits. Positive definite whenever the stability condition
// holds; singular exactly in the degenerate all-alpha-zero case.
Eigen::MatrixXd moment_matrix_C(const InarModel& model);

// Rows/columns of a full moment matrix restricted to a lag support plus the
// intercept coordinate, matching the sparse-fit regressor layout.
Eigen::MatrixXd restrict_moment_matrix(const Eigen::MatrixXd& c_full,
                                       const std::vector<int>& lag_support);

}  // namespace inar
