#include "inar/model.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace inar {

namespace {

constexpr std::uint64_t kCountCap = 100000000ull;  // simulation abort threshold

void check_prob(double p, const char* what) {
  if (!(p >= 0.0) || !std::isfinite(p))
    throw std::invalid_argument(std::string(what) + " must be finite and nonnegative");
}

}  // namespace

// ---------------------------------------------------------------------------
// InnovationSpec

InnovationSpec InnovationSpec::poisson(double mean) {
  check_prob(mean, "poisson mean");
  InnovationSpec s;
  s.family_ = InnovationFamily::Poisson;
  s.mean_ = mean;
  s.variance_ = mean;
  return s;
}

InnovationSpec InnovationSpec::negative_binomial(double mean, double variance) {
  check_prob(mean, "negative binomial mean");
  if (!(mean > 0.0))
    throw std::invalid_argument("negative binomial mean must be positive");
  if (!(variance > mean) || !std::isfinite(variance))
    throw std::invalid_argument(
        "negative binomial variance must exceed the mean (overdispersion)");
  InnovationSpec s;
  s.family_ = InnovationFamily::NegativeBinomial;
  s.mean_ = mean;
  s.variance_ = variance;
  return s;
}

InnovationSpec InnovationSpec::degenerate(std::uint32_t value) {
  InnovationSpec s;
  s.family_ = InnovationFamily::Degenerate;
  s.mean_ = (double)value;
  s.variance_ = 0.0;
  return s;
}

InnovationSpec InnovationSpec::finite_pmf(std::vector<double> masses) {
  if (masses.empty())
    throw std::invalid_argument("finite pmf needs at least one mass");
  double sum = 0.0, mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (!(masses[i] >= 0.0) || !std::isfinite(masses[i]))
      throw std::invalid_argument("finite pmf masses must be nonnegative");
    sum += masses[i];
    mean += (double)i * masses[i];
    second += (double)i * (double)i * masses[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("finite pmf masses must sum to 1");
  InnovationSpec s;
  s.family_ = InnovationFamily::FinitePmf;
  s.mean_ = mean;
  s.variance_ = second - mean * mean;
  s.masses_ = std::move(masses);
  s.cdf_.resize(s.masses_.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < s.masses_.size(); ++i) {
    acc += s.masses_[i];
    s.cdf_[i] = acc;
  }
  s.cdf_.back() = 1.0;
  return s;
}

std::uint32_t InnovationSpec::sample(RngStream& rng) const {
  switch (family_) {
    case InnovationFamily::Poisson:
      return rng.poisson(mean_);
    case InnovationFamily::NegativeBinomial: {
      // Gamma-Poisson mixture with q = mean/variance, shape mean^2/(var-mean).
      const double q = mean_ / variance_;
      const double shape = mean_ * mean_ / (variance_ - mean_);
      const double lambda = rng.gamma(shape, (1.0 - q) / q);
      return rng.poisson(lambda);
    }
    case InnovationFamily::Degenerate:
      return (std::uint32_t)mean_;
    case InnovationFamily::FinitePmf:
      return rng.from_cdf(cdf_);
  }
  throw std::logic_error("unreachable innovation family");
}

std::string InnovationSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case InnovationFamily::Poisson:
      os << "poisson(mean=" << mean_ << ")";
      break;
    case InnovationFamily::NegativeBinomial:
      os << "negative-binomial(mean=" << mean_ << ",variance=" << variance_ << ")";
      break;
    case InnovationFamily::Degenerate:
      os << "degenerate(" << (std::uint32_t)mean_ << ")";
      break;
    case InnovationFamily::FinitePmf:
      os << "finite-pmf(" << masses_.size() << " masses, mean=" << mean_ << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// InarModel

InarModel::InarModel(std::vector<double> alpha, InnovationSpec innovation)
    : order_((int)alpha.size()),
      alpha_full_(std::move(alpha)),
      innovation_(std::move(innovation)) {
  for (int i = 1; i <= order_; ++i)
    if (alpha_full_[(std::size_t)(i - 1)] != 0.0) support_.push_back(i);
  if (support_.empty()) support_.push_back(1);
  validate();
}

InarModel::InarModel(int order, std::vector<int> lag_support,
                     std::vector<double> alpha_on_support,
                     InnovationSpec innovation)
    : support_(std::move(lag_support)), innovation_(std::move(innovation)) {
  if (support_.empty())
    throw std::invalid_argument("lag support must not be empty");
  if (alpha_on_support.size() != support_.size())
    throw std::invalid_argument("one coefficient per support lag required");
  if (!std::is_sorted(support_.begin(), support_.end()) ||
      std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("lag support must be strictly increasing");
  if (support_.front() < 1)
    throw std::invalid_argument("lag support must lie in 1..order");
  order_ = std::max(order, support_.back());
  alpha_full_.assign((std::size_t)order_, 0.0);
  for (std::size_t j = 0; j < support_.size(); ++j)
    alpha_full_[(std::size_t)(support_[j] - 1)] = alpha_on_support[j];
  validate();
}

void InarModel::validate() const {
  if (order_ < 1) throw std::invalid_argument("model order must be at least 1");
  if (support_.front() < 1 || support_.back() > order_)
    throw std::invalid_argument("lag support must lie in 1..order");
  for (double a : alpha_full_)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("thinning coefficients must lie in [0,1]");
}

std::vector<double> InarModel::alpha_on_support() const {
  std::vector<double> out;
  out.reserve(support_.size());
  for (int lag : support_) out.push_back(alpha(lag));
  return out;
}

double InarModel::alpha_sum() const {
  return std::accumulate(alpha_full_.begin(), alpha_full_.end(), 0.0);
}

bool InarModel::satisfies_stability_condition(std::string* why) const {
  if (!(alpha_sum() < 1.0)) {
    if (why) *why = "coefficients sum to " + std::to_string(alpha_sum()) + " >= 1";
    return false;
  }
  if (!(innovation_.mean() > 0.0)) {
    if (why) *why = "innovation mean must be positive";
    return false;
  }
  if (alpha_sum() == 0.0 && innovation_.variance() == 0.0) {
    if (why) *why = "constant process: all coefficients zero and degenerate innovation";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// ChangeSpec

ChangeSpec::ChangeSpec(double rho_, InarModel pre_, InarModel post_)
    : rho(rho_), pre(std::move(pre_)), post(std::move(post_)) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("change fraction rho must lie strictly in (0,1)");
  if (pre.order() != post.order())
    throw std::invalid_argument("pre- and post-change orders must match");
}

int ChangeSpec::change_index(int n) const {
  // The nudge keeps decimal rho (0.3 etc., inexact in binary) on the intended
  // integer when rho*n is mathematically whole.
  const int tau = (int)std::floor(rho * (double)n + 1e-9);
  return std::max(tau, 1);
}

// ---------------------------------------------------------------------------
// Simulation

namespace {

// One transition. window[j] holds the value j+1 steps back.
std::uint32_t step(const InarModel& m, const std::vector<std::uint32_t>& window,
                   RngStream& rng) {
  std::uint64_t sum = 0;
  for (int lag : m.lag_support())
    sum += rng.bernoulli_sum(window[(std::size_t)(lag - 1)], m.alpha(lag));
  sum += m.innovation().sample(rng);
  if (sum > kCountCap)
    throw std::overflow_error("simulated count exceeded 1e8 (unstable model?)");
  return (std::uint32_t)sum;
}

void shift_in(std::vector<std::uint32_t>& window, std::uint32_t x) {
  for (std::size_t j = window.size(); j-- > 1;) window[j] = window[j - 1];
  window[0] = x;
}

std::vector<std::uint32_t> window_from_initial(
    const InarModel& m, const std::vector<std::uint32_t>& initial) {
  if ((int)initial.size() != m.order())
    throw std::invalid_argument("need exactly `order` initial values, got " +
                                std::to_string(initial.size()));
  // initial is oldest-first; the window is newest-first.
  std::vector<std::uint32_t> w(initial.rbegin(), initial.rend());
  return w;
}

}  // namespace

ObservationSeries simulate_on_stream(const InarModel& model, int n,
                                     const std::vector<std::uint32_t>& initial,
                                     RngStream& rng) {
  if (n < 0) throw std::invalid_argument("series length must be nonnegative");
  std::vector<std::uint32_t> window = window_from_initial(model, initial);
  ObservationSeries out;
  out.initial = initial;
  out.values.reserve((std::size_t)n);
  for (int k = 1; k <= n; ++k) {
    const std::uint32_t x = step(model, window, rng);
    out.values.push_back(x);
    shift_in(window, x);
  }
  return out;
}

ObservationSeries simulate(const InarModel& model, int n,
                           const std::vector<std::uint32_t>& initial,
                           std::uint64_t seed) {
  RngStream rng(seed, 0);
  return simulate_on_stream(model, n, initial, rng);
}

ObservationSeries simulate_with_change_on_stream(
    const ChangeSpec& change, int n, const std::vector<std::uint32_t>& initial,
    RngStream& rng) {
  if (n < 1) throw std::invalid_argument("series length must be positive");
  std::vector<std::uint32_t> window = window_from_initial(change.pre, initial);
  const int tau = change.change_index(n);
  ObservationSeries out;
  out.initial = initial;
  out.values.reserve((std::size_t)n);
  for (int k = 1; k <= n; ++k) {
    const InarModel& m = (k <= tau) ? change.pre : change.post;
    const std::uint32_t x = step(m, window, rng);
    out.values.push_back(x);
    shift_in(window, x);
  }
  return out;
}

ObservationSeries simulate_with_change(const ChangeSpec& change, int n,
                                       const std::vector<std::uint32_t>& initial,
                                       std::uint64_t seed) {
  RngStream rng(seed, 0);
  return simulate_with_change_on_stream(change, n, initial, rng);
}

int burn_in_length(int order) { return std::max(500, 50 * order); }

ObservationSeries simulate_stationary_on_stream(const InarModel& model, int n,
                                                RngStream& rng) {
  if (!model.is_stable())
    throw std::invalid_argument("stationary start needs a stable model");
  std::vector<std::uint32_t> window((std::size_t)model.order(), 0u);
  const int burn = burn_in_length(model.order());
  for (int k = 0; k < burn; ++k) shift_in(window, step(model, window, rng));
  const std::vector<std::uint32_t> initial(window.rbegin(), window.rend());
  return simulate_on_stream(model, n, initial, rng);
}

ObservationSeries simulate_stationary(const InarModel& model, int n,
                                      std::uint64_t seed) {
  RngStream rng(seed, 0);
  return simulate_stationary_on_stream(model, n, rng);
}

// ---------------------------------------------------------------------------
// Moments

Eigen::MatrixXd companion_matrix(const InarModel& model) {
  const int p = model.order();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, p);
  for (int i = 1; i <= p; ++i) a(0, i - 1) = model.alpha(i);
  for (int i = 1; i < p; ++i) a(i, i - 1) = 1.0;
  return a;
}

double spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

StationaryMoments stationary_moments(const InarModel& model) {
  if (!model.is_stable())
    throw std::invalid_argument("stationary moments exist only for stable models");
  const int p = model.order();
  const double mu = model.innovation().mean();
  const double s2 = model.innovation().variance();
  const Eigen::MatrixXd a = companion_matrix(model);

  StationaryMoments mo;
  mo.mean = Eigen::VectorXd::Constant(p, mu / (1.0 - model.alpha_sum()));

  // Thinning part of the one-step conditional variance at the mean.
  double thin = 0.0;
  for (int i = 1; i <= p; ++i)
    thin += model.alpha(i) * (1.0 - model.alpha(i)) * mo.mean(i - 1);

  const Eigen::VectorXd am = a * mo.mean;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(p, p);
  b(0, 0) = mu * mu + thin + s2;
  b.col(0) += mu * am;
  b.row(0) += mu * am.transpose();

  // Solve S = A S A^T + B by stacking rows: with S_{ij} at position i*p+j,
  // (A S A^T)_{ij} = sum_{kl} A_{ik} A_{jl} S_{kl}.
  const int pp = p * p;
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(pp, pp);
  Eigen::VectorXd rhs(pp);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      rhs(i * p + j) = b(i, j);
      for (int k = 0; k < p; ++k)
        for (int l = 0; l < p; ++l) sys(i * p + j, k * p + l) -= a(i, k) * a(j, l);
    }
  const Eigen::VectorXd vec_s = sys.partialPivLu().solve(rhs);
  Eigen::MatrixXd s(p, p);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) s(i, j) = vec_s(i * p + j);
  mo.second_moment = 0.5 * (s + s.transpose());
  return mo;
}

Eigen::MatrixXd moment_matrix_C(const InarModel& model) {
  const StationaryMoments mo = stationary_moments(model);
  const int p = model.order();
  Eigen::MatrixXd c(p + 1, p + 1);
  c.topLeftCorner(p, p) = mo.second_moment;
  c.topRightCorner(p, 1) = mo.mean;
  c.bottomLeftCorner(1, p) = mo.mean.transpose();
  c(p, p) = 1.0;
  return c;
}

Eigen::MatrixXd restrict_moment_matrix(const Eigen::MatrixXd& c_full,
                                       const std::vector<int>& lag_support) {
  const int p = (int)c_full.rows() - 1;
  std::vector<int> idx;
  idx.reserve(lag_support.size() + 1);
  for (int lag : lag_support) {
    if (lag < 1 || lag > p)
      throw std::invalid_argument("support lag outside the moment matrix");
    idx.push_back(lag - 1);
  }
  idx.push_back(p);
  const int d = (int)idx.size();
  Eigen::MatrixXd out(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) out(r, c) = c_full(idx[(std::size_t)r], idx[(std::size_t)c]);
  return out;
}

}  // namespace inar
