#include "inar/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "inar/errors.hpp"

namespace inar {

namespace {

enum class Outcome : std::uint8_t { NoReject, Reject, Singular, NotPd, Other };

const char* outcome_label(Outcome o) {
  switch (o) {
    case Outcome::Singular: return "singular-design";
    case Outcome::NotPd:    return "information-not-positive-definite";
    default:                return "error";
  }
}

int resolve_threads(int threads, int replications) {
  if (threads <= 0) threads = (int)std::thread::hardware_concurrency();
  if (threads < 1) threads = 1;
  return std::min(threads, std::max(replications, 1));
}

// Runs fn(r) for r in [0, replications), fanned out over contiguous index
// blocks. Every writer targets its own replica slot, so results never depend
// on scheduling.
template <typename Fn>
void run_replicas(int replications, int threads, const Fn& fn) {
  threads = resolve_threads(threads, replications);
  if (threads == 1) {
    for (int r = 0; r < replications; ++r) fn(r);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve((std::size_t)threads);
  const int chunk = (replications + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(replications, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int r = lo; r < hi; ++r) fn(r);
    });
  }
  for (auto& th : pool) th.join();
}

template <typename Simulate>
MonteCarloSummary rejection_experiment(int n, int replications,
                                       const std::vector<int>& lag_support,
                                       const TestConfig& config,
                                       std::uint64_t seed, int threads,
                                       const Simulate& make_series) {
  if (replications < 1)
    throw std::invalid_argument("at least one replication required");
  if (n < 1) throw std::invalid_argument("series length must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<Outcome> outcomes((std::size_t)replications, Outcome::Other);
  run_replicas(replications, threads, [&](int r) {
    RngStream rng(seed, (std::uint64_t)r);
    try {
      const ObservationSeries series = make_series(n, rng);
      const TestReport report = run_test(series, lag_support, config);
      outcomes[(std::size_t)r] = report.reject ? Outcome::Reject : Outcome::NoReject;
    } catch (const SingularDesign&) {
      outcomes[(std::size_t)r] = Outcome::Singular;
    } catch (const NotPositiveDefinite&) {
      outcomes[(std::size_t)r] = Outcome::NotPd;
    } catch (const std::exception&) {
      outcomes[(std::size_t)r] = Outcome::Other;
    }
  });

  MonteCarloSummary s;
  s.replications = replications;
  int rejects = 0;
  for (Outcome o : outcomes) {
    if (o == Outcome::Reject || o == Outcome::NoReject) {
      ++s.completed;
      rejects += (o == Outcome::Reject) ? 1 : 0;
    } else {
      ++s.failed;
      ++s.failure_kinds[outcome_label(o)];
    }
  }
  if (s.completed > 0) {
    s.rejection_rate = (double)rejects / (double)s.completed;
    s.rejection_se = std::sqrt(s.rejection_rate * (1.0 - s.rejection_rate) /
                               (double)s.completed);
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
  return s;
}

ObservationSeries stationary_change_series(const ChangeSpec& change, int n,
                                           RngStream& rng) {
  // Start from the pre-change stationary regime: burn in under `pre`, then
  // run the switching dynamics on the same stream.
  if (!change.pre.is_stable())
    throw std::invalid_argument("pre-change model must be stable for a stationary start");
  const ObservationSeries burn = simulate_stationary_on_stream(change.pre, 0, rng);
  return simulate_with_change_on_stream(change, n, burn.initial, rng);
}

}  // namespace

MonteCarloSummary empirical_size(const InarModel& model, int n, int replications,
                                 const TestConfig& config, std::uint64_t seed,
                                 int threads) {
  std::string why;
  if (!model.satisfies_stability_condition(&why))
    throw std::invalid_argument("size experiment needs the stability condition: " + why);
  return rejection_experiment(
      n, replications, model.lag_support(), config, seed, threads,
      [&](int len, RngStream& rng) {
        return simulate_stationary_on_stream(model, len, rng);
      });
}

MonteCarloSummary empirical_power(const ChangeSpec& change, int n,
                                  int replications, const TestConfig& config,
                                  std::uint64_t seed, int threads) {
  return rejection_experiment(
      n, replications, change.pre.lag_support(), config, seed, threads,
      [&](int len, RngStream& rng) {
        return stationary_change_series(change, len, rng);
      });
}

std::vector<QuantileRow> changepoint_error_quantiles(
    const ChangeSpec& change, const std::vector<int>& ns, int replications,
    ScanKind kind, int weight_lag, const std::vector<double>& probabilities,
    std::uint64_t seed, int threads) {
  if (replications < 1)
    throw std::invalid_argument("at least one replication required");
  for (double p : probabilities)
    if (!(p > 0.0 && p <= 1.0))
      throw std::invalid_argument("quantile probabilities must lie in (0,1]");

  std::vector<QuantileRow> rows;
  // Stream indices advance per (n, replica) pair so no two replicas anywhere
  // in the table share a stream.
  std::uint64_t stream_base = 0;
  for (int n : ns) {
    if (n < 1) throw std::invalid_argument("series length must be positive");
    const int tau_true = change.change_index(n);
    std::vector<double> errors((std::size_t)replications, 0.0);
    std::vector<std::uint8_t> ok((std::size_t)replications, 0);
    run_replicas(replications, threads, [&, n, tau_true](int r) {
      RngStream rng(seed, stream_base + (std::uint64_t)r);
      try {
        const ObservationSeries series = stationary_change_series(change, n, rng);
        const EstimationResult fit = cls_estimate(series, change.pre.lag_support());
        const Eigen::VectorXd w = scan_weights(series, weight_lag);
        const ChangePointEstimate est = changepoint_scan(fit.residuals, w, kind);
        errors[(std::size_t)r] = (double)(est.tau - tau_true);
        ok[(std::size_t)r] = 1;
      } catch (const std::exception&) {
        ok[(std::size_t)r] = 0;
      }
    });
    QuantileRow row;
    row.n = n;
    std::vector<double> sample;
    sample.reserve((std::size_t)replications);
    for (int r = 0; r < replications; ++r)
      if (ok[(std::size_t)r]) sample.push_back(errors[(std::size_t)r]);
    row.completed = (int)sample.size();
    row.failed = replications - row.completed;
    for (double p : probabilities)
      row.quantiles.push_back(sample.empty()
                                  ? std::numeric_limits<double>::quiet_NaN()
                                  : sample_quantile(sample, p));
    rows.push_back(std::move(row));
    stream_base += (std::uint64_t)replications;
  }
  return rows;
}

BridgeTailEstimate bridge_tail(TestKind kind, double x, int replications,
                               int grid_points, std::uint64_t seed, int threads) {
  if (replications < 1)
    throw std::invalid_argument("at least one replication required");
  if (grid_points < 2)
    throw std::invalid_argument("at least two grid points required");

  const double step_sd = std::sqrt(1.0 / (double)grid_points);
  std::vector<std::uint8_t> hit((std::size_t)replications, 0);
  run_replicas(replications, threads, [&](int r) {
    thread_local std::vector<double> wiener;
    wiener.assign((std::size_t)grid_points + 1, 0.0);
    RngStream rng(seed, (std::uint64_t)r);
    double w = 0.0;
    for (int i = 1; i <= grid_points; ++i) {
      w += step_sd * rng.normal();
      wiener[(std::size_t)i] = w;
    }
    const double w1 = wiener[(std::size_t)grid_points];
    double hi = 0.0, lo = 0.0;  // the bridge starts (and ends) at zero
    for (int i = 1; i < grid_points; ++i) {
      const double b = wiener[(std::size_t)i] - ((double)i / (double)grid_points) * w1;
      hi = std::max(hi, b);
      lo = std::min(lo, b);
    }
    double stat = 0.0;
    switch (kind) {
      case TestKind::OneSidedSup: stat = hi; break;
      case TestKind::OneSidedInf: stat = lo; break;
      case TestKind::TwoSided:    stat = std::max(hi, -lo); break;
      case TestKind::Epidemic:    stat = hi - lo; break;
    }
    const bool reject = (kind == TestKind::OneSidedInf) ? (stat <= -x) : (stat >= x);
    hit[(std::size_t)r] = reject ? 1 : 0;
  });

  BridgeTailEstimate est;
  est.replications = replications;
  est.grid_points = grid_points;
  int count = 0;
  for (std::uint8_t h : hit) count += h;
  est.estimate = (double)count / (double)replications;
  est.se = std::sqrt(est.estimate * (1.0 - est.estimate) / (double)replications);
  return est;
}

double sample_quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(p > 0.0 && p <= 1.0))
    throw std::invalid_argument("quantile probability must lie in (0,1]");
  std::size_t rank = (std::size_t)std::ceil(p * (double)xs.size());
  rank = std::clamp<std::size_t>(rank, 1, xs.size());
  std::nth_element(xs.begin(), xs.begin() + (long)(rank - 1), xs.end());
  return xs[rank - 1];
}

}  // namespace inar
