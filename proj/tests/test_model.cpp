#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "inar/model.hpp"
#include "support/oracles.hpp"

using namespace inar;

TEST_SUITE_BEGIN("model");

// ---------------------------------------------------------------------------
// Innovation specifications

TEST_CASE("innovation moments are exact by construction") {
  const auto pois = InnovationSpec::poisson(2.5);
  CHECK(pois.mean() == 2.5);
  CHECK(pois.variance() == 2.5);

  const auto nb = InnovationSpec::negative_binomial(2.0, 5.0);
  CHECK(nb.mean() == 2.0);
  CHECK(nb.variance() == 5.0);

  const auto deg = InnovationSpec::degenerate(3);
  CHECK(deg.mean() == 3.0);
  CHECK(deg.variance() == 0.0);

  // Hand summation: mean = 0*0.2 + 1*0.5 + 2*0.3 = 1.1,
  // second moment = 0.5 + 4*0.3 = 1.7, variance = 1.7 - 1.21 = 0.49.
  const auto pmf = InnovationSpec::finite_pmf({0.2, 0.5, 0.3});
  CHECK(pmf.mean() == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(pmf.variance() == doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("innovation validation rejects malformed parameters") {
  CHECK_THROWS_AS(InnovationSpec::poisson(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::negative_binomial(2.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::negative_binomial(2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::negative_binomial(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::finite_pmf({}), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::finite_pmf({0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(InnovationSpec::finite_pmf({1.2, -0.2}), std::invalid_argument);
}

TEST_CASE("innovation sampling reproduces the declared moments") {
  const int n = 200000;
  const auto check_moments = [&](const InnovationSpec& s, double mean_tol,
                                 double var_tol) {
    RngStream rng(11, 0);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = s.sample(rng);
      s1 += x;
      s2 += x * x;
    }
    const double mean = s1 / n;
    CHECK(mean == doctest::Approx(s.mean()).epsilon(mean_tol));
    if (s.variance() > 0.0)
      CHECK(s2 / n - mean * mean ==
            doctest::Approx(s.variance()).epsilon(var_tol));
  };
  check_moments(InnovationSpec::poisson(1.0), 0.01, 0.03);
  check_moments(InnovationSpec::negative_binomial(2.0, 5.0), 0.01, 0.04);
  check_moments(InnovationSpec::finite_pmf({0.2, 0.5, 0.3}), 0.01, 0.04);

  RngStream rng(12, 0);
  for (int i = 0; i < 100; ++i) CHECK(InnovationSpec::degenerate(4).sample(rng) == 4);
}

// ---------------------------------------------------------------------------
// Model construction

TEST_CASE("full coefficient vector infers the lag support from nonzeros") {
  const InarModel m({0.0, 0.4}, InnovationSpec::poisson(1.0));
  CHECK(m.order() == 2);
  CHECK(m.lag_support() == std::vector<int>{2});
  CHECK(m.alpha(1) == 0.0);
  CHECK(m.alpha(2) == 0.4);

  const InarModel zeros({0.0, 0.0, 0.0}, InnovationSpec::poisson(1.0));
  CHECK(zeros.lag_support() == std::vector<int>{1});
  CHECK(zeros.alpha_sum() == 0.0);
}

TEST_CASE("sparse construction places coefficients on their lags") {
  const InarModel m(0, {1, 12}, {0.5, 0.3}, InnovationSpec::poisson(9.0));
  CHECK(m.order() == 12);
  CHECK(m.alpha(1) == 0.5);
  CHECK(m.alpha(12) == 0.3);
  for (int lag = 2; lag <= 11; ++lag) CHECK(m.alpha(lag) == 0.0);
  CHECK(m.alpha_sum() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(m.alpha_on_support() == std::vector<double>{0.5, 0.3});

  const InarModel padded(5, {2}, {0.4}, InnovationSpec::poisson(1.0));
  CHECK(padded.order() == 5);
}

TEST_CASE("model validation rejects bad coefficients and supports") {
  const auto innov = InnovationSpec::poisson(1.0);
  CHECK_THROWS_AS(InarModel({1.2}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel({-0.1}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel(0, {}, {}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel(0, {2, 1}, {0.1, 0.2}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel(0, {1, 1}, {0.1, 0.2}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel(0, {0}, {0.1}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel(0, {1}, {0.1, 0.2}, innov), std::invalid_argument);
  CHECK_THROWS_AS(InarModel({}, innov), std::invalid_argument);
  // Coefficients summing past one are allowed (unstable but simulable).
  CHECK_NOTHROW(InarModel({0.8, 0.6}, innov));
}

TEST_CASE("stability condition reports each failure reason") {
  std::string why;
  CHECK(InarModel({0.3}, InnovationSpec::poisson(1.0))
            .satisfies_stability_condition(&why));

  CHECK_FALSE(InarModel({0.6, 0.4}, InnovationSpec::poisson(1.0))
                  .satisfies_stability_condition(&why));
  CHECK(why.find(">= 1") != std::string::npos);

  CHECK_FALSE(InarModel({0.3}, InnovationSpec::degenerate(0))
                  .satisfies_stability_condition(&why));
  CHECK(why.find("mean") != std::string::npos);

  // All-zero coefficients with a degenerate innovation: a constant series.
  CHECK_FALSE(InarModel({0.0}, InnovationSpec::degenerate(2))
                  .satisfies_stability_condition(&why));
  CHECK(why.find("constant") != std::string::npos);

  // All-zero coefficients with a random innovation are fine.
  CHECK(InarModel({0.0}, InnovationSpec::poisson(1.0))
            .satisfies_stability_condition(&why));
}

TEST_CASE("observation series lag lookup crosses into the starting window") {
  ObservationSeries s;
  s.initial = {7, 9};
  s.values = {3, 4, 5};
  CHECK(s.lagged(1, 1) == 9);  // X_0
  CHECK(s.lagged(1, 2) == 7);  // X_{-1}
  CHECK(s.lagged(2, 1) == 3);
  CHECK(s.lagged(3, 2) == 3);
  CHECK(s.lagged(3, 1) == 4);
  CHECK(s.n() == 3);
  CHECK(s.max_initial_lag() == 2);
}

// ---------------------------------------------------------------------------
// Change specification

TEST_CASE("change specification validates its pieces") {
  const InarModel a({0.3}, InnovationSpec::poisson(2.0));
  const InarModel b({0.3}, InnovationSpec::poisson(1.0));
  const InarModel wide({0.2, 0.1}, InnovationSpec::poisson(1.0));
  CHECK_NOTHROW(ChangeSpec(0.5, a, b));
  CHECK_THROWS_AS(ChangeSpec(0.0, a, b), std::invalid_argument);
  CHECK_THROWS_AS(ChangeSpec(1.0, a, b), std::invalid_argument);
  CHECK_THROWS_AS(ChangeSpec(0.5, a, wide), std::invalid_argument);
}

TEST_CASE("change index floors the fraction and never hits zero") {
  const InarModel m({0.3}, InnovationSpec::poisson(2.0));
  const ChangeSpec c5(0.5, m, m);
  CHECK(c5.change_index(1000) == 500);
  CHECK(c5.change_index(3) == 1);
  const ChangeSpec c3(0.3, m, m);
  CHECK(c3.change_index(10) == 3);  // 0.3 is inexact in binary; must not drop to 2
  CHECK(c3.change_index(7) == 2);
  const ChangeSpec tiny(0.05, m, m);
  CHECK(tiny.change_index(10) == 1);  // floor would give 0
}

// ---------------------------------------------------------------------------
// Simulation

TEST_CASE("simulation is reproducible and respects the seed") {
  const InarModel m({0.4}, InnovationSpec::poisson(1.5));
  const auto a = simulate(m, 200, {2}, 77);
  const auto b = simulate(m, 200, {2}, 77);
  const auto c = simulate(m, 200, {2}, 78);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);
  CHECK(a.initial == std::vector<std::uint32_t>{2});
  CHECK(a.n() == 200);
}

TEST_CASE("simulate validates the starting window and length") {
  const InarModel m({0.4, 0.1}, InnovationSpec::poisson(1.0));
  CHECK_THROWS_AS(simulate(m, 10, {1}, 1), std::invalid_argument);
  CHECK_THROWS_AS(simulate(m, -1, {1, 1}, 1), std::invalid_argument);
  CHECK(simulate(m, 0, {1, 1}, 1).values.empty());
}

TEST_CASE("degenerate corners propagate deterministically") {
  // alpha = 1, no arrivals: the count is carried over unchanged.
  const InarModel keep({1.0}, InnovationSpec::degenerate(0));
  const auto kept = simulate(keep, 50, {5}, 3);
  for (auto v : kept.values) CHECK(v == 5);

  // alpha = 0, constant arrivals: the series is the constant.
  const InarModel fresh({0.0}, InnovationSpec::degenerate(2));
  const auto made = simulate(fresh, 50, {9}, 3);
  for (auto v : made.values) CHECK(v == 2);
}

TEST_CASE("a change spec with equal regimes reproduces plain simulation bitwise") {
  const InarModel m(0, {1, 3}, {0.3, 0.2}, InnovationSpec::poisson(1.2));
  const ChangeSpec none(0.4, m, m);
  const auto plain = simulate(m, 500, {1, 2, 1}, 99);
  const auto switched = simulate_with_change(none, 500, {1, 2, 1}, 99);
  CHECK(plain.values == switched.values);
}

TEST_CASE("the regime switches exactly after the change index") {
  // Deterministic regimes make the switch point visible in the raw values.
  const InarModel pre({0.0}, InnovationSpec::degenerate(1));
  const InarModel post({0.0}, InnovationSpec::degenerate(5));
  const ChangeSpec change(0.5, pre, post);
  const int n = 11;
  const int tau = change.change_index(n);
  CHECK(tau == 5);
  const auto s = simulate_with_change(change, n, {0}, 1);
  for (int k = 1; k <= n; ++k)
    CHECK(s.values[(std::size_t)(k - 1)] == (k <= tau ? 1u : 5u));
}

TEST_CASE("mean shift shows up in the segment averages") {
  const InarModel pre({0.0}, InnovationSpec::poisson(2.0));
  const InarModel post({0.0}, InnovationSpec::poisson(1.0));
  const ChangeSpec change(0.5, pre, post);
  const int n = 20000;
  const auto s = simulate_with_change(change, n, {0}, 5);
  double first = 0.0, second = 0.0;
  for (int k = 0; k < n / 2; ++k) first += s.values[(std::size_t)k];
  for (int k = n / 2; k < n; ++k) second += s.values[(std::size_t)k];
  CHECK(first / (n / 2) == doctest::Approx(2.0).epsilon(0.02));
  CHECK(second / (n / 2) == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("stationary simulation hits the stationary mean") {
  // Long-run average against mu / (1 - alpha): 0.94 / 0.7 = 1.3428...
  const InarModel m({0.3}, InnovationSpec::poisson(0.94));
  const auto s = simulate_stationary(m, 1000000, 13);
  const double mean =
      std::accumulate(s.values.begin(), s.values.end(), 0.0) / (double)s.n();
  CHECK(mean == doctest::Approx(0.94 / 0.7).epsilon(0.0075));
  CHECK(s.n() == 1000000);
  CHECK((int)s.initial.size() == 1);
}

TEST_CASE("stationary start needs a stable model and sized burn-in") {
  const InarModel bad({0.7, 0.5}, InnovationSpec::poisson(1.0));
  CHECK_THROWS_AS(simulate_stationary(bad, 10, 1), std::invalid_argument);
  CHECK(burn_in_length(1) == 500);
  CHECK(burn_in_length(12) == 600);
}

TEST_CASE("unstable coefficients make the mean grow") {
  const InarModel m({0.6, 0.45}, InnovationSpec::degenerate(1));
  const auto s = simulate(m, 300, {5, 5}, 21);
  double head = 0.0, tail = 0.0;
  for (int k = 0; k < 50; ++k) head += s.values[(std::size_t)k];
  for (int k = 250; k < 300; ++k) tail += s.values[(std::size_t)k];
  CHECK(tail > 10.0 * head);
}

TEST_CASE("runaway growth aborts instead of overflowing") {
  const InarModel m({1.0, 1.0}, InnovationSpec::degenerate(0));
  CHECK_THROWS_AS(simulate(m, 100, {1, 1}, 1), std::overflow_error);
}

// ---------------------------------------------------------------------------
// Companion matrix and moments

TEST_CASE("companion matrix layout and spectral radius") {
  const InarModel m({0.5, 0.3}, InnovationSpec::poisson(1.0));
  const Eigen::MatrixXd a = companion_matrix(m);
  REQUIRE(a.rows() == 2);
  CHECK(a(0, 0) == 0.5);
  CHECK(a(0, 1) == 0.3);
  CHECK(a(1, 0) == 1.0);
  CHECK(a(1, 1) == 0.0);

  CHECK(spectral_radius(companion_matrix(
            InarModel({0.3}, InnovationSpec::poisson(1.0)))) ==
        doctest::Approx(0.3).epsilon(1e-12));
  // Coefficients summing to one put an eigenvalue exactly on the unit circle.
  CHECK(spectral_radius(companion_matrix(
            InarModel({0.5, 0.5}, InnovationSpec::poisson(1.0)))) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stability of the companion matrix tracks the coefficient sum") {
  for (double s : {0.2, 0.7, 0.95, 0.999}) {
    const InarModel m({s / 2, s / 2}, InnovationSpec::poisson(1.0));
    CHECK(spectral_radius(companion_matrix(m)) < 1.0);
  }
}

TEST_CASE("first-order stationary moments match the scalar derivation") {
  const auto check_against_oracle = [](double a, const InnovationSpec& innov) {
    const InarModel m({a}, innov);
    const auto mo = stationary_moments(m);
    const auto ref = oracle::first_order_moments(a, innov.mean(), innov.variance());
    CHECK(mo.mean(0) == doctest::Approx((double)ref.mean).epsilon(1e-12));
    CHECK(mo.second_moment(0, 0) ==
          doctest::Approx((double)ref.second).epsilon(1e-12));
  };
  check_against_oracle(0.3, InnovationSpec::poisson(0.94));
  check_against_oracle(0.5, InnovationSpec::negative_binomial(1.0, 3.0));
  check_against_oracle(0.0, InnovationSpec::finite_pmf({0.2, 0.5, 0.3}));
}

TEST_CASE("independence case collapses to the plain innovation moments") {
  const InarModel m({0.0}, InnovationSpec::negative_binomial(2.0, 5.0));
  const auto mo = stationary_moments(m);
  CHECK(mo.mean(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(mo.second_moment(0, 0) == doctest::Approx(4.0 + 5.0).epsilon(1e-12));
}

TEST_CASE("second-order stationary moments agree with a long simulation") {
  const InarModel m({0.3, 0.2}, InnovationSpec::poisson(1.0));
  const auto mo = stationary_moments(m);
  const auto s = simulate_stationary(m, 2000000, 17);
  const int n = s.n();
  double mean = 0.0;
  for (auto v : s.values) mean += v;
  mean /= n;
  double c0 = 0.0, c1 = 0.0;
  for (int k = 1; k < n; ++k) {
    c0 += (double)s.values[(std::size_t)k] * (double)s.values[(std::size_t)k];
    c1 += (double)s.values[(std::size_t)k] * (double)s.values[(std::size_t)(k - 1)];
  }
  c0 /= (n - 1);
  c1 /= (n - 1);
  CHECK(mean == doctest::Approx(mo.mean(0)).epsilon(0.01));
  CHECK(c0 == doctest::Approx(mo.second_moment(0, 0)).epsilon(0.01));
  CHECK(c1 == doctest::Approx(mo.second_moment(0, 1)).epsilon(0.01));
}

TEST_CASE("stationary moments refuse unstable models") {
  const InarModel m({0.6, 0.4}, InnovationSpec::poisson(1.0));
  CHECK_THROWS_AS(stationary_moments(m), std::invalid_argument);
  CHECK_THROWS_AS(moment_matrix_C(m), std::invalid_argument);
}

TEST_CASE("moment matrix for independent Poisson counts") {
  // E X = 1, E X^2 = 2 for Poisson(1) with no carry-over.
  const Eigen::MatrixXd c =
      moment_matrix_C(InarModel({0.0}, InnovationSpec::poisson(1.0)));
  REQUIRE(c.rows() == 2);
  CHECK(c(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(c(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant process yields a singular moment matrix") {
  const InarModel m({0.0}, InnovationSpec::degenerate(2));
  const Eigen::MatrixXd c = moment_matrix_C(m);
  CHECK(c(0, 0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(c.determinant()) < 1e-9);
  CHECK_FALSE(m.satisfies_stability_condition());
}

TEST_CASE("autocovariances decay geometrically in the carry-over rate") {
  // For order one, cov(X_k, X_{k+h}) = alpha^h var(X).
  const InarModel m({0.5}, InnovationSpec::poisson(1.0));
  const auto mo = stationary_moments(m);
  const double var = mo.second_moment(0, 0) - mo.mean(0) * mo.mean(0);
  CHECK(var == doctest::Approx(2.0).epsilon(1e-9));

  const auto s = simulate_stationary(m, 2000000, 19);
  const int n = s.n();
  const double mean = std::accumulate(s.values.begin(), s.values.end(), 0.0) / n;
  for (int h = 0; h <= 6; ++h) {
    double c = 0.0;
    for (int k = 0; k + h < n; ++k)
      c += ((double)s.values[(std::size_t)k] - mean) *
           ((double)s.values[(std::size_t)(k + h)] - mean);
    c /= (n - h);
    CHECK(std::fabs(c - var * std::pow(0.5, h)) < 0.02);
  }
}

TEST_CASE("moment matrix restriction picks support rows plus the intercept") {
  Eigen::MatrixXd c(4, 4);
  c << 11, 12, 13, 14,
       12, 22, 23, 24,
       13, 23, 33, 34,
       14, 24, 34, 44;
  const Eigen::MatrixXd r = restrict_moment_matrix(c, {1, 3});
  REQUIRE(r.rows() == 3);
  CHECK(r(0, 0) == 11);
  CHECK(r(0, 1) == 13);
  CHECK(r(0, 2) == 14);
  CHECK(r(1, 1) == 33);
  CHECK(r(2, 2) == 44);
  CHECK_THROWS_AS(restrict_moment_matrix(c, {4}), std::invalid_argument);
}

TEST_SUITE_END();
