#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "inar/changepoint.hpp"
#include "inar/cusum.hpp"
#include "inar/errors.hpp"
#include "inar/io.hpp"
#include "inar/model.hpp"
#include "inar/montecarlo.hpp"

using nlohmann::json;
using namespace inar;

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(std::string(what) + ": cannot parse '" + tok + "' as a number");
    }
  }
  if (out.empty()) fail(std::string(what) + ": empty list");
  return out;
}

// Lag set from either --p (all lags 1..p) or an explicit --lags list.
std::vector<int> resolve_lags(int p, const std::vector<int>& lags) {
  if (p > 0 && !lags.empty()) fail("give either --p or --lags, not both");
  if (p > 0) {
    std::vector<int> all((std::size_t)p);
    std::iota(all.begin(), all.end(), 1);
    return all;
  }
  if (lags.empty()) fail("one of --p or --lags is required");
  return lags;
}

InnovationSpec parse_innovation(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    fail("--innov needs the form family:params, e.g. poisson:1.0");
  const std::string family = text.substr(0, colon);
  const std::string params = text.substr(colon + 1);
  if (family == "poisson") {
    const auto v = parse_double_list(params, "--innov poisson");
    if (v.size() != 1) fail("poisson takes one parameter (the mean)");
    return InnovationSpec::poisson(v[0]);
  }
  if (family == "negbinom") {
    const auto v = parse_double_list(params, "--innov negbinom");
    if (v.size() != 2) fail("negbinom takes mean,variance");
    return InnovationSpec::negative_binomial(v[0], v[1]);
  }
  if (family == "degenerate") {
    const auto v = parse_double_list(params, "--innov degenerate");
    if (v.size() != 1 || v[0] < 0.0 || v[0] != std::floor(v[0]))
      fail("degenerate takes one nonnegative integer");
    return InnovationSpec::degenerate((std::uint32_t)v[0]);
  }
  if (family == "pmf")
    return InnovationSpec::finite_pmf(parse_double_list(params, "--innov pmf"));
  fail("unknown innovation family '" + family +
       "' (expected poisson, negbinom, degenerate, or pmf)");
}

const char* family_name(InnovationFamily f) {
  switch (f) {
    case InnovationFamily::Poisson:          return "poisson";
    case InnovationFamily::NegativeBinomial: return "negbinom";
    case InnovationFamily::Degenerate:       return "degenerate";
    case InnovationFamily::FinitePmf:        return "pmf";
  }
  return "?";
}

json innovation_json(const InnovationSpec& innov) {
  json j{{"family", family_name(innov.family())},
         {"mean", innov.mean()},
         {"variance", innov.variance()}};
  if (innov.family() == InnovationFamily::FinitePmf) j["masses"] = innov.masses();
  return j;
}

// Post-change model from "rho=...,mu=...,alphaK=..." overrides on `pre`.
ChangeSpec parse_change(const std::string& text, const InarModel& pre) {
  std::optional<double> rho;
  std::vector<double> coeffs = pre.alpha_on_support();
  InnovationSpec innov = pre.innovation();
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      fail("--change items must look like key=value, got '" + tok + "'");
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
      fail("--change " + key + ": cannot parse '" + val + "' as a number");
    }
    if (key == "rho") {
      rho = v;
    } else if (key == "mu") {
      switch (pre.innovation().family()) {
        case InnovationFamily::Poisson:
          innov = InnovationSpec::poisson(v);
          break;
        case InnovationFamily::Degenerate:
          if (v < 0.0 || v != std::floor(v))
            fail("--change mu for a degenerate innovation must be a "
                 "nonnegative integer");
          innov = InnovationSpec::degenerate((std::uint32_t)v);
          break;
        default:
          fail("--change mu= is supported for poisson and degenerate "
               "innovations only");
      }
    } else if (key.rfind("alpha", 0) == 0 && key.size() > 5) {
      int lag = 0;
      try {
        std::size_t used = 0;
        lag = std::stoi(key.substr(5), &used);
        if (used != key.size() - 5) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        fail("--change: bad coefficient key '" + key + "'");
      }
      const auto& support = pre.lag_support();
      const auto it = std::find(support.begin(), support.end(), lag);
      if (it == support.end())
        fail("--change alpha" + std::to_string(lag) +
             ": lag not in the model's support");
      coeffs[(std::size_t)(it - support.begin())] = v;
    } else {
      fail("--change: unknown key '" + key + "'");
    }
  }
  if (!rho) fail("--change needs rho=<fraction in (0,1)>");
  const InarModel post(pre.order(), pre.lag_support(), coeffs, innov);
  return ChangeSpec(*rho, pre, post);
}

// Test kinds on the command line. "one-sided" (both directions at once) is a
// reporting convenience of `test`; experiments need one functional, so they
// take the explicit directional names.
enum class CliKind { OneSidedBoth, Decrease, Increase, TwoSided, Epidemic };

CliKind parse_kind(const std::string& s, bool allow_both) {
  if (s == "one-sided") {
    if (allow_both) return CliKind::OneSidedBoth;
    fail("--kind one-sided is ambiguous here; use one-sided-decrease or "
         "one-sided-increase");
  }
  if (s == "one-sided-decrease") return CliKind::Decrease;
  if (s == "one-sided-increase") return CliKind::Increase;
  if (s == "two-sided") return CliKind::TwoSided;
  if (s == "epidemic") return CliKind::Epidemic;
  fail("unknown --kind '" + s +
       "' (expected one-sided, one-sided-decrease, one-sided-increase, "
       "two-sided, or epidemic)");
}

TestKind to_test_kind(CliKind k) {
  switch (k) {
    case CliKind::Decrease: return TestKind::OneSidedSup;
    case CliKind::Increase: return TestKind::OneSidedInf;
    case CliKind::TwoSided: return TestKind::TwoSided;
    case CliKind::Epidemic: return TestKind::Epidemic;
    default: break;
  }
  fail("internal: no single test kind for this option");
}

ScanKind parse_scan(const std::string& s) {
  if (s == "max") return ScanKind::ArgmaxSum;
  if (s == "min") return ScanKind::ArgminSum;
  if (s == "max-abs") return ScanKind::ArgmaxAbsSum;
  fail("unknown --scan '" + s + "' (expected max, min, or max-abs)");
}

std::string role_label(const EstimationResult& fit, int component) {
  if (component <= (int)fit.lag_support.size())
    return "alpha[lag " +
           std::to_string(fit.lag_support[(std::size_t)(component - 1)]) + "]";
  return "mu";
}

json fit_json(const EstimationResult& fit) {
  json alphas = json::array();
  for (int i = 0; i + 1 < fit.dimension(); ++i) alphas.push_back(fit.theta(i));
  return json{{"lags", fit.lag_support},
              {"alpha", alphas},
              {"mu", fit.mu_hat()},
              {"sigma2", fit.sigma2},
              {"sigma2_negative", fit.sigma2_negative},
              {"alpha_sum_warning", fit.alpha_sum_warning},
              {"n", fit.n()},
              {"q_condition", fit.q_condition}};
}

json path_json(const CusumPath& path) {
  json rows = json::array();
  for (int k = 0; k <= path.n(); ++k) {
    json row = json::array();
    for (int c = 0; c < path.dimension(); ++c) row.push_back(path.values(k, c));
    rows.push_back(std::move(row));
  }
  return json{{"rows", path.n() + 1},
              {"dimension", path.dimension()},
              {"values", std::move(rows)}};
}

json envelope(const std::string& command, json inputs) {
  return json{{"schema_version", kSchemaVersion},
              {"command", command},
              {"inputs", std::move(inputs)}};
}

void emit(const json& doc, std::ostream& out) { out << doc.dump(2) << "\n"; }

json component_entry(const EstimationResult& fit, const ComponentDecision& dec,
                     const std::string& kind_name) {
  json e{{"component", dec.component},
         {"role", role_label(fit, dec.component)},
         {"kind", kind_name},
         {"stat", dec.stat},
         {"critical", dec.critical},
         {"reject", dec.reject}};
  e["direction"] = dec.direction.empty() ? json() : json(dec.direction);
  return e;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  int p = 0;
  std::vector<int> lags;
  std::string coeffs;
  std::string innov;
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string initial;
  bool stationary = false;
  std::string change;
};

int run_simulate(const SimulateArgs& a) {
  const std::vector<int> lags = resolve_lags(a.p, a.lags);
  const std::vector<double> coeffs = parse_double_list(a.coeffs, "--coeffs");
  if (coeffs.size() != lags.size())
    fail("--coeffs must list one coefficient per lag (" +
         std::to_string(lags.size()) + " expected)");
  const InarModel model(a.p, lags, coeffs, parse_innovation(a.innov));
  const int order = model.order();
  if (a.n <= order)
    fail("--n counts all rows including the " + std::to_string(order) +
         " starting values; need --n > " + std::to_string(order));
  const int n_obs = a.n - order;

  std::optional<ChangeSpec> change;
  if (!a.change.empty()) change = parse_change(a.change, model);

  if (!a.initial.empty() && a.stationary)
    fail("give either --initial or --stationary, not both");

  ObservationSeries series;
  if (!a.initial.empty()) {
    const auto given = parse_double_list(a.initial, "--initial");
    std::vector<std::uint32_t> window;
    for (double v : given) {
      if (v < 0.0 || v != std::floor(v))
        fail("--initial values must be nonnegative integers");
      window.push_back((std::uint32_t)v);
    }
    if ((int)window.size() != order)
      fail("--initial needs exactly " + std::to_string(order) + " values");
    series = change ? simulate_with_change(*change, n_obs, window, a.seed)
                    : simulate(model, n_obs, window, a.seed);
  } else {
    // Default start: the (pre-change) stationary regime.
    std::string why;
    if (!model.satisfies_stability_condition(&why))
      fail("model is unstable (" + why +
           "); a stationary start is impossible, give --initial");
    RngStream rng(a.seed, 0);
    if (change) {
      const ObservationSeries burn = simulate_stationary_on_stream(model, 0, rng);
      series = simulate_with_change_on_stream(*change, n_obs, burn.initial, rng);
    } else {
      series = simulate_stationary_on_stream(model, n_obs, rng);
    }
  }

  std::vector<std::uint32_t> rows = series.initial;
  rows.insert(rows.end(), series.values.begin(), series.values.end());

  json inputs{{"seed", a.seed},
              {"n", a.n},
              {"lags", lags},
              {"coeffs", coeffs},
              {"innov", a.innov},
              {"start", a.initial.empty() ? "stationary" : a.initial},
              {"change", a.change.empty() ? json() : json(a.change)},
              {"out", a.out.empty() ? json() : json(a.out)},
              {"file", json()}};
  json echo = envelope("simulate", std::move(inputs));
  echo["model"] = json{{"order", order},
                       {"lags", model.lag_support()},
                       {"alpha", model.alpha_on_support()},
                       {"innovation", innovation_json(model.innovation())},
                       {"stable", model.is_stable()}};
  echo["rows"] = a.n;
  echo["observations"] = n_obs;
  if (change) {
    const int tau = change->change_index(n_obs);
    echo["change"] = json{{"rho", change->rho},
                          {"index", tau},
                          {"raw_row", tau + order},
                          {"post_alpha", change->post.alpha_on_support()},
                          {"post_innovation",
                           innovation_json(change->post.innovation())}};
  } else {
    echo["change"] = json();
  }

  if (a.out.empty()) {
    // CSV is the primary artifact on stdout; the echo moves to stderr.
    std::cout << "count\n";
    for (std::uint32_t v : rows) std::cout << v << "\n";
    emit(echo, std::cerr);
  } else {
    write_count_csv_file(a.out, rows, true);
    emit(echo, std::cout);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// test

struct TestArgs {
  std::string file;
  int p = 0;
  std::vector<int> lags;
  double alpha = 0.05;
  std::string kind = "two-sided";
  std::vector<int> components;
};

int run_test_cmd(const TestArgs& a) {
  const std::vector<int> lags = resolve_lags(a.p, a.lags);
  const auto raw = read_count_csv_file(a.file);
  const ObservationSeries series = split_series(raw, lags.back());
  const EstimationResult fit = cls_estimate(series, lags);
  const CusumPath path = cusum_path(series, fit);

  const CliKind kind = parse_kind(a.kind, true);
  TestConfig config;
  config.monitored = a.components;
  config.overall_alpha = a.alpha;

  json comps = json::array();
  bool reject = false;
  double alpha_star_used = 0.0;
  if (kind == CliKind::OneSidedBoth) {
    for (TestKind tk : {TestKind::OneSidedSup, TestKind::OneSidedInf}) {
      config.kind = tk;
      const TestReport rep = evaluate_path(path, fit, config);
      alpha_star_used = rep.alpha_star_used;
      reject = reject || rep.reject;
      const char* name = (tk == TestKind::OneSidedSup) ? "one-sided-decrease"
                                                       : "one-sided-increase";
      for (const auto& dec : rep.components)
        comps.push_back(component_entry(fit, dec, name));
    }
  } else {
    config.kind = to_test_kind(kind);
    const TestReport rep = evaluate_path(path, fit, config);
    alpha_star_used = rep.alpha_star_used;
    reject = rep.reject;
    for (const auto& dec : rep.components)
      comps.push_back(component_entry(fit, dec, a.kind));
  }

  json inputs{{"file", a.file},
              {"seed", json()},
              {"lags", lags},
              {"kind", a.kind},
              {"alpha", a.alpha},
              {"components", a.components.empty() ? json() : json(a.components)}};
  json doc = envelope("test", std::move(inputs));
  doc["data"] = json{{"raw_rows", (int)raw.size()},
                     {"initial", series.max_initial_lag()},
                     {"n", series.n()}};
  doc["fit"] = fit_json(fit);
  doc["test"] = json{{"kind", a.kind},
                     {"overall_alpha", a.alpha},
                     {"alpha_star", alpha_star_used},
                     {"reject", reject},
                     {"components", std::move(comps)}};
  doc["path"] = path_json(path);
  emit(doc, std::cout);
  return reject ? 1 : 0;
}

// ---------------------------------------------------------------------------
// changepoint

struct ChangepointArgs {
  std::string file;
  int p = 0;
  std::vector<int> lags;
  std::string scan = "max-abs";
  int weight_lag = 0;
};

int run_changepoint_cmd(const ChangepointArgs& a) {
  const std::vector<int> lags = resolve_lags(a.p, a.lags);
  const auto raw = read_count_csv_file(a.file);
  const ObservationSeries series = split_series(raw, lags.back());
  const EstimationResult fit = cls_estimate(series, lags);
  const ChangePointEstimate est = changepoint_scan(
      fit.residuals, scan_weights(series, a.weight_lag), parse_scan(a.scan));

  json sums = json::array();
  for (int k = 0; k < est.partial_sums.size(); ++k)
    sums.push_back(est.partial_sums(k));

  json inputs{{"file", a.file},
              {"seed", json()},
              {"lags", lags},
              {"scan", a.scan},
              {"weight_lag", a.weight_lag}};
  json doc = envelope("changepoint", std::move(inputs));
  doc["data"] = json{{"raw_rows", (int)raw.size()},
                     {"initial", series.max_initial_lag()},
                     {"n", series.n()}};
  doc["fit"] = fit_json(fit);
  doc["changepoint"] = json{{"scan", a.scan},
                            {"weight_lag", a.weight_lag},
                            {"tau", est.tau},
                            {"raw_row", est.tau + series.max_initial_lag()},
                            {"extremum", est.extremum},
                            {"partial_sums", std::move(sums)}};
  emit(doc, std::cout);
  return 0;
}

// ---------------------------------------------------------------------------
// montecarlo

struct MonteCarloArgs {
  std::string mode;
  int p = 0;
  std::vector<int> lags;
  std::string coeffs;
  std::string innov;
  int n = 0;
  int reps = 0;
  double alpha = 0.05;
  std::string kind = "two-sided";
  std::vector<int> components;
  std::string change;
  std::vector<int> ns;
  std::string probs = "0.1,0.5,0.9";
  std::string scan = "max-abs";
  int weight_lag = 0;
  double x = 0.0;
  int grid = 2000;
  std::uint64_t seed = 0;
  int threads = 0;
};

json summary_json(const MonteCarloSummary& s) {
  return json{{"replications", s.replications},
              {"completed", s.completed},
              {"failed", s.failed},
              {"failure_kinds", s.failure_kinds},
              {"rejection_rate", s.rejection_rate},
              {"rejection_se", s.rejection_se}};
}

InarModel model_from(const MonteCarloArgs& a) {
  if (a.coeffs.empty()) fail("--coeffs is required for this mode");
  if (a.innov.empty()) fail("--innov is required for this mode");
  const std::vector<int> lags = resolve_lags(a.p, a.lags);
  const std::vector<double> coeffs = parse_double_list(a.coeffs, "--coeffs");
  if (coeffs.size() != lags.size())
    fail("--coeffs must list one coefficient per lag (" +
         std::to_string(lags.size()) + " expected)");
  return InarModel(a.p, lags, coeffs, parse_innovation(a.innov));
}

int run_montecarlo_cmd(const MonteCarloArgs& a) {
  json inputs{{"file", json()},
              {"seed", a.seed},
              {"mode", a.mode},
              {"threads", a.threads}};
  json doc = envelope("montecarlo", json());
  json result;

  if (a.mode == "size" || a.mode == "power") {
    const InarModel model = model_from(a);
    if (a.n < 1) fail("--n (series length) is required");
    TestConfig config;
    config.kind = to_test_kind(parse_kind(a.kind, false));
    config.overall_alpha = a.alpha;
    config.monitored = a.components;
    inputs["n"] = a.n;
    inputs["reps"] = a.reps;
    inputs["alpha"] = a.alpha;
    inputs["kind"] = a.kind;
    inputs["components"] =
        a.components.empty() ? json() : json(a.components);
    inputs["lags"] = model.lag_support();
    inputs["coeffs"] = model.alpha_on_support();
    inputs["innov"] = a.innov;
    if (a.mode == "size") {
      if (!a.change.empty()) fail("--change makes no sense for --mode size");
      inputs["change"] = json();
      result = summary_json(
          empirical_size(model, a.n, a.reps, config, a.seed, a.threads));
    } else {
      if (a.change.empty()) fail("--mode power needs --change");
      const ChangeSpec change = parse_change(a.change, model);
      inputs["change"] = a.change;
      result = summary_json(
          empirical_power(change, a.n, a.reps, config, a.seed, a.threads));
    }
  } else if (a.mode == "quantiles") {
    const InarModel model = model_from(a);
    if (a.change.empty()) fail("--mode quantiles needs --change");
    if (a.ns.empty()) fail("--mode quantiles needs --ns");
    const ChangeSpec change = parse_change(a.change, model);
    const std::vector<double> probs = parse_double_list(a.probs, "--probs");
    inputs["reps"] = a.reps;
    inputs["ns"] = a.ns;
    inputs["probs"] = probs;
    inputs["scan"] = a.scan;
    inputs["weight_lag"] = a.weight_lag;
    inputs["lags"] = model.lag_support();
    inputs["coeffs"] = model.alpha_on_support();
    inputs["innov"] = a.innov;
    inputs["change"] = a.change;
    const auto rows = changepoint_error_quantiles(
        change, a.ns, a.reps, parse_scan(a.scan), a.weight_lag, probs, a.seed,
        a.threads);
    json table = json::array();
    for (const auto& row : rows)
      table.push_back(json{{"n", row.n},
                           {"completed", row.completed},
                           {"failed", row.failed},
                           {"quantiles", row.quantiles}});
    result = json{{"probabilities", probs}, {"rows", std::move(table)}};
  } else if (a.mode == "bridge") {
    if (!(a.x > 0.0)) fail("--mode bridge needs --x > 0");
    const TestKind kind = to_test_kind(parse_kind(a.kind, false));
    inputs["reps"] = a.reps;
    inputs["kind"] = a.kind;
    inputs["x"] = a.x;
    inputs["grid"] = a.grid;
    const auto est = bridge_tail(kind, a.x, a.reps, a.grid, a.seed, a.threads);
    result = json{{"kind", a.kind},
                  {"x", a.x},
                  {"estimate", est.estimate},
                  {"se", est.se},
                  {"replications", est.replications},
                  {"grid_points", est.grid_points}};
  } else {
    fail("unknown --mode '" + a.mode +
         "' (expected size, power, quantiles, or bridge)");
  }

  doc["inputs"] = std::move(inputs);
  doc["mode"] = a.mode;
  doc["result"] = std::move(result);
  emit(doc, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Count autoregression toolkit: simulation, fitting, "
               "retrospective change tests, change-point location, and "
               "Monte Carlo experiments"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* s = app.add_subcommand(
      "simulate", "Generate a count series CSV (optionally with one change)");
  s->add_option("--p", sim.p, "Model order; coefficients cover lags 1..p");
  s->add_option("--lags", sim.lags, "Comma-separated lag set, e.g. 1,12")
      ->delimiter(',');
  s->add_option("--coeffs,--alpha", sim.coeffs,
                "Comma-separated thinning coefficients, one per lag")
      ->required();
  s->add_option("--innov", sim.innov,
                "Innovation family: poisson:M, negbinom:M,V, degenerate:K, "
                "or pmf:p0,p1,...")
      ->required();
  s->add_option("--n", sim.n,
                "Total rows to write (starting window included)")
      ->required();
  s->add_option("--seed", sim.seed, "RNG seed (default 0)");
  s->add_option("--out", sim.out, "Output CSV path (default: stdout)");
  s->add_option("--initial", sim.initial,
                "Starting window, oldest first (default: stationary start)");
  s->add_flag("--stationary", sim.stationary,
              "Start from the stationary regime (the default)");
  s->add_option("--change", sim.change,
                "Mid-series change, e.g. rho=0.5,mu=1 or rho=0.3,alpha1=0.2");

  TestArgs tst;
  auto* t = app.add_subcommand(
      "test", "Fit a series and test it for a structural change");
  t->add_option("--file", tst.file, "Input CSV")->required();
  t->add_option("--p", tst.p, "Model order; fits lags 1..p");
  t->add_option("--lags", tst.lags, "Comma-separated lag set")->delimiter(',');
  t->add_option("--alpha", tst.alpha, "Overall significance level (default 0.05)");
  t->add_option("--kind", tst.kind,
                "one-sided | one-sided-decrease | one-sided-increase | "
                "two-sided | epidemic (default two-sided)");
  t->add_option("--components", tst.components,
                "1-based coordinates to monitor (default: all)")
      ->delimiter(',');

  ChangepointArgs cp;
  auto* c = app.add_subcommand(
      "changepoint", "Locate the most likely change point in a series");
  c->add_option("--file", cp.file, "Input CSV")->required();
  c->add_option("--p", cp.p, "Model order; fits lags 1..p");
  c->add_option("--lags", cp.lags, "Comma-separated lag set")->delimiter(',');
  c->add_option("--scan", cp.scan, "max | min | max-abs (default max-abs)");
  c->add_option("--weight-lag", cp.weight_lag,
                "Scan weight lag: 0 = constant weights (default), q > 0 "
                "weights by the lag-q counts");

  MonteCarloArgs mc;
  auto* m = app.add_subcommand("montecarlo",
                               "Empirical size/power, change-point error "
                               "quantiles, or simulated bridge tails");
  m->add_option("--mode", mc.mode, "size | power | quantiles | bridge")
      ->required();
  m->add_option("--p", mc.p, "Model order; coefficients cover lags 1..p");
  m->add_option("--lags", mc.lags, "Comma-separated lag set")->delimiter(',');
  m->add_option("--coeffs", mc.coeffs, "Comma-separated thinning coefficients");
  m->add_option("--innov", mc.innov, "Innovation family (as in simulate)");
  m->add_option("--n", mc.n, "Series length per replica");
  m->add_option("--reps", mc.reps, "Number of replicas")->required();
  m->add_option("--alpha", mc.alpha, "Overall significance level (default 0.05)");
  m->add_option("--kind", mc.kind,
                "one-sided-decrease | one-sided-increase | two-sided | "
                "epidemic (default two-sided)");
  m->add_option("--components", mc.components,
                "1-based coordinates to monitor (default: all)")
      ->delimiter(',');
  m->add_option("--change", mc.change, "Change spec (as in simulate)");
  m->add_option("--ns", mc.ns, "Comma-separated series lengths (quantiles mode)")
      ->delimiter(',');
  m->add_option("--probs", mc.probs,
                "Quantile probabilities (default 0.1,0.5,0.9)");
  m->add_option("--scan", mc.scan, "Scan kind for quantiles mode");
  m->add_option("--weight-lag", mc.weight_lag, "Scan weight lag");
  m->add_option("--x", mc.x, "Threshold for bridge mode");
  m->add_option("--grid", mc.grid, "Bridge grid points (default 2000)");
  m->add_option("--seed", mc.seed, "RNG seed (default 0)");
  m->add_option("--threads", mc.threads,
                "Worker threads (default 0 = all available)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(s)) return run_simulate(sim);
    if (app.got_subcommand(t)) return run_test_cmd(tst);
    if (app.got_subcommand(c)) return run_changepoint_cmd(cp);
    if (app.got_subcommand(m)) return run_montecarlo_cmd(mc);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const SingularDesign& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: the regression design is numerically singular; "
                 "constant or near-constant series cannot be fit (condition "
              << e.condition() << ")\n";
    return 2;
  } catch (const NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what()
              << "\nhint: the information matrix is not positive definite; "
                 "the series may be too short or too sparse for these lags\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
