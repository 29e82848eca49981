#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gspec/bounds.hpp"
#include "gspec/csv.hpp"
#include "gspec/eigen.hpp"
#include "gspec/error.hpp"
#include "gspec/graphon.hpp"
#include "gspec/parallel.hpp"
#include "gspec/rng.hpp"
#include "gspec/sampling.hpp"
#include "gspec/spectra.hpp"
#include "gspec/stats.hpp"

// Monte Carlo and deterministic harnesses. Every harness derives one seed per
// (N, trial) from the master seed, runs trials independently (optionally in
// parallel) and reduces results in (N, trial) order, so reports do not depend
// on the thread count.

namespace gspec {

struct McConfig {
  CatalogSpec graphon = catalog::Constant{0.5};
  std::vector<std::size_t> n_list;
  double nu = 0.05;
  std::size_t trials = 1;
  std::uint64_t master_seed = 0;
  LatentMode mode = LatentMode::stochastic;
  double eigentol = kDefaultEigenTol;
  std::size_t threads = 1;

  void validate() const {
    detail::require(trials >= 1, "trials must be at least 1");
    detail::require(!n_list.empty(), "n_list must not be empty");
    for (std::size_t k = 0; k < n_list.size(); ++k) {
      detail::require(n_list[k] >= 1, "n_list entries must be at least 1");
      detail::require(k == 0 || n_list[k] > n_list[k - 1], "n_list must be strictly ascending");
    }
    detail::require(nu > 0.0 && nu < 1.0, "nu must lie in (0,1)");
    detail::require(eigentol > 0.0, "eigentol must be positive");
  }
};

inline const char* to_string(LatentMode m) {
  return m == LatentMode::stochastic ? "stochastic" : "deterministic";
}

// --------------------------------------------------------------------------
// Degree and eigenvalue concentration

struct TrialRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double max_deg_gap = 0.0;  // max_i |delta_(i) - delta_bar_(i)|
  double max_mu_gap = 0.0;   // max_i |mu_i - mu_bar_i|
  double mu2_gap = 0.0;      // |mu_2 - mu_bar_2|
  double d_bar_max = 0.0;
  double diff_norm_adj = 0.0;
  double diff_norm_deg = 0.0;
  bool deg_assumption = false;
  std::size_t chernoff_violations = 0;
  bool weyl_ok = true;
  bool eig_failed = false;

  bool violates_a = false;  // max_deg_gap > gamma
  bool violates_b = false;  // deg_assumption and max_mu_gap > phi
  bool violates_e = false;  // deg_assumption and ||A - Abar|| > sqrt(4 dbar log(2N/nu))
};

struct Lemma3Aggregate {
  std::size_t n = 0;
  std::size_t trials = 0;  // completed
  std::size_t eig_failures = 0;
  std::size_t weyl_failures = 0;
  std::size_t viol_a = 0;
  std::size_t assumption_count = 0;
  std::size_t viol_b = 0;
  std::size_t node_checks = 0;
  std::size_t viol_c = 0;
  std::size_t viol_e = 0;
  double freq_a = 0.0, freq_b = 0.0, freq_c = 0.0, freq_e = 0.0;
  Interval wilson_a, wilson_b, wilson_c, wilson_e;
  double freq_not_assumption = 0.0;
  bool cond_i = false, cond_ii = false, nu_in_range = false;
  double gamma = 0.0, phi = 0.0;
  double median_max_mu_gap = 0.0;
};

struct Lemma3Report {
  McConfig config;
  std::string graphon_name;
  std::vector<TrialRecord> trials;
  std::vector<Lemma3Aggregate> per_n;

  std::size_t total_weyl_failures() const {
    std::size_t k = 0;
    for (const auto& a : per_n) k += a.weyl_failures;
    return k;
  }
  std::size_t total_eig_failures() const {
    std::size_t k = 0;
    for (const auto& a : per_n) k += a.eig_failures;
    return k;
  }
};

namespace detail {

inline double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

inline TrialRecord lemma3_trial(const Graphon& g, const McConfig& cfg, std::size_t n,
                                std::size_t trial, const BoundSet& bounds) {
  TrialRecord r;
  r.n = n;
  r.trial = trial;
  r.seed = trial_seed(cfg.master_seed, n, trial);
  const GraphPair pair = sample_graph_pair(g, n, cfg.mode, r.seed);
  SpectralSummary s;
  try {
    s = summarize(pair, cfg.eigentol, SummaryOptions{.lap_diff_norm = false});
  } catch (const ConvergenceError&) {
    r.eig_failed = true;
    return r;
  }
  const double lg = log_2n_over_nu(n, cfg.nu);
  const double nd = static_cast<double>(n);

  r.max_deg_gap = max_abs_gap(s.deg_sorted, s.deg_bar_sorted);
  r.max_mu_gap = max_abs_gap(s.mu, s.mu_bar);
  r.mu2_gap = n >= 2 ? std::abs(s.mu[1] - s.mu_bar[1]) : 0.0;
  r.d_bar_max = s.d_bar_max;
  r.diff_norm_adj = s.diff_norm_adj;
  r.diff_norm_deg = s.diff_norm_deg;
  r.deg_assumption = deg_assumption_holds(s.d_bar_max, n, cfg.nu);

  const double node_bound = std::sqrt(lg * s.d_bar_max);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(s.degrees[i] - s.degrees_bar[i]) > node_bound) ++r.chernoff_violations;

  r.weyl_ok = r.max_mu_gap <= (s.diff_norm_deg + s.diff_norm_adj) / nd + 2.0 * cfg.eigentol;
  r.violates_a = r.max_deg_gap > bounds.gamma;
  r.violates_b = r.deg_assumption && r.max_mu_gap > bounds.phi;
  r.violates_e = r.deg_assumption && s.diff_norm_adj > std::sqrt(4.0 * s.d_bar_max * lg);
  return r;
}

}  // namespace detail

/// Checks the degree bound gamma(N), the conditional eigenvalue bound phi(N),
/// the per-node Chernoff event and the adjacency spectral-norm bound over
/// cfg.trials draws at each N, plus the unconditional triangle+Weyl chain.
inline Lemma3Report verify_lemma3(const McConfig& cfg) {
  cfg.validate();
  const Graphon g = make_catalog_graphon(cfg.graphon);
  const DegreeFunction deg = degree_function(g, 201);

  Lemma3Report report;
  report.config = cfg;
  report.graphon_name = g.name();
  for (std::size_t n : cfg.n_list) {
    const BoundSet bounds = compute_bounds(n, cfg.nu);
    std::vector<TrialRecord> recs(cfg.trials);
    parallel_for(cfg.trials, cfg.threads,
                 [&](std::size_t t) { recs[t] = detail::lemma3_trial(g, cfg, n, t, bounds); });

    Lemma3Aggregate a;
    a.n = n;
    a.gamma = bounds.gamma;
    a.phi = bounds.phi;
    const auto large = large_enough_n(g, n, cfg.nu, deg);
    a.cond_i = large.cond_i;
    a.cond_ii = large.cond_ii;
    a.nu_in_range = large.nu_in_range;
    std::vector<double> gaps;
    for (const auto& r : recs) {
      if (r.eig_failed) {
        ++a.eig_failures;
        continue;
      }
      ++a.trials;
      gaps.push_back(r.max_mu_gap);
      if (!r.weyl_ok) ++a.weyl_failures;
      if (r.violates_a) ++a.viol_a;
      if (r.deg_assumption) ++a.assumption_count;
      if (r.violates_b) ++a.viol_b;
      if (r.violates_e) ++a.viol_e;
      a.node_checks += n;
      a.viol_c += r.chernoff_violations;
    }
    a.freq_a = detail::safe_ratio(a.viol_a, a.trials);
    a.freq_b = detail::safe_ratio(a.viol_b, a.assumption_count);
    a.freq_c = detail::safe_ratio(a.viol_c, a.node_checks);
    a.freq_e = detail::safe_ratio(a.viol_e, a.assumption_count);
    a.wilson_a = wilson_interval(a.viol_a, a.trials);
    a.wilson_b = wilson_interval(a.viol_b, a.assumption_count);
    a.wilson_c = wilson_interval(a.viol_c, a.node_checks);
    a.wilson_e = wilson_interval(a.viol_e, a.assumption_count);
    a.freq_not_assumption = detail::safe_ratio(a.trials - a.assumption_count, a.trials);
    a.median_max_mu_gap = gaps.empty() ? 0.0 : median(gaps);
    report.per_n.push_back(a);
    for (auto& r : recs) report.trials.push_back(r);
  }
  return report;
}

inline csv::Table lemma3_trials_table(const Lemma3Report& rep) {
  csv::Table t({"n", "trial", "seed", "max_deg_gap", "max_mu_gap", "mu2_gap", "d_bar_max",
                "diff_norm_adj", "deg_assumption", "chernoff_violations", "weyl_ok"});
  for (const auto& r : rep.trials) {
    if (r.eig_failed) continue;
    t.add(r.n, r.trial, r.seed, r.max_deg_gap, r.max_mu_gap, r.mu2_gap, r.d_bar_max,
          r.diff_norm_adj, r.deg_assumption, r.chernoff_violations, r.weyl_ok);
  }
  return t;
}

inline csv::Table lemma3_aggregate_table(const Lemma3Report& rep) {
  csv::Table t({"n", "freq_a", "freq_b", "freq_c", "freq_e", "wilson_a_lo", "wilson_a_hi",
                "wilson_b_lo", "wilson_b_hi", "wilson_c_lo", "wilson_c_hi", "wilson_e_lo",
                "wilson_e_hi", "trials", "assumption_count", "freq_not_assumption",
                "eig_failures", "weyl_failures", "gamma", "phi", "median_max_mu_gap", "cond_i",
                "cond_ii", "nu_in_range", "prob_lb_lemma2"});
  for (const auto& a : rep.per_n) {
    // Needs (eta, ell); see the verify-degree-bound report.
    t.add(a.n, a.freq_a, a.freq_b, a.freq_c, a.freq_e, a.wilson_a.lo, a.wilson_a.hi,
          a.wilson_b.lo, a.wilson_b.hi, a.wilson_c.lo, a.wilson_c.hi, a.wilson_e.lo,
          a.wilson_e.hi, a.trials, a.assumption_count, a.freq_not_assumption, a.eig_failures,
          a.weyl_failures, a.gamma, a.phi, a.median_max_mu_gap, a.cond_i, a.cond_ii,
          a.nu_in_range, "");
  }
  return t;
}

// --------------------------------------------------------------------------
// Maximum expected degree lower bound

struct UnitInterval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

struct DegreeBoundRecord {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double d_bar_max = 0.0;
  double threshold = 0.0;
  bool success = false;
};

struct DegreeBoundAggregate {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;
  double success_freq = 0.0;
  Interval wilson;
  double prob_lb = 0.0;      // probability lower bound (stochastic) or 1 (deterministic)
  double stated_bound = 0.0;  // eta N ell / 4, or eta floor(ell N)
  double checked_threshold = 0.0;  // stated bound minus the zero-diagonal slack
  bool pass = false;
};

struct DegreeBoundReport {
  McConfig config;
  double eta = 0.0;
  double ell = 0.0;
  std::vector<DegreeBoundRecord> trials;
  std::vector<DegreeBoundAggregate> per_n;

  bool all_pass() const {
    return std::all_of(per_n.begin(), per_n.end(), [](const auto& a) { return a.pass; });
  }
};

/// Verifies W >= eta on j1 x j2 at 101 points per interval, endpoints included.
inline void validate_lower_block(const Graphon& g, double eta, UnitInterval j1, UnitInterval j2) {
  constexpr int kProbes = 101;
  for (int a = 0; a < kProbes; ++a) {
    const double x = a + 1 == kProbes ? j1.hi : j1.lo + j1.length() * a / (kProbes - 1);
    for (int b = 0; b < kProbes; ++b) {
      const double y = b + 1 == kProbes ? j2.hi : j2.lo + j2.length() * b / (kProbes - 1);
      if (g(x, y) < eta)
        throw ValidationError("kernel falls below eta on J1 x J2 at (" + csv::fmt(x) + ", " +
                              csv::fmt(y) + ")");
    }
  }
}

/// Stochastic latents: empirical Pr[d_bar_(N) >= eta N ell/4 - eta] against
/// the degree probability lower bound; passes when the frequency is at least the bound
/// minus the Wilson half-width. Deterministic latents (X_i = i/N):
/// d_bar_(N) >= eta (floor(ell N) - 1) must hold in every run.
inline DegreeBoundReport verify_degree_lower_bound(const McConfig& cfg, double eta, double ell,
                                                   UnitInterval j1, UnitInterval j2) {
  cfg.validate();
  detail::require(eta > 0.0, "eta must be positive");
  detail::require(ell > 0.0 && ell <= 1.0, "ell must lie in (0,1]");
  for (auto j : {j1, j2}) {
    detail::require(j.lo >= 0.0 && j.hi <= 1.0 && j.lo < j.hi, "J intervals must lie in [0,1]");
    detail::require(std::abs(j.length() - ell) <= 1e-12, "J intervals must have length ell");
  }
  const Graphon g = make_catalog_graphon(cfg.graphon);
  validate_lower_block(g, eta, j1, j2);

  DegreeBoundReport report;
  report.config = cfg;
  report.eta = eta;
  report.ell = ell;
  const bool det = cfg.mode == LatentMode::deterministic;
  for (std::size_t n : cfg.n_list) {
    DegreeBoundAggregate a;
    a.n = n;
    if (det) {
      a.stated_bound = deterministic_degree_lb(n, eta, ell);
      a.checked_threshold = a.stated_bound - eta;
      a.prob_lb = 1.0;
    } else {
      const auto lb = lemma2_prob_bound(n, eta, ell);
      a.stated_bound = lb.threshold;
      a.checked_threshold = lb.threshold - eta;
      a.prob_lb = lb.prob_lb;
    }
    std::vector<DegreeBoundRecord> recs(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      DegreeBoundRecord& r = recs[t];
      r.n = n;
      r.trial = t;
      r.seed = trial_seed(cfg.master_seed, n, t);
      const auto latent = sample_latent(n, cfg.mode, latent_stream(r.seed));
      const auto degrees = expected_adjacency(g, latent).row_sums();
      r.d_bar_max = *std::max_element(degrees.begin(), degrees.end());
      r.threshold = a.checked_threshold;
      r.success = r.d_bar_max >= r.threshold;
    });
    for (const auto& r : recs) {
      ++a.trials;
      if (r.success) ++a.successes;
      report.trials.push_back(r);
    }
    a.success_freq = detail::safe_ratio(a.successes, a.trials);
    a.wilson = wilson_interval(a.successes, a.trials);
    if (det) {
      a.pass = a.successes == a.trials;
    } else {
      const double half = 0.5 * (a.wilson.hi - a.wilson.lo);
      a.pass = a.success_freq >= a.prob_lb - half;
    }
    report.per_n.push_back(a);
  }
  return report;
}

inline csv::Table degree_bound_trials_table(const DegreeBoundReport& rep) {
  csv::Table t({"n", "trial", "seed", "d_bar_max", "threshold", "success"});
  for (const auto& r : rep.trials) t.add(r.n, r.trial, r.seed, r.d_bar_max, r.threshold, r.success);
  return t;
}

inline csv::Table degree_bound_aggregate_table(const DegreeBoundReport& rep) {
  csv::Table t({"n", "trials", "successes", "success_freq", "wilson_lo", "wilson_hi",
                "stated_bound", "checked_threshold", "pass", "prob_lb_lemma2"});
  for (const auto& a : rep.per_n)
    t.add(a.n, a.trials, a.successes, a.success_freq, a.wilson.lo, a.wilson.hi, a.stated_bound,
          a.checked_threshold, a.pass, a.prob_lb);
  return t;
}

// --------------------------------------------------------------------------
// Rate of max_i |mu_i - mu_bar_i|

struct RateFitPoint {
  std::size_t n = 0;
  double nu = 0.0;  // N^-alpha
  double median_gap = 0.0;
  double phi = 0.0;
  std::size_t assumption_count = 0;
  std::size_t phi_violations = 0;
  double log_predictor = 0.0;  // log sqrt(log N / N)
  double log_median = 0.0;
  double residual = 0.0;
};

struct RateFitReport {
  McConfig config;
  double alpha = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  std::vector<RateFitPoint> points;
  std::vector<TrialRecord> trials;  // n, trial, seed, max_mu_gap, d_bar_max filled
};

/// Max Laplacian eigenvalue gap of one sampled pair (two eigensolves).
inline double laplacian_gap(const GraphPair& pair, double tol, double* d_bar_max = nullptr) {
  const double inv_n = 1.0 / static_cast<double>(pair.a_random.size());
  auto mu = symmetric_eigenvalues(laplacian(pair.a_random), tol);
  auto mu_bar = symmetric_eigenvalues(laplacian(pair.a_expected), tol);
  if (d_bar_max) {
    const auto deg = pair.a_expected.row_sums();
    *d_bar_max = *std::max_element(deg.begin(), deg.end());
  }
  return max_abs_gap(mu, mu_bar) * inv_n;
}

/// Regresses log(median over trials of max_i|mu_i - mu_bar_i|) on
/// log(sqrt(log N / N)). nu = N^-alpha only enters the reported phi(N) checks.
inline RateFitReport rate_fit(const McConfig& cfg, double alpha) {
  cfg.validate();
  detail::require(alpha > 1.0, "rate_fit: alpha must exceed 1");
  detail::require(cfg.n_list.size() >= 5, "rate_fit: need at least 5 sizes");
  detail::require(static_cast<double>(cfg.n_list.back()) >=
                      10.0 * static_cast<double>(cfg.n_list.front()),
                  "rate_fit: n_list must span at least one decade");
  detail::require(cfg.n_list.front() >= 2, "rate_fit: sizes must be at least 2");
  const Graphon g = make_catalog_graphon(cfg.graphon);

  RateFitReport rep;
  rep.config = cfg;
  rep.alpha = alpha;
  std::vector<double> xs, ys;
  for (std::size_t n : cfg.n_list) {
    const double nd = static_cast<double>(n);
    RateFitPoint p;
    p.n = n;
    p.nu = std::pow(nd, -alpha);
    p.phi = compute_bounds(n, p.nu).phi;
    std::vector<TrialRecord> recs(cfg.trials);
    parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) {
      TrialRecord& r = recs[t];
      r.n = n;
      r.trial = t;
      r.seed = trial_seed(cfg.master_seed, n, t);
      const auto pair = sample_graph_pair(g, n, cfg.mode, r.seed);
      r.max_mu_gap = laplacian_gap(pair, cfg.eigentol, &r.d_bar_max);
      r.deg_assumption = deg_assumption_holds(r.d_bar_max, n, p.nu);
      r.violates_b = r.deg_assumption && r.max_mu_gap > p.phi;
    });
    std::vector<double> gaps;
    for (const auto& r : recs) {
      gaps.push_back(r.max_mu_gap);
      if (r.deg_assumption) ++p.assumption_count;
      if (r.violates_b) ++p.phi_violations;
      rep.trials.push_back(r);
    }
    p.median_gap = median(gaps);
    if (!(p.median_gap > 0.0))
      throw ValidationError("rate_fit: degenerate fit, median gap is zero at N=" +
                            std::to_string(n));
    p.log_predictor = std::log(std::sqrt(std::log(nd) / nd));
    p.log_median = std::log(p.median_gap);
    xs.push_back(p.log_predictor);
    ys.push_back(p.log_median);
    rep.points.push_back(p);
  }
  const LinearFit fit = least_squares(xs, ys);
  rep.slope = fit.slope;
  rep.slope_stderr = fit.slope_stderr;
  rep.intercept = fit.intercept;
  for (std::size_t k = 0; k < rep.points.size(); ++k) rep.points[k].residual = fit.residuals[k];
  return rep;
}

inline csv::Table rate_fit_trials_table(const RateFitReport& rep) {
  csv::Table t({"n", "trial", "seed", "max_mu_gap", "d_bar_max", "deg_assumption"});
  for (const auto& r : rep.trials)
    t.add(r.n, r.trial, r.seed, r.max_mu_gap, r.d_bar_max, r.deg_assumption);
  return t;
}

inline csv::Table rate_fit_aggregate_table(const RateFitReport& rep) {
  csv::Table t({"n", "nu", "median_max_mu_gap", "phi", "assumption_count", "phi_violations",
                "log_predictor", "log_median", "residual", "slope", "slope_stderr",
                "intercept"});
  for (const auto& p : rep.points)
    t.add(p.n, p.nu, p.median_gap, p.phi, p.assumption_count, p.phi_violations, p.log_predictor,
          p.log_median, p.residual, rep.slope, rep.slope_stderr, rep.intercept);
  return t;
}

// --------------------------------------------------------------------------
// Uniform convergence of degree sums under deterministic latents

enum class TestFunctionKind { identity, cos_pi, one };

struct TestFunction {
  TestFunctionKind kind = TestFunctionKind::one;

  double operator()(double x) const {
    switch (kind) {
      case TestFunctionKind::identity: return x;
      case TestFunctionKind::cos_pi: return std::cos(std::numbers::pi * x);
      case TestFunctionKind::one: return 1.0;
    }
    return 1.0;
  }
  double sup_abs() const { return 1.0; }
  double lipschitz() const {
    switch (kind) {
      case TestFunctionKind::identity: return 1.0;
      case TestFunctionKind::cos_pi: return std::numbers::pi;
      case TestFunctionKind::one: return 0.0;
    }
    return 0.0;
  }
  const char* name() const {
    switch (kind) {
      case TestFunctionKind::identity: return "identity";
      case TestFunctionKind::cos_pi: return "cos_pi";
      case TestFunctionKind::one: return "one";
    }
    return "one";
  }
};

inline TestFunction test_function_from_name(const std::string& name) {
  if (name == "identity") return {TestFunctionKind::identity};
  if (name == "cos_pi") return {TestFunctionKind::cos_pi};
  if (name == "one") return {TestFunctionKind::one};
  throw ValidationError("unknown test function '" + name + "'");
}

struct ConvergencePoint {
  std::size_t n = 0;
  double sup_error = 0.0;
  double argmax_x = 0.0;
  double bound = 0.0;  // C / N
  bool within_bound = false;
};

struct ConvergenceProbe {
  std::size_t n = 0;
  double x = 0.0;
  double riemann = 0.0;
  double integral = 0.0;
  double abs_error = 0.0;
};

struct ConvergenceReport {
  std::string graphon_name;
  std::optional<TestFunction> f;
  double constant_c = 0.0;
  double quad_abs_tol = kDefaultQuadTol;
  bool non_increasing = true;
  std::vector<ConvergencePoint> points;
  std::vector<ConvergenceProbe> probes;
};

/// For each N: sup over an x-grid of |(1/N) sum_j W(x, j/N) f(j/N) - integral W(x,y) f(y) dy|.
/// Only continuous graphons are accepted. C = L (1 + max|f| + Lip(f)), with
/// f = 1 when absent.
inline ConvergenceReport uniform_convergence_sweep(const Graphon& g,
                                                   const std::vector<std::size_t>& n_list,
                                                   std::size_t x_grid_points,
                                                   std::optional<TestFunction> f,
                                                   double quad_abs_tol = kDefaultQuadTol) {
  detail::require(g.is_continuous(), "uniform convergence needs a continuous graphon");
  detail::require(!n_list.empty(), "n_list must not be empty");
  detail::require(x_grid_points >= 2, "x grid needs at least 2 points");
  detail::require(quad_abs_tol > 0.0, "quadrature tolerance must be positive");
  const TestFunction fn = f.value_or(TestFunction{TestFunctionKind::one});

  ConvergenceReport rep;
  rep.graphon_name = g.name();
  rep.f = f;
  rep.quad_abs_tol = quad_abs_tol;
  rep.constant_c = g.lipschitz() * (1.0 + fn.sup_abs() + fn.lipschitz());

  std::vector<double> xs;
  for (std::size_t k = 0; k < x_grid_points; ++k)
    xs.push_back(k + 1 == x_grid_points
                     ? 1.0
                     : static_cast<double>(k) / static_cast<double>(x_grid_points - 1));
  for (double b : g.breakpoints()) xs.push_back(b);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> integrals;
  for (double x : xs)
    integrals.push_back(integrate_cells([&](double y) { return g(x, y) * fn(y); },
                                        g.breakpoints(), quad_abs_tol));

  // Grid errors below this are indistinguishable from quadrature noise.
  const double slack = 10.0 * quad_abs_tol;
  for (std::size_t n : n_list) {
    detail::require(n >= 1, "n_list entries must be at least 1");
    const double nd = static_cast<double>(n);
    ConvergencePoint p;
    p.n = n;
    p.bound = rep.constant_c / nd;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      double sum = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double y = static_cast<double>(j) / nd;
        sum += g(xs[k], y) * fn(y);
      }
      ConvergenceProbe probe{n, xs[k], sum / nd, integrals[k], 0.0};
      probe.abs_error = std::abs(probe.riemann - probe.integral);
      if (probe.abs_error > p.sup_error) {
        p.sup_error = probe.abs_error;
        p.argmax_x = xs[k];
      }
      rep.probes.push_back(probe);
    }
    p.within_bound = p.sup_error <= p.bound + slack;
    if (!rep.points.empty() && p.sup_error > rep.points.back().sup_error + slack)
      rep.non_increasing = false;
    rep.points.push_back(p);
  }
  return rep;
}

inline csv::Table convergence_trials_table(const ConvergenceReport& rep) {
  csv::Table t({"n", "x", "riemann_sum", "integral", "abs_error"});
  for (const auto& p : rep.probes) t.add(p.n, p.x, p.riemann, p.integral, p.abs_error);
  return t;
}

inline csv::Table convergence_aggregate_table(const ConvergenceReport& rep) {
  csv::Table t({"n", "sup_error", "argmax_x", "bound_c_over_n", "within_bound",
                "non_increasing"});
  for (const auto& p : rep.points)
    t.add(p.n, p.sup_error, p.argmax_x, p.bound, p.within_bound, rep.non_increasing);
  return t;
}

}  // namespace gspec
