#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "gspec/error.hpp"
#include "gspec/graphon.hpp"
#include "gspec/spectra.hpp"

// Closed-form concentration bounds for graphs sampled from graphons, the
// predicates that decide when they apply, and exact binomial tails used as
// oracles. All logarithms are natural.

namespace gspec {

struct BoundSet {
  std::size_t n = 0;
  double nu = 0.0;
  double gamma = 0.0;          // sqrt(log(2N/nu)/N), degree bound
  double phi = 0.0;            // 3 * gamma, eigenvalue bound
  double b_n = 0.0;            // 1/N + sqrt(8 log(N/nu)/(N+1))
  double deg_threshold = 0.0;  // (4/9) log(2N/nu)
  std::optional<double> gamma_old;  // sqrt(1/eta_W) * gamma, needs eta_W > 0
  std::optional<double> phi_old;    // (1/eta_W + 2) * sqrt(log(2N/nu)/N)
};

namespace detail {
inline void require_nu(double nu) {
  require(nu > 0.0 && nu < 1.0, "nu must lie in (0,1)");
}
}  // namespace detail

inline double log_2n_over_nu(std::size_t n, double nu) {
  return std::log(2.0 * static_cast<double>(n) / nu);
}

inline BoundSet compute_bounds(std::size_t n, double nu, std::optional<double> eta_w = {}) {
  detail::require(n >= 1, "compute_bounds: n must be at least 1");
  detail::require_nu(nu);
  const double nd = static_cast<double>(n);
  const double lg = log_2n_over_nu(n, nu);
  BoundSet b;
  b.n = n;
  b.nu = nu;
  const double root = std::sqrt(lg / nd);
  b.gamma = root;
  b.phi = 3.0 * root;
  b.b_n = 1.0 / nd + std::sqrt(8.0 * std::log(nd / nu) / (nd + 1.0));
  b.deg_threshold = 4.0 / 9.0 * lg;
  if (eta_w) {
    detail::require(*eta_w >= 0.0 && *eta_w <= 1.0, "compute_bounds: eta_W must lie in [0,1]");
    if (*eta_w > 0.0) {
      b.gamma_old = std::sqrt(1.0 / *eta_w) * root;
      b.phi_old = (1.0 / *eta_w + 2.0) * root;
    }
  }
  return b;
}

struct LargeEnoughN {
  bool cond_i = false;   // 2 b_N < min cell width
  bool cond_ii = false;  // (1/N) log(2N/nu) + b_N (2K + 3L) < max_x d_W(x)
  bool nu_in_range = false;  // nu in (N e^{-N/5}, e^{-1}); advisory only
  double b_n = 0.0;
  double lhs_ii = 0.0;
};

inline LargeEnoughN large_enough_n(const Graphon& g, std::size_t n, double nu,
                                   const DegreeFunction& deg) {
  detail::require(n >= 1, "large_enough_n: n must be at least 1");
  detail::require_nu(nu);
  const double nd = static_cast<double>(n);
  const auto bounds = compute_bounds(n, nu);
  LargeEnoughN r;
  r.b_n = bounds.b_n;
  r.cond_i = 2.0 * r.b_n < g.min_cell_width();
  const double k = static_cast<double>(g.interior_breakpoints());
  r.lhs_ii = log_2n_over_nu(n, nu) / nd + r.b_n * (2.0 * k + 3.0 * g.lipschitz());
  r.cond_ii = r.lhs_ii < deg.max_value;
  r.nu_in_range = nu > nd * std::exp(-nd / 5.0) && nu < std::exp(-1.0);
  return r;
}

/// d_bar_(N) > (4/9) log(2N/nu).
inline bool deg_assumption_holds(double d_bar_max, std::size_t n, double nu) {
  detail::require_nu(nu);
  return d_bar_max > 4.0 / 9.0 * log_2n_over_nu(n, nu);
}

inline bool deg_assumption_holds(const SpectralSummary& summary, std::size_t n, double nu) {
  return deg_assumption_holds(summary.d_bar_max, n, nu);
}

enum class EtaVariant { corrected22, simplified };

/// corrected22: sqrt(log(2N/nu)/N) < eta^2 / (1 + 2 eta).
/// simplified:  log(2N/nu)/N < eta^2 / 9.
inline bool eta_condition(std::size_t n, double nu, double eta_w, EtaVariant variant) {
  detail::require(eta_w > 0.0, "eta_condition: eta_W must be positive");
  detail::require(n >= 1, "eta_condition: n must be at least 1");
  detail::require_nu(nu);
  const double ratio = log_2n_over_nu(n, nu) / static_cast<double>(n);
  if (variant == EtaVariant::corrected22)
    return std::sqrt(ratio) < eta_w * eta_w / (1.0 + 2.0 * eta_w);
  return ratio < eta_w * eta_w / 9.0;
}

struct Lemma2Bound {
  double threshold = 0.0;  // eta N ell / 4
  double prob_lb = 0.0;    // (1 - exp(-N ell^2/4)) (1 - (1-ell)^floor(N/2))
};

inline Lemma2Bound lemma2_prob_bound(std::size_t n, double eta, double ell) {
  detail::require(n >= 1, "lemma2_prob_bound: n must be at least 1");
  detail::require(eta > 0.0, "lemma2_prob_bound: eta must be positive");
  detail::require(ell > 0.0 && ell <= 1.0, "lemma2_prob_bound: ell must lie in (0,1]");
  const double nd = static_cast<double>(n);
  Lemma2Bound r;
  r.threshold = eta * nd * ell / 4.0;
  const double first = -std::expm1(-nd * ell * ell / 4.0);
  const double second = 1.0 - std::pow(1.0 - ell, static_cast<double>(n / 2));
  r.prob_lb = first * second;
  return r;
}

/// Hoeffding upper bound on Pr[Z <= k] for Z ~ Binomial(n_half, ell), k < E Z.
inline double hoeffding_binomial_lb(std::size_t n_half, double ell, double k) {
  detail::require(n_half >= 1, "hoeffding_binomial_lb: n_half must be at least 1");
  detail::require(ell >= 0.0 && ell <= 1.0, "hoeffding_binomial_lb: ell must lie in [0,1]");
  const double mean = static_cast<double>(n_half) * ell;
  detail::require(k < mean, "hoeffding_binomial_lb: k must be below the mean");
  const double gap = mean - k;
  return std::exp(-2.0 * gap * gap / static_cast<double>(n_half));
}

inline constexpr std::size_t kMaxExactTrials = 2000;

/// Exact Pr[Z <= k], Z ~ Binomial(trials, p), summed in log space.
inline double binomial_tail_exact(std::size_t trials, double p, long long k) {
  detail::require(trials <= kMaxExactTrials, "binomial_tail_exact: too many trials");
  detail::require(p >= 0.0 && p <= 1.0, "binomial_tail_exact: p must lie in [0,1]");
  if (k < 0) return 0.0;
  if (static_cast<std::size_t>(k) >= trials) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;

  const long double nl = static_cast<long double>(trials);
  const long double lp = std::log(static_cast<long double>(p));
  const long double lq = std::log1p(-static_cast<long double>(p));
  const long double lg_n = std::lgamma(nl + 1.0L);
  std::vector<long double> logs;
  logs.reserve(static_cast<std::size_t>(k) + 1);
  for (long long z = 0; z <= k; ++z) {
    const long double zl = static_cast<long double>(z);
    logs.push_back(lg_n - std::lgamma(zl + 1.0L) - std::lgamma(nl - zl + 1.0L) + zl * lp +
                   (nl - zl) * lq);
  }
  const long double top = *std::max_element(logs.begin(), logs.end());
  long double acc = 0.0L;
  for (long double t : logs) acc += std::exp(t - top);
  const long double result = std::exp(top) * acc;
  return static_cast<double>(std::min(result, 1.0L));
}

/// floor(ell * N) with a relative guard against representation error in ell.
inline std::size_t floor_ell_n(std::size_t n, double ell) {
  const double prod = ell * static_cast<double>(n);
  return static_cast<std::size_t>(std::floor(prod * (1.0 + 1e-12)));
}

/// eta * floor(ell N); requires N >= 1/ell.
inline double deterministic_degree_lb(std::size_t n, double eta, double ell) {
  detail::require(ell > 0.0 && ell <= 1.0, "deterministic_degree_lb: ell must lie in (0,1]");
  detail::require(floor_ell_n(n, ell) >= 1, "deterministic_degree_lb: requires N >= 1/ell");
  return eta * static_cast<double>(floor_ell_n(n, ell));
}

}  // namespace gspec
