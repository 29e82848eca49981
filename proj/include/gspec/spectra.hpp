#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gspec/eigen.hpp"
#include "gspec/matrix.hpp"
#include "gspec/sampling.hpp"

namespace gspec {

/// Degree order statistics and Laplacian spectra of a sampled graph and its
/// expected counterpart. Degrees and eigenvalues are divided by n.
struct SpectralSummary {
  std::size_t n = 0;
  std::vector<double> deg_sorted;
  std::vector<double> deg_bar_sorted;
  std::vector<double> mu;
  std::vector<double> mu_bar;
  double d_bar_max = 0.0;
  double diff_norm_adj = 0.0;
  double diff_norm_lap = 0.0;
  double diff_norm_deg = 0.0;

  // Unnormalized degrees in node order, kept for per-node checks.
  std::vector<double> degrees;
  std::vector<double> degrees_bar;
};

inline double max_abs_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

namespace detail {
inline std::vector<double> scaled(std::vector<double> v, double factor) {
  for (auto& x : v) x *= factor;
  return v;
}
}  // namespace detail

struct SummaryOptions {
  /// ||L - Lbar||_2 costs a full extra eigensolve; the Monte Carlo harnesses
  /// do not need it.
  bool lap_diff_norm = true;
};

inline SpectralSummary summarize(const GraphPair& pair, double tol = kDefaultEigenTol,
                                 SummaryOptions options = {}) {
  const std::size_t n = pair.a_random.size();
  detail::require(pair.a_expected.size() == n, "summarize: matrix sizes differ");
  SpectralSummary s;
  s.n = n;
  if (n == 0) return s;
  const double inv_n = 1.0 / static_cast<double>(n);

  s.degrees = pair.a_random.row_sums();
  s.degrees_bar = pair.a_expected.row_sums();
  s.deg_sorted = detail::scaled(s.degrees, inv_n);
  s.deg_bar_sorted = detail::scaled(s.degrees_bar, inv_n);
  std::sort(s.deg_sorted.begin(), s.deg_sorted.end());
  std::sort(s.deg_bar_sorted.begin(), s.deg_bar_sorted.end());
  s.d_bar_max = *std::max_element(s.degrees_bar.begin(), s.degrees_bar.end());
  for (std::size_t i = 0; i < n; ++i)
    s.diff_norm_deg = std::max(s.diff_norm_deg, std::abs(s.degrees[i] - s.degrees_bar[i]));

  const Matrix lap = laplacian(pair.a_random);
  const Matrix lap_bar = laplacian(pair.a_expected);
  s.mu = detail::scaled(symmetric_eigenvalues(lap, tol), inv_n);
  s.mu_bar = detail::scaled(symmetric_eigenvalues(lap_bar, tol), inv_n);
  s.diff_norm_adj = spectral_norm(pair.a_random - pair.a_expected, tol);
  if (options.lap_diff_norm) s.diff_norm_lap = spectral_norm(lap - lap_bar, tol);
  return s;
}

}  // namespace gspec
