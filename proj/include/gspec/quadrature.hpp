#pragma once

#include <cmath>
#include <cstddef>
#include <span>

#include "gspec/error.hpp"

namespace gspec {

struct QuadratureResult {
  double value = 0.0;
  double last_change = 0.0;
  std::size_t panels = 0;
};

/// Composite Simpson on [a,b], doubling the panel count until two successive
/// estimates differ by less than `abs_tol`. Throws ConvergenceError past
/// `max_panels`.
template <class F>
QuadratureResult simpson(F&& f, double a, double b, double abs_tol,
                         std::size_t max_panels = std::size_t{1} << 22) {
  detail::require(abs_tol > 0.0, "quadrature tolerance must be positive");
  if (b <= a) return {};

  // Reuse endpoint and interior evaluations across refinements: keep the sum
  // of endpoints, of even-index interior points and of odd-index points.
  const double ends = f(a) + f(b);
  double evens = 0.0;
  double odds = f(0.5 * (a + b));
  std::size_t panels = 2;
  double estimate = (b - a) / 6.0 * (ends + 4.0 * odds);

  while (true) {
    const std::size_t next = panels * 2;
    const double h_next = (b - a) / static_cast<double>(next);
    evens += odds;
    odds = 0.0;
    for (std::size_t k = 1; k < next; k += 2) odds += f(a + static_cast<double>(k) * h_next);
    const double refined = h_next / 3.0 * (ends + 2.0 * evens + 4.0 * odds);
    const double change = std::abs(refined - estimate);
    panels = next;
    estimate = refined;
    if (change < abs_tol) return {estimate, change, panels};
    if (panels >= max_panels)
      throw ConvergenceError(0, "simpson: no convergence within panel cap");
  }
}

/// Integrates over [0,1] cell by cell, cells delimited by `breakpoints`
/// (first 0, last 1). Each cell gets abs_tol / cells so the total respects
/// abs_tol. Cells are closed on the right: the left endpoint of every cell
/// after the first is nudged one ulp inward so jumps are attributed to the
/// correct side.
template <class F>
double integrate_cells(F&& f, std::span<const double> breakpoints, double abs_tol) {
  detail::require(breakpoints.size() >= 2, "need at least two breakpoints");
  const double cells = static_cast<double>(breakpoints.size() - 1);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    double lo = breakpoints[k];
    const double hi = breakpoints[k + 1];
    if (k > 0) lo = std::nextafter(lo, hi);
    total += simpson(f, lo, hi, abs_tol / cells).value;
  }
  return total;
}

}  // namespace gspec
