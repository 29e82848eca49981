#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "gspec/error.hpp"
#include "gspec/matrix.hpp"

namespace gspec {

inline constexpr double kDefaultEigenTol = 1e-10;

/// Symmetric tridiagonal matrix: diag[0..n-1], off[i] couples i and i+1
/// (off has n entries, the last one unused).
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
};

/// Householder reduction of a symmetric matrix to tridiagonal form. Only the
/// lower triangle of the trailing block is touched after each reflection.
inline Tridiagonal tridiagonalize(Matrix a) {
  const std::size_t n = a.size();
  Tridiagonal t{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (n == 0) return t;

  std::vector<double> v(n), p(n), w(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    t.diag[k] = a(k, k);
    const std::size_t off = k + 1;
    const std::size_t m = n - off;

    // Column k below the diagonal, read from the lower triangle.
    double tail = 0.0;
    for (std::size_t i = 1; i < m; ++i) {
      const double x = a(off + i, k);
      tail += x * x;
    }
    const double x0 = a(off, k);
    if (tail == 0.0) {
      t.off[k] = x0;
      continue;
    }
    const double norm = std::sqrt(x0 * x0 + tail);
    const double alpha = x0 > 0.0 ? -norm : norm;
    v[0] = x0 - alpha;
    for (std::size_t i = 1; i < m; ++i) v[i] = a(off + i, k);
    const double vtv = v[0] * v[0] + tail;
    const double beta = 2.0 / vtv;
    t.off[k] = alpha;

    // p = beta * B v using only the lower triangle of B.
    std::fill(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(m), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const double* row = &a(off + i, off);
      const double vi = v[i];
      double s = row[i] * vi;
      for (std::size_t j = 0; j < i; ++j) {
        s += row[j] * v[j];
        p[j] += row[j] * vi;
      }
      p[i] += s;
    }
    double ptv = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      p[i] *= beta;
      ptv += p[i] * v[i];
    }
    const double kappa = 0.5 * beta * ptv;
    for (std::size_t i = 0; i < m; ++i) w[i] = p[i] - kappa * v[i];

    // B -= v w^T + w v^T on the lower triangle.
    for (std::size_t i = 0; i < m; ++i) {
      double* row = &a(off + i, off);
      const double vi = v[i];
      const double wi = w[i];
      for (std::size_t j = 0; j <= i; ++j) row[j] -= vi * w[j] + wi * v[j];
    }
  }
  if (n >= 2) {
    t.diag[n - 2] = a(n - 2, n - 2);
    t.off[n - 2] = a(n - 1, n - 2);
  }
  t.diag[n - 1] = a(n - 1, n - 1);
  return t;
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. Off-diagonal entries
/// are deflated once |e_m| <= threshold * (|d_m| + |d_{m+1}|). Returns the
/// eigenvalues ascending.
inline std::vector<double> tridiagonal_eigenvalues(Tridiagonal t, double threshold,
                                                   int max_iter_per_value = 60) {
  auto& d = t.diag;
  auto& e = t.off;
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
  if (n > 0) e[static_cast<std::size_t>(n - 1)] = 0.0;

  for (std::ptrdiff_t l = 0; l < n; ++l) {
    int iter = 0;
    std::ptrdiff_t m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= threshold * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iter_per_value)
        throw ConvergenceError(static_cast<std::size_t>(l),
                               "QL iteration did not converge at row " + std::to_string(l));

      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0;
      double c = 1.0;
      double p = 0.0;
      std::ptrdiff_t i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

/// All eigenvalues of a symmetric matrix, ascending. Householder reduction then
/// implicit QL; the per-eigenvalue error is far below tol * ||m||_2.
inline std::vector<double> symmetric_eigenvalues(const Matrix& m, double tol = kDefaultEigenTol) {
  detail::require(tol > 0.0, "symmetric_eigenvalues: tol must be positive");
  detail::require(m.is_symmetric(1e-12), "symmetric_eigenvalues: matrix is not symmetric");
  const double threshold = std::max(std::numeric_limits<double>::epsilon(), 1e-3 * tol);
  return tridiagonal_eigenvalues(tridiagonalize(m), threshold);
}

inline double spectral_norm(const Matrix& m, double tol = kDefaultEigenTol) {
  if (m.size() == 0) return 0.0;
  const auto ev = symmetric_eigenvalues(m, tol);
  return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

}  // namespace gspec
