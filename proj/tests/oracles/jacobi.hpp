#pragma once

// Cyclic Jacobi eigenvalue oracle for small symmetric matrices. Independent of
// the Householder/QL path in the library; used only by tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gspec/matrix.hpp"

namespace oracle {

struct JacobiResult {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]
};

inline double off_norm(const gspec::Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

inline double frobenius(const gspec::Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

/// Sweeps until the off-diagonal Frobenius norm is below off_tol * ||a||_F
/// (or exactly zero).
inline JacobiResult jacobi(gspec::Matrix a, double off_tol = 1e-14, int max_sweeps = 100) {
  const std::size_t n = a.size();
  gspec::Matrix v = gspec::Matrix::identity(n);
  const double scale = std::max(frobenius(a), 1e-300);
  int sweep = 0;
  while (off_norm(a) > off_tol * scale) {
    if (++sweep > max_sweeps) throw std::runtime_error("jacobi: no convergence");
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
  JacobiResult r;
  for (std::size_t k : order) {
    r.values.push_back(a(k, k));
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, k);
    r.vectors.push_back(std::move(col));
  }
  return r;
}

}  // namespace oracle
