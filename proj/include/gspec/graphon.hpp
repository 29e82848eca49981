#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gspec/error.hpp"
#include "gspec/quadrature.hpp"

namespace gspec {

/// Symmetric kernel W : [0,1]^2 -> [0,1] together with the regularity data the
/// large-N conditions need: partition breakpoints, a Lipschitz constant valid
/// on every cell, and a declared infimum.
///
/// Partition cells are closed on the right: cell 0 is [a_0, a_1], cell k > 0 is
/// (a_k, a_{k+1}].
class Graphon {
 public:
  using Kernel = std::function<double(double, double)>;

  Graphon(std::string name, Kernel kernel, std::vector<double> breakpoints, double lipschitz,
          double infimum, bool continuous)
      : name_(std::move(name)),
        kernel_(std::move(kernel)),
        breakpoints_(std::move(breakpoints)),
        lipschitz_(lipschitz),
        infimum_(infimum),
        continuous_(continuous) {
    detail::require(static_cast<bool>(kernel_), "graphon kernel is empty");
    detail::require(breakpoints_.size() >= 2 && breakpoints_.front() == 0.0 &&
                        breakpoints_.back() == 1.0,
                    "graphon breakpoints must start at 0 and end at 1");
    for (std::size_t k = 1; k < breakpoints_.size(); ++k)
      detail::require(breakpoints_[k] > breakpoints_[k - 1],
                      "graphon breakpoints must be strictly increasing");
    detail::require(lipschitz_ >= 0.0, "Lipschitz constant must be non-negative");
    detail::require(infimum_ >= 0.0 && infimum_ <= 1.0, "infimum must lie in [0,1]");
  }

  double operator()(double x, double y) const { return kernel_(x, y); }

  const std::string& name() const noexcept { return name_; }
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }
  double lipschitz() const noexcept { return lipschitz_; }
  double infimum() const noexcept { return infimum_; }
  bool is_continuous() const noexcept { return continuous_; }

  /// K, the number of interior breakpoints.
  std::size_t interior_breakpoints() const noexcept { return breakpoints_.size() - 2; }

  double min_cell_width() const noexcept {
    double w = 1.0;
    for (std::size_t k = 1; k < breakpoints_.size(); ++k)
      w = std::min(w, breakpoints_[k] - breakpoints_[k - 1]);
    return w;
  }

 private:
  std::string name_;
  Kernel kernel_;
  std::vector<double> breakpoints_;
  double lipschitz_;
  double infimum_;
  bool continuous_;
};

// Catalog -----------------------------------------------------------------

namespace catalog {
struct Constant {
  double p = 0.0;
};
struct Product {};
struct Mean {};
struct Sbm {
  std::vector<double> boundaries;           // interior boundaries only
  std::vector<std::vector<double>> matrix;  // (boundaries+1)^2, symmetric
};
}  // namespace catalog

using CatalogSpec = std::variant<catalog::Constant, catalog::Product, catalog::Mean, catalog::Sbm>;

namespace detail {

inline std::size_t block_of(std::span<const double> boundaries, double x) {
  // Right-closed cells: x belongs to the first block whose upper edge is >= x.
  return static_cast<std::size_t>(std::lower_bound(boundaries.begin(), boundaries.end(), x) -
                                  boundaries.begin());
}

inline Graphon make_sbm(catalog::Sbm spec) {
  const std::size_t blocks = spec.boundaries.size() + 1;
  require(spec.matrix.size() == blocks, "sbm matrix must have one row per block");
  double lo = 1.0;
  double hi = 0.0;
  for (const auto& row : spec.matrix) {
    require(row.size() == blocks, "sbm matrix must be square");
    for (double v : row) {
      require(v >= 0.0 && v <= 1.0, "sbm entries must lie in [0,1]");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  for (std::size_t i = 0; i < blocks; ++i)
    for (std::size_t j = i + 1; j < blocks; ++j)
      require(spec.matrix[i][j] == spec.matrix[j][i], "sbm matrix must be symmetric");

  std::vector<double> breakpoints{0.0};
  for (double b : spec.boundaries) {
    require(b > breakpoints.back() && b < 1.0,
            "sbm boundaries must be strictly increasing inside (0,1)");
    breakpoints.push_back(b);
  }
  breakpoints.push_back(1.0);

  auto boundaries = std::move(spec.boundaries);
  auto matrix = std::move(spec.matrix);
  Graphon::Kernel kernel = [boundaries, matrix](double x, double y) {
    return matrix[block_of(boundaries, x)][block_of(boundaries, y)];
  };
  // Only constant block matrices are free of jumps.
  return Graphon("sbm", std::move(kernel), std::move(breakpoints), 0.0, lo, lo == hi);
}

}  // namespace detail

inline Graphon make_catalog_graphon(CatalogSpec spec) {
  struct Visitor {
    Graphon operator()(catalog::Constant c) const {
      detail::require(c.p >= 0.0 && c.p <= 1.0, "constant graphon value must lie in [0,1]");
      const double p = c.p;
      return Graphon("constant", [p](double, double) { return p; }, {0.0, 1.0}, 0.0, p, true);
    }
    Graphon operator()(catalog::Product) const {
      return Graphon("product", [](double x, double y) { return x * y; }, {0.0, 1.0}, 1.0, 0.0,
                     true);
    }
    Graphon operator()(catalog::Mean) const {
      // Per-coordinate constant is 1/2; store the joint bound 1.
      return Graphon("mean", [](double x, double y) { return 0.5 * (x + y); }, {0.0, 1.0}, 1.0,
                     0.0, true);
    }
    Graphon operator()(catalog::Sbm s) const { return detail::make_sbm(std::move(s)); }
  };
  return std::visit(Visitor{}, std::move(spec));
}

// Degree function ----------------------------------------------------------

inline constexpr double kDefaultQuadTol = 1e-9;

/// d_W(x) = integral over y in [0,1] of W(x,y), integrated cell by cell.
inline double degree_at(const Graphon& g, double x, double quad_abs_tol = kDefaultQuadTol) {
  detail::require(x >= 0.0 && x <= 1.0, "degree_at: x must lie in [0,1]");
  return integrate_cells([&](double y) { return g(x, y); }, g.breakpoints(), quad_abs_tol);
}

struct DegreeFunction {
  std::vector<double> x;
  std::vector<double> values;
  double max_value = 0.0;
  double quad_abs_tol = kDefaultQuadTol;
};

/// d_W on the uniform grid x_k = k/(grid_points-1).
inline DegreeFunction degree_function(const Graphon& g, std::size_t grid_points,
                                      double quad_abs_tol = kDefaultQuadTol) {
  detail::require(grid_points >= 2, "degree_function: need at least 2 grid points");
  detail::require(quad_abs_tol > 0.0, "degree_function: quadrature tolerance must be positive");
  DegreeFunction out;
  out.quad_abs_tol = quad_abs_tol;
  out.x.resize(grid_points);
  out.values.resize(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x =
        k + 1 == grid_points ? 1.0 : static_cast<double>(k) / static_cast<double>(grid_points - 1);
    out.x[k] = x;
    out.values[k] = degree_at(g, x, quad_abs_tol);
  }
  out.max_value = *std::max_element(out.values.begin(), out.values.end());
  return out;
}

/// Deterministic probe set: `per_axis` uniform points, plus every breakpoint
/// and every cell midpoint, sorted and deduplicated.
inline std::vector<double> probe_points(const Graphon& g, std::size_t per_axis = 101) {
  std::vector<double> pts;
  for (std::size_t k = 0; k < per_axis; ++k)
    pts.push_back(per_axis == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(per_axis - 1));
  const auto bp = g.breakpoints();
  for (std::size_t k = 0; k < bp.size(); ++k) {
    pts.push_back(bp[k]);
    if (k + 1 < bp.size()) pts.push_back(0.5 * (bp[k] + bp[k + 1]));
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace gspec
