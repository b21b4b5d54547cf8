// Test-only reference implementations, independent of the library's
// evaluation paths: plain exponential recursion for basis values, composite
// Simpson quadrature, and triangle-fan Gauss quadrature for polygon moments.
#ifndef BSP_TESTS_ORACLES_HPP
#define BSP_TESTS_ORACLES_HPP

#include <cmath>
#include <random>
#include <vector>

#include "bsp/types.hpp"

namespace oracle {

// Textbook recursion, no shared state with the library's bottom-up scheme.
inline double naive_basis(const std::vector<double>& knots, std::size_t k,
                          int n, double ts, bool closed_right = true) {
  if (n == 0) {
    const double lo = knots[k], hi = knots[k + 1];
    if (lo == hi) return 0.0;
    if (ts >= lo && ts < hi) return 1.0;
    if (closed_right && ts == hi && hi == knots.back()) return 1.0;
    return 0.0;
  }
  double acc = 0.0;
  const double dl = knots[k + n] - knots[k];
  if (dl > 0.0)
    acc += (ts - knots[k]) / dl * naive_basis(knots, k, n - 1, ts, closed_right);
  const double dr = knots[k + n + 1] - knots[k + 1];
  if (dr > 0.0)
    acc += (knots[k + n + 1] - ts) / dr *
           naive_basis(knots, k + 1, n - 1, ts, closed_right);
  return acc;
}

// Composite Simpson: one 3-point rule per panel.
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    const double x2 = (i == panels - 1) ? b : a + (i + 1) * h;
    const double x1 = 0.5 * (x0 + x2);
    acc += (x2 - x0) / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2));
  }
  return acc;
}

// Integral of x^p y^q over the polygon interior by a signed triangle fan
// with a degree-5 quadrature rule on each triangle.
inline double polygon_monomial_integral(const bsp::PointList2d& pts, int p,
                                        int q) {
  const double s15 = std::sqrt(15.0);
  const double w0 = 9.0 / 40.0;
  const double w1 = (155.0 - s15) / 1200.0;
  const double a1 = (6.0 - s15) / 21.0;
  const double w2 = (155.0 + s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0;
  const double bary[7][3] = {
      {1.0 / 3.0, 1.0 / 3.0, w0},
      {a1, a1, w1},
      {a1, 1.0 - 2.0 * a1, w1},
      {1.0 - 2.0 * a1, a1, w1},
      {a2, a2, w2},
      {a2, 1.0 - 2.0 * a2, w2},
      {1.0 - 2.0 * a2, a2, w2},
  };

  const bsp::Index n = pts.rows();
  double acc = 0.0;
  for (bsp::Index i = 1; i + 1 < n; ++i) {
    const double ax = pts(0, 0), ay = pts(0, 1);
    const double bx = pts(i, 0), by = pts(i, 1);
    const double cx = pts(i + 1, 0), cy = pts(i + 1, 1);
    const double signed_area =
        0.5 * ((bx - ax) * (cy - ay) - (by - ay) * (cx - ax));
    for (const auto& node : bary) {
      const double u = node[0], v = node[1], w = 1.0 - node[0] - node[1];
      const double x = u * ax + v * bx + w * cx;
      const double y = u * ay + v * by + w * cy;
      acc += signed_area * node[2] * std::pow(x, p) * std::pow(y, q);
    }
  }
  return acc;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Star-shaped polygon: sorted angles, radii in [r_lo, r_hi]; always simple.
inline bsp::PointList2d random_polygon(std::mt19937_64& rng, int n_vertices,
                                       double r_lo, double r_hi,
                                       double cx = 0.0, double cy = 0.0) {
  std::vector<double> angles(n_vertices);
  for (double& a : angles) a = uniform(rng, 0.0, 2.0 * EIGEN_PI);
  std::sort(angles.begin(), angles.end());
  bsp::PointList2d pts(n_vertices, 2);
  for (int i = 0; i < n_vertices; ++i) {
    const double r = uniform(rng, r_lo, r_hi);
    pts(i, 0) = cx + r * std::cos(angles[i]);
    pts(i, 1) = cy + r * std::sin(angles[i]);
  }
  return pts;
}

}  // namespace oracle

#endif  // BSP_TESTS_ORACLES_HPP
