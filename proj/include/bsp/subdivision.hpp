#ifndef BSP_SUBDIVISION_HPP
#define BSP_SUBDIVISION_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bsp/basis.hpp"
#include "bsp/curve.hpp"
#include "bsp/errors.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Centered refinement mask with its divisor. Valid masks have odd length
/// and even- and odd-indexed coefficient sums both equal to the divisor, so
/// each output point is an affine combination of inputs.
template <typename T>
struct RefinementMask {
  VecX<T> coefficients;
  T scale = T(1);

  RefinementMask(VecX<T> coeffs, T scale_in)
      : coefficients(std::move(coeffs)), scale(scale_in) {
    if (coefficients.size() < 3 || coefficients.size() % 2 == 0)
      throw DomainError("refinement mask must have odd length >= 3");
    if (!(scale > T(0)))
      throw DomainError("refinement mask scale must be positive");
    T even = T(0), odd = T(0);
    for (Index i = 0; i < coefficients.size(); ++i)
      (i % 2 == 0 ? even : odd) += coefficients[i];
    const T tol = T(1e-12) * scale;
    if (std::abs(even - scale) > tol || std::abs(odd - scale) > tol)
      throw DomainError(
          "refinement mask parity sums must each equal the scale");
  }

  /// (1, 2, 1) / 2
  static RefinementMask linear() {
    VecX<T> c(3);
    c << T(1), T(2), T(1);
    return RefinementMask(std::move(c), T(2));
  }

  /// (1, 4, 6, 4, 1) / 8
  static RefinementMask cubic() {
    VecX<T> c(5);
    c << T(1), T(4), T(6), T(4), T(1);
    return RefinementMask(std::move(c), T(8));
  }
};

/// Ordered point sequence subject to refinement. Closed polygons index
/// cyclically.
template <typename T>
struct ControlPolygon {
  PointList<T> points;
  bool closed = false;
};

/// Two-scale check for the uniform degree-n basis: returns the basis value
/// at ts and the same value rebuilt from binomial-weighted half-scale
/// translates, 2^{-n} * sum_j C(n+1, j) * B(2 ts - j).
template <typename T>
std::pair<T, T> two_scale_eval(int n, T ts) {
  if (n < 0 || n > 3)
    throw DomainError("two_scale_eval: degree must be in 0..3");
  if (!std::isfinite(ts))
    throw DomainError("two_scale_eval: non-finite parameter");
  const KnotVector<T> knots = make_integer_knots<T>(n + 2);
  const BasisConvention open = BasisConvention::half_open();
  auto anchored = [&](T x) {
    if (x < T(0) || x > T(n + 1)) return T(0);
    return basis(knots, {0, n}, x, open);
  };
  const T lhs = anchored(ts);
  T rhs = T(0);
  T binom = T(1);
  for (int j = 0; j <= n + 1; ++j) {
    rhs += binom * anchored(T(2) * ts - static_cast<T>(j));
    binom = binom * static_cast<T>(n + 1 - j) / static_cast<T>(j + 1);
  }
  rhs /= static_cast<T>(1 << n);
  return {lhs, rhs};
}

namespace detail {

template <typename T>
Index min_open_points(const RefinementMask<T>& mask) {
  // Widest stencil tap reach plus the two held endpoints.
  return (mask.coefficients.size() + 3) / 2;
}

}  // namespace detail

/// One refinement round. Closed polygons double in size; open polygons keep
/// their two endpoints fixed, apply interior stencils only, and grow to
/// 2 * len - 1 points for the standard masks.
template <typename T>
ControlPolygon<T> subdivide_once(const ControlPolygon<T>& poly,
                                 const RefinementMask<T>& mask) {
  const Index n_pts = poly.points.rows();
  const Index len = mask.coefficients.size();
  const Index half = (len - 1) / 2;
  if (poly.closed) {
    if (n_pts < 2) throw DomainError("subdivide_once: closed polygon needs >= 2 points");
  } else if (n_pts < detail::min_open_points(mask)) {
    throw DomainError("subdivide_once: open polygon needs >= " +
                      std::to_string(detail::min_open_points(mask)) +
                      " points for this mask");
  }

  const Index out_n = poly.closed ? 2 * n_pts : 2 * n_pts - 1;
  ControlPolygon<T> out;
  out.closed = poly.closed;
  out.points.resize(out_n, 3);

  for (Index j = 0; j < out_n; ++j) {
    Eigen::Matrix<T, 1, 3> acc = Eigen::Matrix<T, 1, 3>::Zero();
    bool valid = true;
    for (Index m = 0; m < len && valid; ++m) {
      const Index offset = m - half;
      if ((j - offset) % 2 != 0) continue;
      Index i = (j - offset) / 2;
      if (poly.closed) {
        i = ((i % n_pts) + n_pts) % n_pts;
      } else if (i < 0 || i >= n_pts) {
        valid = false;
        break;
      }
      acc += (mask.coefficients[m] / mask.scale) * poly.points.row(i);
    }
    if (valid) {
      out.points.row(j) = acc;
    } else {
      // Boundary of an open polygon: hold the nearest endpoint.
      out.points.row(j) = poly.points.row(std::clamp<Index>((j + 1) / 2, 0, n_pts - 1));
    }
  }
  return out;
}

/// Refinement applied `depth` times; depth 0 returns the input unchanged.
template <typename T>
ControlPolygon<T> subdivide_to_depth(const ControlPolygon<T>& poly,
                                     const RefinementMask<T>& mask,
                                     int depth) {
  if (depth < 0) throw DomainError("subdivide_to_depth: negative depth");
  ControlPolygon<T> current = poly;
  for (int d = 0; d < depth; ++d) current = subdivide_once(current, mask);
  return current;
}

template <typename T>
struct ConvergenceEntry {
  int depth = 0;
  T max_distance = T(0);
};

/// For each depth, the farthest any refined point sits from a dense
/// evaluation of the uniform cubic spline whose control points are the input
/// polygon — the curve the cubic mask refines toward.
template <typename T>
std::vector<ConvergenceEntry<T>> convergence_report(
    const ControlPolygon<T>& poly, const RefinementMask<T>& mask,
    const std::vector<int>& depths, Index dense_samples = 10000) {
  for (std::size_t i = 1; i < depths.size(); ++i)
    if (depths[i] < depths[i - 1])
      throw DomainError("convergence_report: depths must be ascending");
  if (dense_samples < 2)
    throw DomainError("convergence_report: need >= 2 dense samples");

  const BSplineCurve<T> limit = make_uniform_curve(poly.points, 3, poly.closed);
  const CurveSet<T> dense = sample(limit, dense_samples);

  std::vector<ConvergenceEntry<T>> report;
  report.reserve(depths.size());
  ControlPolygon<T> current = poly;
  int at = 0;
  for (int depth : depths) {
    if (depth < 0) throw DomainError("convergence_report: negative depth");
    for (; at < depth; ++at) current = subdivide_once(current, mask);
    T max_d2 = T(0);
    for (Index i = 0; i < current.points.rows(); ++i) {
      const T d2 = (dense.points.rowwise() - current.points.row(i))
                       .rowwise()
                       .squaredNorm()
                       .minCoeff();
      max_d2 = std::max(max_d2, d2);
    }
    report.push_back({depth, std::sqrt(max_d2)});
  }
  return report;
}

}  // namespace bsp

#endif  // BSP_SUBDIVISION_HPP
