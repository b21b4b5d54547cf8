#ifndef BSP_CURVE_HPP
#define BSP_CURVE_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bsp/basis.hpp"
#include "bsp/errors.hpp"
#include "bsp/knots.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// A degree-n spline curve: knot vector plus ordered control points, one per
/// row. With N control points the knot vector has N + n + 1 values and the
/// curve lives on [t_n, t_N].
template <typename T>
struct BSplineCurve {
  int degree = 0;
  KnotVector<T> knots;
  PointList<T> control_points;

  BSplineCurve() = default;

  BSplineCurve(int degree_, KnotVector<T> knots_, PointList<T> control)
      : degree(degree_),
        knots(std::move(knots_)),
        control_points(std::move(control)) {
    validate();
  }

  Index num_control() const { return control_points.rows(); }
  T domain_min() const { return knots[degree]; }
  T domain_max() const { return knots[num_control()]; }

  void validate() const {
    const Index n_pts = control_points.rows();
    if (degree < 0) throw DomainError("curve degree must be >= 0");
    if (n_pts < degree + 1)
      throw DomainError("curve needs at least degree + 1 control points");
    if (knots.size() != n_pts + degree + 1)
      throw DomainError("knot vector length " + std::to_string(knots.size()) +
                        " does not match " + std::to_string(n_pts) +
                        " control points of degree " + std::to_string(degree));
    if (!(knots[degree] < knots[n_pts]))
      throw DomainError("curve domain is empty");
    if (!control_points.allFinite())
      throw DomainError("control points must be finite");
  }
};

/// Ordered samples of a curve: strictly increasing parameters and the
/// evaluated points.
template <typename T>
struct CurveSet {
  VecX<T> ts;
  PointList<T> points;
};

/// Curve point at parameter ts: the basis-weighted sum of all control
/// points. The summation deliberately runs over every control point so the
/// basis-evaluation count per sample equals the control count.
template <typename T>
Vec3<T> evaluate(const BSplineCurve<T>& curve, T ts,
                 BasisConvention conv = {}) {
  if (!std::isfinite(ts)) throw DomainError("evaluate: non-finite parameter");
  if (ts < curve.domain_min() || ts > curve.domain_max())
    throw DomainError("evaluate: parameter " + std::to_string(ts) +
                      " outside curve domain [" +
                      std::to_string(curve.domain_min()) + ", " +
                      std::to_string(curve.domain_max()) + "]");
  Vec3<T> acc = Vec3<T>::Zero();
  const Index n_pts = curve.num_control();
  for (Index k = 0; k < n_pts; ++k) {
    const T w = basis(curve.knots, {k, curve.degree}, ts, conv);
    acc += w * curve.control_points.row(k).transpose();
  }
  return acc;
}

/// `count` evenly spaced samples over the curve domain, endpoints included.
template <typename T>
CurveSet<T> sample(const BSplineCurve<T>& curve, Index count,
                   BasisConvention conv = {}) {
  if (count < 2) throw DomainError("sample: count must be >= 2");
  const T lo = curve.domain_min();
  const T hi = curve.domain_max();
  const T step = (hi - lo) / static_cast<T>(count - 1);
  CurveSet<T> out;
  out.ts.resize(count);
  out.points.resize(count, 3);
  for (Index i = 0; i < count; ++i) {
    const T t = (i == count - 1) ? hi : lo + static_cast<T>(i) * step;
    out.ts[i] = t;
    out.points.row(i) = evaluate(curve, t, conv).transpose();
  }
  return out;
}

namespace detail {

// Monotone-chain hull of 2D points, counter-clockwise, no repeated last point.
template <typename T>
std::vector<Vec2<T>> convex_hull_2d(std::vector<Vec2<T>> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2<T>& a, const Vec2<T>& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2<T>& a, const Vec2<T>& b) {
                          return a.x() == b.x() && a.y() == b.y();
                        }),
            pts.end());
  const Index n = static_cast<Index>(pts.size());
  if (n <= 2) return pts;
  auto cross = [](const Vec2<T>& o, const Vec2<T>& a, const Vec2<T>& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) -
           (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Vec2<T>> hull(2 * static_cast<std::size_t>(n));
  Index h = 0;
  for (Index i = 0; i < n; ++i) {
    while (h >= 2 && cross(hull[h - 2], hull[h - 1], pts[i]) <= T(0)) --h;
    hull[h++] = pts[i];
  }
  for (Index i = n - 2, base = h + 1; i >= 0; --i) {
    while (h >= base && cross(hull[h - 2], hull[h - 1], pts[i]) <= T(0)) --h;
    hull[h++] = pts[i];
  }
  hull.resize(h - 1);
  return hull;
}

template <typename T>
T point_segment_distance(const Vec2<T>& p, const Vec2<T>& a, const Vec2<T>& b) {
  const Vec2<T> ab = b - a;
  const T len2 = ab.squaredNorm();
  if (len2 == T(0)) return (p - a).norm();
  const T t = std::clamp((p - a).dot(ab) / len2, T(0), T(1));
  return (p - (a + t * ab)).norm();
}

}  // namespace detail

/// True iff every sampled point lies inside or on the 2D convex hull of the
/// control points, within tol on the half-plane tests. The curve must be
/// planar (constant z).
template <typename T>
bool convex_hull_contains(const BSplineCurve<T>& curve, const CurveSet<T>& pts,
                          T tol = T(1e-9)) {
  const PointList<T>& cp = curve.control_points;
  const T z0 = cp(0, 2);
  if (((cp.col(2).array() - z0).abs() > tol).any())
    throw DomainError("convex_hull_contains: curve is not planar in z");

  std::vector<Vec2<T>> control(static_cast<std::size_t>(cp.rows()));
  for (Index i = 0; i < cp.rows(); ++i) control[i] = Vec2<T>(cp(i, 0), cp(i, 1));
  const std::vector<Vec2<T>> hull = detail::convex_hull_2d(control);

  for (Index i = 0; i < pts.points.rows(); ++i) {
    if (std::abs(pts.points(i, 2) - z0) > tol) return false;
    const Vec2<T> p(pts.points(i, 0), pts.points(i, 1));
    if (hull.size() == 1) {
      if ((p - hull[0]).norm() > tol) return false;
    } else if (hull.size() == 2) {
      if (detail::point_segment_distance(p, hull[0], hull[1]) > tol)
        return false;
    } else {
      for (std::size_t e = 0; e < hull.size(); ++e) {
        const Vec2<T>& a = hull[e];
        const Vec2<T>& b = hull[(e + 1) % hull.size()];
        const Vec2<T> edge = b - a;
        const T len = edge.norm();
        const T side = edge.x() * (p.y() - a.y()) - edge.y() * (p.x() - a.x());
        if (side < -tol * len) return false;
      }
    }
  }
  return true;
}

/// A control point the curve passes through, and a parameter where it does.
template <typename T>
struct InterpolatedPoint {
  Vec3<T> point;
  T ts;
};

/// Finds every run of at least max(degree, 1) identical adjacent control
/// points and a parameter at which the curve meets the repeated point within
/// tol. Candidate parameters are the knots adjacent to the run plus a fine
/// scan of the spans the run controls.
template <typename T>
std::vector<InterpolatedPoint<T>> multiplicity_interpolation_check(
    const BSplineCurve<T>& curve, T tol = T(1e-9)) {
  std::vector<InterpolatedPoint<T>> found;
  const Index n_pts = curve.num_control();
  const int deg = curve.degree;
  const Index min_run = std::max<Index>(deg, 1);
  const T lo = curve.domain_min();
  const T hi = curve.domain_max();

  Index run_start = 0;
  for (Index i = 1; i <= n_pts; ++i) {
    const bool same =
        i < n_pts &&
        (curve.control_points.row(i).array() ==
         curve.control_points.row(run_start).array())
            .all();
    if (same) continue;
    const Index run_len = i - run_start;
    if (run_len >= min_run) {
      const Vec3<T> target = curve.control_points.row(run_start).transpose();
      // Window of spans whose active controls can fall inside the run.
      const T w_lo = std::max(lo, curve.knots[run_start + deg > 0 ? run_start + deg - 1 : 0]);
      const T w_hi = std::min(hi, curve.knots[std::min<Index>(run_start + run_len + deg, curve.knots.size() - 1)]);
      T best_ts = lo;
      T best_d = std::numeric_limits<T>::infinity();
      auto try_ts = [&](T t) {
        if (t < lo || t > hi) return;
        const T d = (evaluate(curve, t) - target).norm();
        if (d < best_d) {
          best_d = d;
          best_ts = t;
        }
      };
      try_ts(std::clamp(curve.knots[std::min<Index>(run_start + deg, curve.knots.size() - 1)], lo, hi));
      if (w_hi > w_lo) {
        const Index scan = 512;
        for (Index s = 0; s <= scan; ++s)
          try_ts(w_lo + (w_hi - w_lo) * static_cast<T>(s) / static_cast<T>(scan));
      }
      if (best_d <= tol) found.push_back({target, best_ts});
    }
    run_start = i;
  }
  return found;
}

/// Uniform integer-knot curve over the given control points. Closed curves
/// wrap the first `degree` points so the pieces join seamlessly across the
/// seam; the resulting domain spans exactly one period.
template <typename T>
BSplineCurve<T> make_uniform_curve(const PointList<T>& points, int degree,
                                   bool closed) {
  if (degree < 0) throw DomainError("make_uniform_curve: negative degree");
  const Index n_pts = points.rows();
  if (closed) {
    if (n_pts < 2) throw DomainError("make_uniform_curve: closed curve needs >= 2 points");
    PointList<T> wrapped(n_pts + degree, 3);
    wrapped.topRows(n_pts) = points;
    for (int j = 0; j < degree; ++j) wrapped.row(n_pts + j) = points.row(j % n_pts);
    return BSplineCurve<T>(degree, make_integer_knots<T>(wrapped.rows() + degree + 1),
                           std::move(wrapped));
  }
  if (n_pts < degree + 1)
    throw DomainError("make_uniform_curve: needs at least degree + 1 points");
  return BSplineCurve<T>(degree, make_integer_knots<T>(n_pts + degree + 1), points);
}

}  // namespace bsp

#endif  // BSP_CURVE_HPP
