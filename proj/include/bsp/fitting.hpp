#ifndef BSP_FITTING_HPP
#define BSP_FITTING_HPP

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bsp/basis.hpp"
#include "bsp/curve.hpp"
#include "bsp/errors.hpp"
#include "bsp/knots.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Least-squares problem: data points with one parameter each, fitted by a
/// spline of the given degree over the given knots.
template <typename T>
struct FitProblem {
  PointList<T> data;
  VecX<T> parameters;
  int degree = 3;
  KnotVector<T> knots;
  Index num_control = 0;

  FitProblem() = default;

  FitProblem(PointList<T> data_, VecX<T> parameters_, int degree_,
             KnotVector<T> knots_, Index num_control_)
      : data(std::move(data_)),
        parameters(std::move(parameters_)),
        degree(degree_),
        knots(std::move(knots_)),
        num_control(num_control_) {
    validate();
  }

  void validate() const {
    if (degree < 0) throw DomainError("fit degree must be >= 0");
    if (num_control < degree + 1)
      throw DomainError("fit needs at least degree + 1 control points");
    if (knots.size() != num_control + degree + 1)
      throw DomainError("fit knot vector length mismatch");
    if (parameters.size() != data.rows())
      throw DomainError("one parameter per data point required");
    if (!data.allFinite()) throw DomainError("fit data must be finite");
    const T lo = knots[degree];
    const T hi = knots[num_control];
    for (Index i = 0; i < parameters.size(); ++i) {
      if (!std::isfinite(parameters[i]) || parameters[i] < lo ||
          parameters[i] > hi)
        throw DomainError("fit parameter outside knot domain");
      if (i > 0 && parameters[i] < parameters[i - 1])
        throw DomainError("fit parameters must be nondecreasing");
    }
  }
};

/// Fitted control points and the root-mean-square of the per-point residual
/// distances.
template <typename T>
struct ControlSolution {
  PointList<T> control_points;
  T residual_rms = T(0);
};

/// Cumulative chord-length parameters mapped affinely onto [lo, hi]. Falls
/// back to uniform spacing when all points coincide.
template <typename T>
VecX<T> parameterize_chord_length(const PointList<T>& points, T lo, T hi) {
  const Index n = points.rows();
  if (n < 2) throw DomainError("parameterize_chord_length: need >= 2 points");
  VecX<T> cum(n);
  cum[0] = T(0);
  for (Index i = 1; i < n; ++i)
    cum[i] = cum[i - 1] + (points.row(i) - points.row(i - 1)).norm();
  const T total = cum[n - 1];
  VecX<T> out(n);
  if (total == T(0)) {
    for (Index i = 0; i < n; ++i)
      out[i] = lo + (hi - lo) * static_cast<T>(i) / static_cast<T>(n - 1);
    return out;
  }
  for (Index i = 0; i < n; ++i) out[i] = lo + (hi - lo) * cum[i] / total;
  out[n - 1] = hi;
  return out;
}

/// Evenly spaced parameters on [lo, hi].
template <typename T>
VecX<T> parameterize_uniform(Index count, T lo, T hi) {
  if (count < 2) throw DomainError("parameterize_uniform: need >= 2 values");
  VecX<T> out(count);
  for (Index i = 0; i < count; ++i)
    out[i] = lo + (hi - lo) * static_cast<T>(i) / static_cast<T>(count - 1);
  return out;
}

/// Collocation matrix: entry (i, k) is the k-th basis function at the i-th
/// parameter. Rows sum to one for parameters inside a clamped domain.
template <typename T>
MatX<T> build_collocation(const FitProblem<T>& problem) {
  problem.validate();
  MatX<T> a(problem.parameters.size(), problem.num_control);
  for (Index i = 0; i < problem.parameters.size(); ++i)
    for (Index k = 0; k < problem.num_control; ++k)
      a(i, k) = basis(problem.knots, {k, problem.degree}, problem.parameters[i]);
  return a;
}

namespace detail {

// Rank-checked least-squares solve via SVD. Mathematically the
// normal-equations solution, computed through an orthogonal factorization.
template <typename T>
ControlSolution<T> solve_collocation(const MatX<T>& a, const PointList<T>& b) {
  if (a.rows() < a.cols())
    throw RankError("least squares needs at least as many data points (" +
                    std::to_string(a.rows()) + ") as control points (" +
                    std::to_string(a.cols()) + ")");
  Eigen::JacobiSVD<MatX<T>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX<T>& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= T(1e-10) * sv[0])
    throw RankError("collocation matrix is rank deficient (singular values " +
                    std::to_string(static_cast<double>(sv[sv.size() - 1])) +
                    " vs " + std::to_string(static_cast<double>(sv[0])) + ")");
  ControlSolution<T> out;
  out.control_points = svd.solve(b);
  const PointList<T> residual = a * out.control_points - b;
  out.residual_rms =
      std::sqrt(residual.rowwise().squaredNorm().mean());
  return out;
}

}  // namespace detail

/// Least-squares control points for the fit problem.
template <typename T>
ControlSolution<T> solve_least_squares(const FitProblem<T>& problem) {
  return detail::solve_collocation(build_collocation(problem), problem.data);
}

/// Elementwise mean of same-length knot vectors; the mean of nondecreasing
/// sequences is nondecreasing.
template <typename T>
KnotVector<T> average_knot_vectors(const std::vector<KnotVector<T>>& vectors) {
  if (vectors.empty())
    throw DomainError("average_knot_vectors: empty input");
  const Index len = vectors.front().size();
  VecX<T> mean = VecX<T>::Zero(len);
  for (const KnotVector<T>& kv : vectors) {
    if (kv.size() != len)
      throw DomainError("average_knot_vectors: mismatched lengths");
    mean += kv.values();
  }
  mean /= static_cast<T>(vectors.size());
  return KnotVector<T>(std::move(mean));
}

/// Clamped knot vector for fitting: end knots repeated degree + 1 times at
/// the parameter range ends, interior knots at parameter quantiles (knot
/// averaging when the system is square), which keeps the collocation matrix
/// full rank for distinct parameters.
template <typename T>
KnotVector<T> make_fit_knots(const VecX<T>& parameters, int degree,
                             Index num_control) {
  const Index m = parameters.size();
  if (degree < 0 || num_control < degree + 1)
    throw DomainError("make_fit_knots: need num_control >= degree + 1");
  if (m < 2) throw DomainError("make_fit_knots: need >= 2 parameters");
  const T lo = parameters[0];
  const T hi = parameters[m - 1];
  if (!(lo < hi)) throw DomainError("make_fit_knots: empty parameter range");

  const Index interior = num_control - degree - 1;
  VecX<T> v(num_control + degree + 1);
  for (int i = 0; i <= degree; ++i) {
    v[i] = lo;
    v[v.size() - 1 - i] = hi;
  }
  if (interior > 0) {
    if (m == num_control && degree > 0) {
      // Knot averaging over consecutive parameter windows.
      for (Index j = 1; j <= interior; ++j) {
        T acc = T(0);
        for (Index i = j; i < j + degree; ++i) acc += parameters[i];
        v[degree + j] = acc / static_cast<T>(degree);
      }
    } else if (m > num_control) {
      // Parameter quantiles.
      const T d = static_cast<T>(m) / static_cast<T>(num_control - degree);
      for (Index j = 1; j <= interior; ++j) {
        const T pos = static_cast<T>(j) * d;
        const Index i = std::clamp<Index>(static_cast<Index>(std::floor(pos)),
                                          1, m - 1);
        const T alpha = pos - static_cast<T>(i);
        v[degree + j] = (T(1) - alpha) * parameters[i - 1] + alpha * parameters[i];
      }
    } else {
      // Under-determined problems get uniform interior knots; the rank
      // check reports them at solve time.
      for (Index j = 1; j <= interior; ++j)
        v[degree + j] =
            lo + (hi - lo) * static_cast<T>(j) / static_cast<T>(interior + 1);
    }
  }
  return KnotVector<T>(std::move(v));
}

/// One fitted cross-section: the curve plus the data and parameters it came
/// from, kept so the section can be refitted under a shared knot vector.
template <typename T>
struct SectionFit {
  std::string id;
  int slice = 0;
  bool closed = false;
  BSplineCurve<T> curve;
  PointList<T> data;
  VecX<T> parameters;
  T residual_rms = T(0);

  /// Control count of the free (unwrapped) representation.
  Index free_control_count() const {
    return closed ? curve.num_control() - curve.degree : curve.num_control();
  }
};

/// Open-curve least-squares fit with chord-length (or caller-supplied)
/// parameters on [0, 1] and quantile knots.
template <typename T>
SectionFit<T> fit_open_curve(const PointList<T>& points, int degree,
                             Index num_control, VecX<T> parameters = {}) {
  if (parameters.size() == 0)
    parameters = parameterize_chord_length(points, T(0), T(1));
  KnotVector<T> knots = make_fit_knots(parameters, degree, num_control);
  FitProblem<T> problem(points, parameters, degree, knots, num_control);
  ControlSolution<T> sol = solve_least_squares(problem);
  SectionFit<T> out;
  out.closed = false;
  out.curve = BSplineCurve<T>(degree, std::move(knots),
                              std::move(sol.control_points));
  out.data = points;
  out.parameters = std::move(parameters);
  out.residual_rms = sol.residual_rms;
  return out;
}

namespace detail {

// Collocation of a periodic fit: columns of the wrapped representation fold
// back onto the free control points.
template <typename T>
MatX<T> build_folded_collocation(const KnotVector<T>& knots, int degree,
                                 Index free_count, const VecX<T>& parameters) {
  const Index wrapped = free_count + degree;
  MatX<T> a = MatX<T>::Zero(parameters.size(), free_count);
  for (Index i = 0; i < parameters.size(); ++i)
    for (Index k = 0; k < wrapped; ++k)
      a(i, k % free_count) += basis(knots, {k, degree}, parameters[i]);
  return a;
}

template <typename T>
PointList<T> wrap_control_points(const PointList<T>& free_points, int degree) {
  const Index n = free_points.rows();
  PointList<T> wrapped(n + degree, 3);
  wrapped.topRows(n) = free_points;
  for (int j = 0; j < degree; ++j) wrapped.row(n + j) = free_points.row(j % n);
  return wrapped;
}

}  // namespace detail

/// Index of the point whose direction from the centroid lies closest to the
/// positive-x axis; used to place closed-fit seams consistently.
template <typename T>
Index seam_index(const PointList<T>& points) {
  const Eigen::Matrix<T, 1, 3> centroid = points.colwise().mean();
  Index best = 0;
  T best_angle = std::numeric_limits<T>::infinity();
  for (Index i = 0; i < points.rows(); ++i) {
    const T dx = points(i, 0) - centroid(0);
    const T dy = points(i, 1) - centroid(1);
    if (dx == T(0) && dy == T(0)) continue;
    const T angle = std::abs(std::atan2(dy, dx));
    if (angle < best_angle) {
      best_angle = angle;
      best = i;
    }
  }
  return best;
}

/// Periodic least-squares fit of a closed point loop (no repeated endpoint).
/// The loop is rotated so the seam sits at the point nearest the positive-x
/// direction from the centroid, parameterized by chord length around the
/// ring, and fitted on uniform integer knots with wrapped control points.
template <typename T>
SectionFit<T> fit_closed_curve(const PointList<T>& points, int degree,
                               Index num_control) {
  const Index m = points.rows();
  if (m < 3) throw DomainError("fit_closed_curve: need >= 3 points");
  if (degree < 1) throw DomainError("fit_closed_curve: degree must be >= 1");
  if (num_control < degree + 1)
    throw DomainError("fit_closed_curve: need num_control >= degree + 1");

  PointList<T> ring(m, 3);
  const Index seam = seam_index(points);
  for (Index i = 0; i < m; ++i) ring.row(i) = points.row((seam + i) % m);

  // Chord length around the ring, closing edge included.
  VecX<T> cum(m + 1);
  cum[0] = T(0);
  for (Index i = 1; i < m; ++i)
    cum[i] = cum[i - 1] + (ring.row(i) - ring.row(i - 1)).norm();
  cum[m] = cum[m - 1] + (ring.row(0) - ring.row(m - 1)).norm();
  const T total = cum[m];
  VecX<T> parameters(m);
  const T lo = static_cast<T>(degree);
  for (Index i = 0; i < m; ++i)
    parameters[i] =
        total > T(0)
            ? lo + static_cast<T>(num_control) * cum[i] / total
            : lo + static_cast<T>(num_control) * static_cast<T>(i) / static_cast<T>(m);

  const KnotVector<T> knots =
      make_integer_knots<T>(num_control + 2 * degree + 1);
  MatX<T> a = detail::build_folded_collocation(knots, degree, num_control,
                                               parameters);
  ControlSolution<T> sol = detail::solve_collocation(a, ring);

  SectionFit<T> out;
  out.closed = true;
  out.curve = BSplineCurve<T>(degree, knots,
                              detail::wrap_control_points(sol.control_points, degree));
  out.data = std::move(ring);
  out.parameters = std::move(parameters);
  out.residual_rms = sol.residual_rms;
  return out;
}

/// Refit a section's stored data under a different knot vector of the same
/// layout. Parameters are remapped affinely onto the new domain.
template <typename T>
SectionFit<T> refit_section(const SectionFit<T>& section,
                            const KnotVector<T>& knots) {
  const int degree = section.curve.degree;
  if (knots.size() != section.curve.knots.size())
    throw DomainError("refit_section: knot vector length mismatch");
  const Index free_count = section.free_control_count();
  const Index domain_hi_index = section.closed ? free_count + degree
                                               : free_count;
  const T old_lo = section.curve.knots[degree];
  const T old_hi = section.curve.knots[domain_hi_index];
  const T new_lo = knots[degree];
  const T new_hi = knots[domain_hi_index];
  VecX<T> parameters = ((section.parameters.array() - old_lo) /
                            (old_hi - old_lo) * (new_hi - new_lo) +
                        new_lo)
                           .matrix();

  SectionFit<T> out = section;
  out.parameters = parameters;
  if (section.closed) {
    MatX<T> a = detail::build_folded_collocation(knots, degree, free_count,
                                                 parameters);
    ControlSolution<T> sol = detail::solve_collocation(a, section.data);
    out.curve = BSplineCurve<T>(degree, knots,
                                detail::wrap_control_points(sol.control_points, degree));
    out.residual_rms = sol.residual_rms;
  } else {
    FitProblem<T> problem(section.data, parameters, degree, knots, free_count);
    ControlSolution<T> sol = solve_least_squares(problem);
    out.curve = BSplineCurve<T>(degree, knots, std::move(sol.control_points));
    out.residual_rms = sol.residual_rms;
  }
  return out;
}

}  // namespace bsp

#endif  // BSP_FITTING_HPP
