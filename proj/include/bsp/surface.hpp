#ifndef BSP_SURFACE_HPP
#define BSP_SURFACE_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bsp/basis.hpp"
#include "bsp/curve.hpp"
#include "bsp/errors.hpp"
#include "bsp/fitting.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Tensor-product spline surface. The control net is stored per coordinate;
/// rows follow the v direction (one row per v control), columns the u
/// direction (one column per section control point).
template <typename T>
struct TensorSurface {
  int degree_u = 3;
  int degree_v = 3;
  KnotVector<T> knots_u;
  KnotVector<T> knots_v;
  MatX<T> net_x, net_y, net_z;

  Index rows() const { return net_x.rows(); }
  Index cols() const { return net_x.cols(); }

  void validate() const {
    if (rows() != knots_v.size() - degree_v - 1)
      throw DomainError("surface net rows do not match v knots");
    if (cols() != knots_u.size() - degree_u - 1)
      throw DomainError("surface net columns do not match u knots");
    if (net_y.rows() != rows() || net_y.cols() != cols() ||
        net_z.rows() != rows() || net_z.cols() != cols())
      throw DomainError("surface net coordinate shapes differ");
    if (!net_x.allFinite() || !net_y.allFinite() || !net_z.allFinite())
      throw DomainError("surface net must be finite");
  }

  T u_min() const { return knots_u[degree_u]; }
  T u_max() const { return knots_u[cols()]; }
  T v_min() const { return knots_v[degree_v]; }
  T v_max() const { return knots_v[rows()]; }
};

/// Rewrites all sections over the elementwise-mean knot vector, refitting
/// each one against its stored sample data so the curves stay close to the
/// sections they approximate.
template <typename T>
std::vector<SectionFit<T>> make_sections_compatible(
    const std::vector<SectionFit<T>>& sections) {
  if (sections.empty())
    throw DomainError("make_sections_compatible: no sections");
  const int degree = sections.front().curve.degree;
  const Index n_control = sections.front().curve.num_control();
  const bool closed = sections.front().closed;
  std::vector<KnotVector<T>> knot_vectors;
  knot_vectors.reserve(sections.size());
  for (const SectionFit<T>& s : sections) {
    if (s.curve.degree != degree)
      throw DomainError("make_sections_compatible: mixed degrees");
    if (s.curve.num_control() != n_control)
      throw DomainError("make_sections_compatible: mixed control counts");
    if (s.closed != closed)
      throw DomainError("make_sections_compatible: mixed open/closed sections");
    knot_vectors.push_back(s.curve.knots);
  }
  const KnotVector<T> common = average_knot_vectors(knot_vectors);
  std::vector<SectionFit<T>> out;
  out.reserve(sections.size());
  for (const SectionFit<T>& s : sections) {
    if (s.curve.knots == common) {
      out.push_back(s);
    } else {
      out.push_back(refit_section(s, common));
    }
  }
  return out;
}

/// Mean absolute angular offset, across adjacent sections, of the seam
/// control point's direction from the section's control centroid. A rough
/// diagnostic for surface twist; radians.
template <typename T>
T twist_metric(const std::vector<BSplineCurve<T>>& sections) {
  if (sections.size() < 2) return T(0);
  std::vector<T> angles;
  angles.reserve(sections.size());
  for (const BSplineCurve<T>& c : sections) {
    const Eigen::Matrix<T, 1, 3> centroid = c.control_points.colwise().mean();
    angles.push_back(std::atan2(c.control_points(0, 1) - centroid(1),
                                c.control_points(0, 0) - centroid(0)));
  }
  T acc = T(0);
  const T pi = static_cast<T>(EIGEN_PI);
  for (std::size_t i = 1; i < angles.size(); ++i) {
    T d = std::abs(angles[i] - angles[i - 1]);
    if (d > pi) d = T(2) * pi - d;
    acc += d;
  }
  return acc / static_cast<T>(angles.size() - 1);
}

/// Lofts compatible sections into a tensor surface: the k-th control points
/// of all sections form a column that is fitted (interpolated when square)
/// by a degree_v curve over a shared chord-length parameterization of the
/// section centroids. num_control_v of 0 picks roughly two thirds of the
/// section count, at least degree_v + 1.
template <typename T>
TensorSurface<T> loft(const std::vector<BSplineCurve<T>>& sections,
                      int degree_v, Index num_control_v = 0) {
  const Index n_sections = static_cast<Index>(sections.size());
  if (degree_v < 1) throw DomainError("loft: degree_v must be >= 1");
  if (n_sections < degree_v + 1)
    throw DomainError("loft: need at least degree_v + 1 sections, got " +
                      std::to_string(n_sections));
  const BSplineCurve<T>& first = sections.front();
  for (const BSplineCurve<T>& c : sections) {
    if (c.degree != first.degree || c.num_control() != first.num_control() ||
        c.knots != first.knots)
      throw DomainError("loft: sections are not compatible");
  }

  if (num_control_v == 0)
    num_control_v = std::max<Index>(degree_v + 1, (2 * n_sections) / 3);
  num_control_v = std::min(num_control_v, n_sections);
  if (num_control_v < degree_v + 1)
    throw DomainError("loft: num_control_v must be >= degree_v + 1");

  // Chord length over section control centroids.
  PointList<T> centroids(n_sections, 3);
  for (Index s = 0; s < n_sections; ++s)
    centroids.row(s) = sections[s].control_points.colwise().mean();
  const VecX<T> v_params = parameterize_chord_length(centroids, T(0), T(1));
  const KnotVector<T> knots_v = make_fit_knots(v_params, degree_v, num_control_v);

  // All columns share the collocation matrix; solve them as one batch.
  const Index n_cols = first.num_control();
  MatX<T> a(n_sections, num_control_v);
  for (Index s = 0; s < n_sections; ++s)
    for (Index r = 0; r < num_control_v; ++r)
      a(s, r) = basis(knots_v, {r, degree_v}, v_params[s]);

  MatX<T> rhs(n_sections, 3 * n_cols);
  for (Index s = 0; s < n_sections; ++s)
    for (Index k = 0; k < n_cols; ++k) {
      rhs(s, 3 * k + 0) = sections[s].control_points(k, 0);
      rhs(s, 3 * k + 1) = sections[s].control_points(k, 1);
      rhs(s, 3 * k + 2) = sections[s].control_points(k, 2);
    }

  Eigen::JacobiSVD<MatX<T>> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX<T>& sv = svd.singularValues();
  if (sv.size() == 0 || sv[sv.size() - 1] <= T(1e-10) * sv[0])
    throw RankError("loft: column fit collocation is rank deficient");
  const MatX<T> net = svd.solve(rhs);

  TensorSurface<T> out;
  out.degree_u = first.degree;
  out.degree_v = degree_v;
  out.knots_u = first.knots;
  out.knots_v = knots_v;
  out.net_x.resize(num_control_v, n_cols);
  out.net_y.resize(num_control_v, n_cols);
  out.net_z.resize(num_control_v, n_cols);
  for (Index r = 0; r < num_control_v; ++r)
    for (Index k = 0; k < n_cols; ++k) {
      out.net_x(r, k) = net(r, 3 * k + 0);
      out.net_y(r, k) = net(r, 3 * k + 1);
      out.net_z(r, k) = net(r, 3 * k + 2);
    }
  out.validate();
  return out;
}

/// Surface point: the double basis-weighted sum over the control net.
template <typename T>
Vec3<T> evaluate_surface(const TensorSurface<T>& surface, T u, T v) {
  if (!std::isfinite(u) || !std::isfinite(v))
    throw DomainError("evaluate_surface: non-finite parameters");
  if (u < surface.u_min() || u > surface.u_max() || v < surface.v_min() ||
      v > surface.v_max())
    throw DomainError("evaluate_surface: parameters outside domain");
  VecX<T> bu(surface.cols());
  for (Index k = 0; k < surface.cols(); ++k)
    bu[k] = basis(surface.knots_u, {k, surface.degree_u}, u);
  VecX<T> bv(surface.rows());
  for (Index r = 0; r < surface.rows(); ++r)
    bv[r] = basis(surface.knots_v, {r, surface.degree_v}, v);
  return Vec3<T>(bv.dot(surface.net_x * bu), bv.dot(surface.net_y * bu),
                 bv.dot(surface.net_z * bu));
}

/// Evaluated grid with quad connectivity. Vertices are ordered row-major in
/// v then u: vertex(iv, iu) = iv * res_u + iu.
template <typename T>
struct QuadMesh {
  PointList<T> vertices;
  Eigen::Matrix<Index, Eigen::Dynamic, 4> quads;
  bool degenerate = false;
};

template <typename T>
QuadMesh<T> tessellate(const TensorSurface<T>& surface, Index res_u,
                       Index res_v) {
  if (res_u < 2 || res_v < 2)
    throw DomainError("tessellate: resolutions must be >= 2");
  QuadMesh<T> mesh;
  mesh.vertices.resize(res_u * res_v, 3);
  const T u0 = surface.u_min(), u1 = surface.u_max();
  const T v0 = surface.v_min(), v1 = surface.v_max();
  for (Index iv = 0; iv < res_v; ++iv) {
    const T v = (iv == res_v - 1)
                    ? v1
                    : v0 + (v1 - v0) * static_cast<T>(iv) / static_cast<T>(res_v - 1);
    for (Index iu = 0; iu < res_u; ++iu) {
      const T u = (iu == res_u - 1)
                      ? u1
                      : u0 + (u1 - u0) * static_cast<T>(iu) / static_cast<T>(res_u - 1);
      mesh.vertices.row(iv * res_u + iu) =
          evaluate_surface(surface, u, v).transpose();
    }
  }
  mesh.quads.resize((res_u - 1) * (res_v - 1), 4);
  Index q = 0;
  for (Index iv = 0; iv + 1 < res_v; ++iv)
    for (Index iu = 0; iu + 1 < res_u; ++iu) {
      mesh.quads(q, 0) = iv * res_u + iu;
      mesh.quads(q, 1) = iv * res_u + iu + 1;
      mesh.quads(q, 2) = (iv + 1) * res_u + iu + 1;
      mesh.quads(q, 3) = (iv + 1) * res_u + iu;
      ++q;
    }
  mesh.degenerate =
      ((mesh.vertices.rowwise() - mesh.vertices.row(0)).rowwise().norm().maxCoeff() ==
       T(0));
  return mesh;
}

}  // namespace bsp

#endif  // BSP_SURFACE_HPP
