#ifndef BSP_CONTOURS_HPP
#define BSP_CONTOURS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Planar closed polyline from one slice of a stack.
template <typename T>
struct Contour {
  std::string id;
  int slice = 0;
  PointList2<T> points;
  bool closed = true;
};

/// Region moments of a polygon interior up to order 3, from the edge-sum
/// (Green's theorem) formulas. Orientation is normalized so the area is
/// positive.
template <typename T>
struct ContourMoments {
  T m00 = 0, m10 = 0, m01 = 0;
  T m20 = 0, m11 = 0, m02 = 0;
  T m30 = 0, m21 = 0, m12 = 0, m03 = 0;
  T cx = 0, cy = 0;
  T mu20 = 0, mu11 = 0, mu02 = 0;
  T mu30 = 0, mu21 = 0, mu12 = 0, mu03 = 0;

  T area() const { return m00; }
};

template <typename T>
ContourMoments<T> contour_moments(const Contour<T>& contour) {
  const Index n = contour.points.rows();
  if (n < 3) throw DomainError("contour_moments: need >= 3 points");
  if (!contour.points.allFinite())
    throw DomainError("contour_moments: non-finite contour point");

  ContourMoments<T> m;
  for (Index i = 0; i < n; ++i) {
    const Index j = (i + 1) % n;
    const T xi = contour.points(i, 0), yi = contour.points(i, 1);
    const T xj = contour.points(j, 0), yj = contour.points(j, 1);
    const T w = xi * yj - xj * yi;
    m.m00 += w;
    m.m10 += w * (xi + xj);
    m.m01 += w * (yi + yj);
    m.m20 += w * (xi * xi + xi * xj + xj * xj);
    m.m11 += w * (T(2) * xi * yi + xi * yj + xj * yi + T(2) * xj * yj);
    m.m02 += w * (yi * yi + yi * yj + yj * yj);
    m.m30 += w * (xi * xi * xi + xi * xi * xj + xi * xj * xj + xj * xj * xj);
    m.m21 += w * (T(3) * xi * xi * yi + T(2) * xi * xj * yi + xj * xj * yi +
                  xi * xi * yj + T(2) * xi * xj * yj + T(3) * xj * xj * yj);
    m.m12 += w * (T(3) * yi * yi * xi + T(2) * yi * yj * xi + yj * yj * xi +
                  yi * yi * xj + T(2) * yi * yj * xj + T(3) * yj * yj * xj);
    m.m03 += w * (yi * yi * yi + yi * yi * yj + yi * yj * yj + yj * yj * yj);
  }
  m.m00 /= T(2);
  m.m10 /= T(6);
  m.m01 /= T(6);
  m.m20 /= T(12);
  m.m11 /= T(24);
  m.m02 /= T(12);
  m.m30 /= T(20);
  m.m21 /= T(60);
  m.m12 /= T(60);
  m.m03 /= T(20);

  const T scale = std::max(T(1), contour.points.cwiseAbs().maxCoeff());
  if (std::abs(m.m00) <= T(1e-14) * scale * scale)
    throw DomainError("contour_moments: degenerate contour (zero area)");
  if (m.m00 < T(0)) {
    // Clockwise input; flip traversal sign.
    m.m00 = -m.m00; m.m10 = -m.m10; m.m01 = -m.m01;
    m.m20 = -m.m20; m.m11 = -m.m11; m.m02 = -m.m02;
    m.m30 = -m.m30; m.m21 = -m.m21; m.m12 = -m.m12; m.m03 = -m.m03;
  }

  m.cx = m.m10 / m.m00;
  m.cy = m.m01 / m.m00;
  m.mu20 = m.m20 - m.cx * m.m10;
  m.mu11 = m.m11 - m.cx * m.m01;
  m.mu02 = m.m02 - m.cy * m.m01;
  m.mu30 = m.m30 - T(3) * m.cx * m.m20 + T(2) * m.cx * m.cx * m.m10;
  m.mu21 = m.m21 - T(2) * m.cx * m.m11 - m.cy * m.m20 +
           T(2) * m.cx * m.cx * m.m01;
  m.mu12 = m.m12 - T(2) * m.cy * m.m11 - m.cx * m.m02 +
           T(2) * m.cy * m.cy * m.m10;
  m.mu03 = m.m03 - T(3) * m.cy * m.m02 + T(2) * m.cy * m.cy * m.m01;
  return m;
}

/// The seven moment invariants from scale-normalized central moments.
/// Invariant under translation, rotation and uniform scaling; the last one
/// flips sign under reflection.
template <typename T>
std::array<T, 7> hu_moments(const ContourMoments<T>& m) {
  if (!(m.m00 > T(0)))
    throw DomainError("hu_moments: degenerate moments (non-positive area)");
  const T s2 = m.m00 * m.m00;                    // order-2 normalizer
  const T s3 = s2 * std::sqrt(m.m00);            // order-3 normalizer
  const T n20 = m.mu20 / s2, n11 = m.mu11 / s2, n02 = m.mu02 / s2;
  const T n30 = m.mu30 / s3, n21 = m.mu21 / s3, n12 = m.mu12 / s3,
          n03 = m.mu03 / s3;

  std::array<T, 7> phi;
  phi[0] = n20 + n02;
  phi[1] = (n20 - n02) * (n20 - n02) + T(4) * n11 * n11;
  phi[2] = (n30 - T(3) * n12) * (n30 - T(3) * n12) +
           (T(3) * n21 - n03) * (T(3) * n21 - n03);
  phi[3] = (n30 + n12) * (n30 + n12) + (n21 + n03) * (n21 + n03);
  phi[4] = (n30 - T(3) * n12) * (n30 + n12) *
               ((n30 + n12) * (n30 + n12) - T(3) * (n21 + n03) * (n21 + n03)) +
           (T(3) * n21 - n03) * (n21 + n03) *
               (T(3) * (n30 + n12) * (n30 + n12) - (n21 + n03) * (n21 + n03));
  phi[5] = (n20 - n02) *
               ((n30 + n12) * (n30 + n12) - (n21 + n03) * (n21 + n03)) +
           T(4) * n11 * (n30 + n12) * (n21 + n03);
  phi[6] = (T(3) * n21 - n03) * (n30 + n12) *
               ((n30 + n12) * (n30 + n12) - T(3) * (n21 + n03) * (n21 + n03)) -
           (n30 - T(3) * n12) * (n21 + n03) *
               (T(3) * (n30 + n12) * (n30 + n12) - (n21 + n03) * (n21 + n03));
  return phi;
}

/// Signed log compression, sign(h) * log10(|h| + 1e-30); keeps moments of
/// very different magnitudes comparable in feature space.
template <typename T>
T log_map(T h) {
  const T mag = std::log10(std::abs(h) + T(1e-30));
  return h > T(0) ? mag : (h < T(0) ? -mag : T(0));
}

/// Centroid plus log-mapped invariants of one contour. Full layout is
/// [cx, cy, phi1..phi7]; `selection` picks the active subset.
template <typename T>
struct FeatureVector {
  T cx = 0, cy = 0;
  std::array<T, 7> hu_log{};

  VecX<T> full() const {
    VecX<T> v(9);
    v << cx, cy, hu_log[0], hu_log[1], hu_log[2], hu_log[3], hu_log[4],
        hu_log[5], hu_log[6];
    return v;
  }

  VecX<T> select(const std::vector<int>& selection) const {
    const VecX<T> f = full();
    VecX<T> v(static_cast<Index>(selection.size()));
    for (std::size_t i = 0; i < selection.size(); ++i) {
      if (selection[i] < 0 || selection[i] >= 9)
        throw DomainError("feature selection index out of range");
      v[static_cast<Index>(i)] = f[selection[i]];
    }
    return v;
  }
};

/// Centroid coordinates and the second invariant: the subset that separates
/// contour families best in this pipeline.
inline std::vector<int> default_feature_selection() { return {0, 1, 3}; }

inline std::vector<int> full_feature_selection() {
  return {0, 1, 2, 3, 4, 5, 6, 7, 8};
}

template <typename T>
FeatureVector<T> contour_features(const Contour<T>& contour) {
  const ContourMoments<T> m = contour_moments(contour);
  const std::array<T, 7> phi = hu_moments(m);
  FeatureVector<T> f;
  f.cx = m.cx;
  f.cy = m.cy;
  for (int i = 0; i < 7; ++i) f.hu_log[i] = log_map(phi[i]);
  return f;
}

/// Per-dimension z-score normalization. Rejects constant dimensions.
template <typename T>
struct Normalization {
  VecX<T> mean;
  VecX<T> stddev;

  static Normalization fit(const MatX<T>& rows) {
    if (rows.rows() < 1) throw DomainError("normalization: no data");
    Normalization out;
    out.mean = rows.colwise().mean();
    out.stddev.resize(rows.cols());
    for (Index c = 0; c < rows.cols(); ++c) {
      const T var = (rows.col(c).array() - out.mean[c]).square().mean();
      out.stddev[c] = std::sqrt(var);
      if (!(out.stddev[c] > T(0)))
        throw DomainError("normalization: feature dimension " +
                          std::to_string(c) + " is constant");
    }
    return out;
  }

  VecX<T> apply(const VecX<T>& v) const {
    return ((v - mean).array() / stddev.array()).matrix();
  }

  VecX<T> invert(const VecX<T>& v) const {
    return ((v.array() * stddev.array()) + mean.array()).matrix();
  }

  MatX<T> apply_rows(const MatX<T>& rows) const {
    MatX<T> out(rows.rows(), rows.cols());
    for (Index c = 0; c < rows.cols(); ++c)
      out.col(c) = (rows.col(c).array() - mean[c]) / stddev[c];
    return out;
  }
};

namespace detail {

// Platform-stable uniform double in [0, 1) from a 64-bit generator.
inline double canonical_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

template <typename T>
struct KMeansResult {
  MatX<T> centroids;
  std::vector<Index> assignments;
  T inertia = T(0);
  int iterations = 0;
  std::vector<T> inertia_trace;
};

/// Seeded, deterministic Lloyd iterations from k-means++ starts. Ties in
/// the nearest-centroid assignment break toward the lower cluster index;
/// clusters that empty out are re-seeded to the farthest point.
template <typename T>
KMeansResult<T> kmeans(const MatX<T>& features, Index k, std::uint64_t seed) {
  const Index m = features.rows();
  if (k < 1) throw DomainError("kmeans: k must be >= 1");
  if (m < k)
    throw DomainError("kmeans: fewer points (" + std::to_string(m) +
                      ") than clusters (" + std::to_string(k) + ")");

  std::mt19937_64 rng(seed);
  MatX<T> centroids(k, features.cols());

  // k-means++ seeding.
  {
    const Index first =
        std::min<Index>(static_cast<Index>(detail::canonical_unit(rng) * m), m - 1);
    centroids.row(0) = features.row(first);
    VecX<T> best_d2 =
        (features.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    for (Index c = 1; c < k; ++c) {
      const T total = best_d2.sum();
      Index chosen = 0;
      if (total > T(0)) {
        const T target = static_cast<T>(detail::canonical_unit(rng)) * total;
        T acc = T(0);
        chosen = m - 1;
        for (Index i = 0; i < m; ++i) {
          acc += best_d2[i];
          if (acc > target) {
            chosen = i;
            break;
          }
        }
      } else {
        chosen = c % m;  // all remaining points coincide with a centroid
      }
      centroids.row(c) = features.row(chosen);
      best_d2 = best_d2.cwiseMin(
          (features.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
  }

  KMeansResult<T> result;
  result.assignments.assign(static_cast<std::size_t>(m), 0);
  const int max_iterations = 300;
  const T tol = T(1e-9);

  for (int it = 0; it < max_iterations; ++it) {
    // Assignment step.
    T inertia = T(0);
    for (Index i = 0; i < m; ++i) {
      Index best = 0;
      T best_d2 = std::numeric_limits<T>::infinity();
      for (Index c = 0; c < k; ++c) {
        const T d2 = (features.row(i) - centroids.row(c)).squaredNorm();
        if (d2 < best_d2) {
          best_d2 = d2;
          best = c;
        }
      }
      result.assignments[static_cast<std::size_t>(i)] = best;
      inertia += best_d2;
    }
    result.inertia = inertia;
    result.inertia_trace.push_back(inertia);
    result.iterations = it + 1;

    // Update step.
    MatX<T> next = MatX<T>::Zero(k, features.cols());
    VecX<T> counts = VecX<T>::Zero(k);
    for (Index i = 0; i < m; ++i) {
      next.row(result.assignments[static_cast<std::size_t>(i)]) += features.row(i);
      counts[result.assignments[static_cast<std::size_t>(i)]] += T(1);
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > T(0)) {
        next.row(c) /= counts[c];
      } else {
        // Re-seed an empty cluster to the point farthest from its centroid.
        Index farthest = 0;
        T far_d2 = -T(1);
        for (Index i = 0; i < m; ++i) {
          const T d2 =
              (features.row(i) -
               centroids.row(result.assignments[static_cast<std::size_t>(i)]))
                  .squaredNorm();
          if (d2 > far_d2) {
            far_d2 = d2;
            farthest = i;
          }
        }
        next.row(c) = features.row(farthest);
      }
    }

    const T shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = next;
    if (shift < tol) break;
  }

  result.centroids = centroids;
  return result;
}

/// Fitted clustering model: normalization, centroids in normalized space,
/// the feature subset in use, and which cluster is the region of interest.
template <typename T>
struct ClusterModel {
  Index k = 0;
  MatX<T> centroids;
  Normalization<T> normalization;
  std::vector<int> selection;
  Index roi_cluster = -1;

  VecX<T> normalized_features(const Contour<T>& contour) const {
    return normalization.apply(contour_features(contour).select(selection));
  }

  std::pair<Index, T> nearest(const VecX<T>& normalized) const {
    Index best = 0;
    T best_d2 = std::numeric_limits<T>::infinity();
    for (Index c = 0; c < k; ++c) {
      const T d2 = (normalized.transpose() - centroids.row(c)).squaredNorm();
      if (d2 < best_d2) {
        best_d2 = d2;
        best = c;
      }
    }
    return {best, std::sqrt(best_d2)};
  }
};

/// Clusters the contours' selected features after z-score normalization.
template <typename T>
ClusterModel<T> fit_cluster_model(const std::vector<Contour<T>>& contours,
                                  const std::vector<int>& selection, Index k,
                                  std::uint64_t seed) {
  if (contours.empty()) throw DomainError("fit_cluster_model: no contours");
  MatX<T> raw(static_cast<Index>(contours.size()),
              static_cast<Index>(selection.size()));
  for (std::size_t i = 0; i < contours.size(); ++i)
    raw.row(static_cast<Index>(i)) =
        contour_features(contours[i]).select(selection).transpose();
  ClusterModel<T> model;
  model.k = k;
  model.selection = selection;
  model.normalization = Normalization<T>::fit(raw);
  const KMeansResult<T> res = kmeans(model.normalization.apply_rows(raw), k, seed);
  model.centroids = res.centroids;
  return model;
}

/// Marks the cluster nearest to the exemplar contour as the region of
/// interest.
template <typename T>
void select_roi_cluster(ClusterModel<T>& model, const Contour<T>& exemplar) {
  model.roi_cluster = model.nearest(model.normalized_features(exemplar)).first;
}

/// Nearest-centroid classification: is the contour in the RoI cluster, and
/// how far is it from the winning centroid.
template <typename T>
std::pair<bool, T> classify_roi(const ClusterModel<T>& model,
                                const Contour<T>& contour) {
  if (model.roi_cluster < 0 || model.roi_cluster >= model.k)
    throw DomainError("classify_roi: model has no RoI cluster selected");
  const auto [cluster, distance] = model.nearest(model.normalized_features(contour));
  return {cluster == model.roi_cluster, distance};
}

}  // namespace bsp

#endif  // BSP_CONTOURS_HPP
