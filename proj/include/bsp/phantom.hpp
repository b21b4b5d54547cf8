#ifndef BSP_PHANTOM_HPP
#define BSP_PHANTOM_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bsp/contours.hpp"
#include "bsp/errors.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Synthetic contour datasets standing in for pre-extracted scan contours.
enum class PhantomKind { cylinder, ellipsoid_stack, lung_like_distractors };

inline PhantomKind parse_phantom_kind(const std::string& name) {
  if (name == "cylinder") return PhantomKind::cylinder;
  if (name == "ellipsoid-stack") return PhantomKind::ellipsoid_stack;
  if (name == "lung-like+distractors")
    return PhantomKind::lung_like_distractors;
  throw DomainError("unknown phantom kind '" + name +
                    "' (expected cylinder, ellipsoid-stack, or "
                    "lung-like+distractors)");
}

struct PhantomParams {
  PhantomKind kind = PhantomKind::cylinder;
  int slices = 10;
  int points_per_contour = 64;
  double radius = 25.0;
  double noise = 0.0;
  int distractors = 1;  // per slice, lung-like phantom only
  std::uint64_t seed = 0;
};

struct LabeledContours {
  std::vector<Contour<double>> contours;
  std::vector<std::string> labels;  // "roi" or "distractor", parallel array
};

namespace detail {

inline double phantom_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double phantom_symmetric(std::mt19937_64& rng) {
  return 2.0 * phantom_unit(rng) - 1.0;
}

// Radial polygon around (cx, cy): radius_fn(theta) sampled at even angles,
// plus optional radial jitter.
inline Contour<double> radial_contour(const std::string& id, int slice,
                                      double cx, double cy, int n_points,
                                      double noise, std::mt19937_64& rng,
                                      const std::function<double(double)>& radius_fn) {
  Contour<double> c;
  c.id = id;
  c.slice = slice;
  c.points.resize(n_points, 2);
  for (int i = 0; i < n_points; ++i) {
    const double theta = 2.0 * EIGEN_PI * i / n_points;
    double r = radius_fn(theta);
    if (noise > 0.0) r += noise * r * phantom_symmetric(rng);
    c.points(i, 0) = cx + r * std::cos(theta);
    c.points(i, 1) = cy + r * std::sin(theta);
  }
  return c;
}

}  // namespace detail

/// Deterministic synthetic dataset for the given parameters. Slice index s
/// doubles as the section height z = s downstream.
inline LabeledContours generate_phantom(const PhantomParams& params) {
  if (params.slices < 1) throw DomainError("phantom: slices must be >= 1");
  if (params.points_per_contour < 8)
    throw DomainError("phantom: need >= 8 points per contour");
  if (!(params.radius > 0)) throw DomainError("phantom: radius must be > 0");
  if (params.noise < 0 || params.noise >= 0.5)
    throw DomainError("phantom: noise must be in [0, 0.5)");

  std::mt19937_64 rng(params.seed);
  LabeledContours out;

  switch (params.kind) {
    case PhantomKind::cylinder: {
      const double cx = 50.0, cy = 50.0;
      for (int s = 0; s < params.slices; ++s) {
        out.contours.push_back(detail::radial_contour(
            "cyl-" + std::to_string(s), s, cx, cy, params.points_per_contour,
            params.noise, rng, [&](double) { return params.radius; }));
        out.labels.push_back("roi");
      }
      break;
    }
    case PhantomKind::ellipsoid_stack: {
      const double cx = 50.0, cy = 50.0;
      const double mid = 0.5 * (params.slices - 1);
      const double semi = mid + 1.0;  // keep every slice off the poles
      for (int s = 0; s < params.slices; ++s) {
        const double rel = (s - mid) / semi;
        const double scale = std::sqrt(std::max(0.05, 1.0 - rel * rel));
        const double a = 1.2 * params.radius * scale;
        const double b = 0.8 * params.radius * scale;
        out.contours.push_back(detail::radial_contour(
            "ell-" + std::to_string(s), s, cx, cy, params.points_per_contour,
            params.noise, rng, [&](double theta) {
              const double c = std::cos(theta), sn = std::sin(theta);
              return a * b / std::sqrt(b * b * c * c + a * a * sn * sn);
            }));
        out.labels.push_back("roi");
      }
      break;
    }
    case PhantomKind::lung_like_distractors: {
      // Bean-shaped RoI family and elongated distractors, separated both in
      // centroid position and in elongation (second invariant).
      for (int s = 0; s < params.slices; ++s) {
        const double jx = 3.0 * detail::phantom_symmetric(rng);
        const double jy = 3.0 * detail::phantom_symmetric(rng);
        const double js = 1.0 + 0.1 * detail::phantom_symmetric(rng);
        const double base = params.radius * js;
        out.contours.push_back(detail::radial_contour(
            "lung-" + std::to_string(s), s, 35.0 + jx, 45.0 + jy,
            params.points_per_contour, params.noise, rng, [&](double theta) {
              return base * (1.0 + 0.18 * std::cos(theta) -
                             0.22 * std::cos(2.0 * theta));
            }));
        out.labels.push_back("roi");

        for (int d = 0; d < params.distractors; ++d) {
          const double dx = 3.0 * detail::phantom_symmetric(rng);
          const double dy = 3.0 * detail::phantom_symmetric(rng);
          const double ds = 1.0 + 0.1 * detail::phantom_symmetric(rng);
          const double a = 1.6 * params.radius * ds;
          const double b = 0.45 * params.radius * ds;
          out.contours.push_back(detail::radial_contour(
              "rib-" + std::to_string(s) + "-" + std::to_string(d), s,
              78.0 + dx + 6.0 * d, 50.0 + dy, params.points_per_contour,
              params.noise, rng, [&](double theta) {
                const double c = std::cos(theta), sn = std::sin(theta);
                return a * b / std::sqrt(b * b * c * c + a * a * sn * sn);
              }));
          out.labels.push_back("distractor");
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace bsp

#endif  // BSP_PHANTOM_HPP
