#ifndef BSP_BASIS_HPP
#define BSP_BASIS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bsp/errors.hpp"
#include "bsp/knots.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Segment index k and degree n of one basis function.
struct BasisIndex {
  Index k = 0;
  int n = 0;
};

/// Endpoint convention for the degree-0 span indicator. The default treats
/// every span as half-open [t_k, t_{k+1}) and closes the final nonempty span
/// on the right, so the basis sums to one up to and including the last knot.
/// half_open() keeps the strict right-open behaviour everywhere.
struct BasisConvention {
  bool right_end_closed = true;

  static constexpr BasisConvention closed_right() { return {true}; }
  static constexpr BasisConvention half_open() { return {false}; }
};

namespace detail {

inline std::atomic<std::uint64_t>& basis_counter() {
  static std::atomic<std::uint64_t> counter{0};
  return counter;
}

}  // namespace detail

/// Number of degree-n basis evaluations performed so far (instrumentation
/// for cost accounting; thread-safe, does not affect results).
inline std::uint64_t basis_eval_count() {
  return detail::basis_counter().load(std::memory_order_relaxed);
}

inline void reset_basis_eval_count() {
  detail::basis_counter().store(0, std::memory_order_relaxed);
}

/// Unit step: 1 for ts > 0, else 0.
template <typename T>
T unit_step(T ts) {
  if (!std::isfinite(ts)) throw DomainError("unit_step: non-finite argument");
  return ts > T(0) ? T(1) : T(0);
}

/// Indicator of the k-th knot span. Zero-length spans are identically zero.
/// Under the default convention the span is [t_k, t_{k+1}), closed on the
/// right when t_{k+1} is the last knot value.
template <typename T>
T basis_degree0(const KnotVector<T>& knots, Index k, T ts,
                BasisConvention conv = {}) {
  if (!std::isfinite(ts))
    throw DomainError("basis_degree0: non-finite parameter");
  if (k < 0 || k + 1 >= knots.size())
    throw DomainError("basis_degree0: span index " + std::to_string(k) +
                      " out of range");
  const T lo = knots[k];
  const T hi = knots[k + 1];
  if (lo == hi) return T(0);
  if (ts >= lo && ts < hi) return T(1);
  if (conv.right_end_closed && ts == hi && hi == knots.back()) return T(1);
  return T(0);
}

/// Degree-n basis function value by the Cox-de Boor recursion. Terms with a
/// zero-length denominator span contribute nothing. Evaluated bottom-up over
/// the support triangle, so each lower-degree value is computed once.
template <typename T>
T basis(const KnotVector<T>& knots, BasisIndex idx, T ts,
        BasisConvention conv = {}) {
  if (!std::isfinite(ts)) throw DomainError("basis: non-finite parameter");
  if (idx.k < 0 || idx.n < 0 || idx.k + idx.n + 1 >= knots.size())
    throw DomainError("basis: index (k=" + std::to_string(idx.k) +
                      ", n=" + std::to_string(idx.n) +
                      ") out of range for knot vector of length " +
                      std::to_string(knots.size()));
  detail::basis_counter().fetch_add(1, std::memory_order_relaxed);

  const int n = idx.n;
  T local[16];
  std::vector<T> spill;
  T* level = local;
  if (n + 1 > 16) {
    spill.resize(static_cast<std::size_t>(n) + 1);
    level = spill.data();
  }

  for (int j = 0; j <= n; ++j)
    level[j] = basis_degree0(knots, idx.k + j, ts, conv);

  for (int d = 1; d <= n; ++d) {
    for (int j = 0; j <= n - d; ++j) {
      const Index k = idx.k + j;
      T acc = T(0);
      const T den_l = knots[k + d] - knots[k];
      if (den_l > T(0)) acc += (ts - knots[k]) / den_l * level[j];
      const T den_r = knots[k + d + 1] - knots[k + 1];
      if (den_r > T(0)) acc += (knots[k + d + 1] - ts) / den_r * level[j + 1];
      level[j] = acc;
    }
  }
  return level[0];
}

/// Closed-form blending polynomial of degree n in {1, 2, 3} on integer
/// knots, i.e. the basis anchored at 0 with support [0, n+1]. Pieces are
/// taken half-open, matching the recursive evaluation between knots.
/// Translates of it give every uniform basis: value at (ts - k) for index k.
template <typename T>
T uniform_basis_closed_form(int n, T ts) {
  if (!std::isfinite(ts))
    throw DomainError("uniform_basis_closed_form: non-finite parameter");
  switch (n) {
    case 1:
      if (ts >= T(0) && ts < T(1)) return ts;
      if (ts >= T(1) && ts < T(2)) return T(2) - ts;
      return T(0);
    case 2:
      if (ts >= T(0) && ts < T(1)) return ts * ts / T(2);
      if (ts >= T(1) && ts < T(2))
        return (ts * (T(2) - ts) + (T(3) - ts) * (ts - T(1))) / T(2);
      if (ts >= T(2) && ts < T(3)) return (T(3) - ts) * (T(3) - ts) / T(2);
      return T(0);
    case 3:
      if (ts >= T(0) && ts < T(1)) return ts * ts * ts / T(6);
      if (ts >= T(1) && ts < T(2))
        return (ts * ts * (T(2) - ts) + ts * (ts - T(1)) * (T(3) - ts) +
                (ts - T(1)) * (ts - T(1)) * (T(4) - ts)) /
               T(6);
      if (ts >= T(2) && ts < T(3))
        return (ts * (T(3) - ts) * (T(3) - ts) +
                (ts - T(1)) * (T(3) - ts) * (T(4) - ts) +
                (ts - T(2)) * (T(4) - ts) * (T(4) - ts)) /
               T(6);
      if (ts >= T(3) && ts < T(4))
        return (T(4) - ts) * (T(4) - ts) * (T(4) - ts) / T(6);
      return T(0);
    default:
      throw DomainError("uniform_basis_closed_form: degree " +
                        std::to_string(n) + " unsupported (need 1..3)");
  }
}

}  // namespace bsp

#endif  // BSP_BASIS_HPP
