#ifndef BSP_KNOTS_HPP
#define BSP_KNOTS_HPP

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "bsp/errors.hpp"
#include "bsp/types.hpp"

namespace bsp {

/// Nondecreasing parameter values marking the joins between polynomial
/// segments. Construction validates monotonicity and finiteness.
template <typename T>
class KnotVector {
 public:
  KnotVector() = default;

  explicit KnotVector(VecX<T> values) : values_(std::move(values)) {
    if (values_.size() < 2)
      throw DomainError("knot vector needs at least 2 values");
    for (Index i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i]))
        throw DomainError("knot values must be finite");
      if (i > 0 && values_[i] < values_[i - 1])
        throw DomainError("knot values must be nondecreasing");
    }
  }

  KnotVector(std::initializer_list<T> values)
      : KnotVector(Eigen::Map<const VecX<T>>(values.begin(),
                                             static_cast<Index>(values.size()))
                       .eval()) {}

  Index size() const { return values_.size(); }
  T operator[](Index i) const { return values_[i]; }
  T front() const { return values_[0]; }
  T back() const { return values_[values_.size() - 1]; }
  const VecX<T>& values() const { return values_; }

 private:
  VecX<T> values_;
};

template <typename T>
bool operator==(const KnotVector<T>& a, const KnotVector<T>& b) {
  return a.size() == b.size() && (a.values().array() == b.values().array()).all();
}

template <typename T>
bool operator!=(const KnotVector<T>& a, const KnotVector<T>& b) {
  return !(a == b);
}

/// Clamped-uniform knot vector of length num_control + order: the first
/// `order` values are 0, interior values rise by 1 per span, and the last
/// `order` values sit at the maximum. make_clamped_knots(4, 4) gives
/// {0,0,0,0,1,1,1,1}.
template <typename T = double>
KnotVector<T> make_clamped_knots(Index num_control, Index order) {
  if (order < 1 || num_control < order)
    throw DomainError("make_clamped_knots requires num_control >= order >= 1");
  const Index len = num_control + order;
  const T top = static_cast<T>(num_control - order + 1);
  VecX<T> v(len);
  for (Index i = 0; i < len; ++i)
    v[i] = std::clamp(static_cast<T>(i - order + 1), T(0), top);
  return KnotVector<T>(std::move(v));
}

/// Equally spaced integer knots {0, 1, ..., count-1}.
template <typename T = double>
KnotVector<T> make_integer_knots(Index count) {
  if (count < 2) throw DomainError("make_integer_knots requires count >= 2");
  VecX<T> v(count);
  for (Index i = 0; i < count; ++i) v[i] = static_cast<T>(i);
  return KnotVector<T>(std::move(v));
}

}  // namespace bsp

#endif  // BSP_KNOTS_HPP
