#ifndef BSP_TYPES_HPP
#define BSP_TYPES_HPP

#include <Eigen/Core>

namespace bsp {

template <typename T> using Vec2 = Eigen::Matrix<T, 2, 1>;
template <typename T> using Vec3 = Eigen::Matrix<T, 3, 1>;
template <typename T> using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <typename T> using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// One point per row.
template <typename T> using PointList = Eigen::Matrix<T, Eigen::Dynamic, 3>;
template <typename T> using PointList2 = Eigen::Matrix<T, Eigen::Dynamic, 2>;

using Vec2d = Vec2<double>;
using Vec3d = Vec3<double>;
using VecXd = VecX<double>;
using MatXd = MatX<double>;
using PointListd = PointList<double>;
using PointList2d = PointList2<double>;

using Index = Eigen::Index;

}  // namespace bsp

#endif  // BSP_TYPES_HPP
