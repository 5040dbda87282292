#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>

namespace geqn {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vector = VectorX<double>;
using Matrix = MatrixX<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace detail {

template <typename Scalar>
inline constexpr bool is_float_v = std::is_floating_point_v<Scalar>;

template <typename Scalar>
bool is_finite(const Scalar& x) {
  if constexpr (is_float_v<Scalar>) {
    return std::isfinite(x);
  } else {
    (void)x;
    return true;
  }
}

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// Max-abs entry; zero for empty objects.
template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  Scalar best(0);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Scalar a = abs_value<Scalar>(m(i, j));
      if (best < a) best = a;
    }
  return best;
}

}  // namespace detail

template <typename Scalar>
double to_double(const Scalar& x) {
  return static_cast<double>(x);
}

/// Euclidean norm evaluated in double; works for scalars without sqrt.
template <typename Derived>
double norm2(const Eigen::MatrixBase<Derived>& v) {
  if constexpr (std::is_same_v<typename Derived::Scalar, double>) return v.norm();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = to_double(v(i));
    s += x * x;
  }
  return std::sqrt(s);
}

inline std::optional<double> finite_or_none(double x) {
  if (std::isfinite(x)) return x;
  return std::nullopt;
}

}  // namespace geqn
