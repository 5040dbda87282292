#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "geqn/types.hpp"

namespace geqn {

/// Dense LU with partial pivoting.
///
/// A pivot whose magnitude falls below `1e-12 * ||A||_inf` marks the matrix
/// singular; solve() must not be called in that case. Works for any scalar
/// with field operations and ordering (double, long double, exact rationals).
template <typename Scalar>
class DenseLu {
 public:
  explicit DenseLu(MatrixX<Scalar> a) : lu_(std::move(a)), perm_(lu_.rows()) {
    const Eigen::Index n = lu_.rows();
    for (Eigen::Index i = 0; i < n; ++i) perm_[i] = i;

    Scalar scale(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Scalar row(0);
      for (Eigen::Index j = 0; j < n; ++j) row += detail::abs_value<Scalar>(lu_(i, j));
      if (scale < row) scale = row;
    }
    const Scalar threshold = Scalar(1e-12) * scale;

    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::Index pivot = k;
      Scalar best = detail::abs_value<Scalar>(lu_(k, k));
      for (Eigen::Index i = k + 1; i < n; ++i) {
        Scalar a_ik = detail::abs_value<Scalar>(lu_(i, k));
        if (best < a_ik) {
          best = a_ik;
          pivot = i;
        }
      }
      if (!(threshold < best) || best == Scalar(0)) {
        singular_ = true;
        return;
      }
      if (pivot != k) {
        lu_.row(k).swap(lu_.row(pivot));
        std::swap(perm_[k], perm_[pivot]);
        sign_ = -sign_;
      }
      for (Eigen::Index i = k + 1; i < n; ++i) {
        lu_(i, k) /= lu_(k, k);
        const Scalar l = lu_(i, k);
        if (l == Scalar(0)) continue;
        for (Eigen::Index j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
      }
    }
  }

  bool singular() const { return singular_; }

  Scalar determinant() const {
    if (singular_) return Scalar(0);
    Scalar det(sign_);
    for (Eigen::Index i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
    return det;
  }

  VectorX<Scalar> solve(const VectorX<Scalar>& b) const {
    const Eigen::Index n = lu_.rows();
    VectorX<Scalar> x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = b(perm_[i]);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < i; ++j) x(i) -= lu_(i, j) * x(j);
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      for (Eigen::Index j = i + 1; j < n; ++j) x(i) -= lu_(i, j) * x(j);
      x(i) /= lu_(i, i);
    }
    return x;
  }

  MatrixX<Scalar> solve(const MatrixX<Scalar>& b) const {
    MatrixX<Scalar> x(b.rows(), b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) x.col(j) = solve(VectorX<Scalar>(b.col(j)));
    return x;
  }

 private:
  MatrixX<Scalar> lu_;
  std::vector<Eigen::Index> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

/// Solves `a x = b`; nullopt when `a` is numerically singular.
template <typename Scalar>
std::optional<VectorX<Scalar>> solve_dense(const MatrixX<Scalar>& a, const VectorX<Scalar>& b) {
  DenseLu<Scalar> lu(a);
  if (lu.singular()) return std::nullopt;
  return lu.solve(b);
}

/// Principal submatrix / subvector selection helpers.
template <typename Scalar>
MatrixX<Scalar> take(const MatrixX<Scalar>& m, const std::vector<Eigen::Index>& rows,
                     const std::vector<Eigen::Index>& cols) {
  MatrixX<Scalar> out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

template <typename Scalar>
VectorX<Scalar> take(const VectorX<Scalar>& v, const std::vector<Eigen::Index>& idx) {
  VectorX<Scalar> out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

}  // namespace geqn
