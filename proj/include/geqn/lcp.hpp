#pragma once

// Linear complementarity problems 0 <= z ⊥ M z + q >= 0.

#include <cstdint>
#include <limits>
#include <vector>

#include "geqn/dense_lu.hpp"
#include "geqn/errors.hpp"
#include "geqn/sets.hpp"
#include "geqn/types.hpp"

namespace geqn {

enum class LcpStatus { Solved, RayTermination, CycleGuardTripped };

inline const char* to_string(LcpStatus s) {
  switch (s) {
    case LcpStatus::Solved: return "solved";
    case LcpStatus::RayTermination: return "ray-termination";
    default: return "cycle-guard";
  }
}

template <typename Scalar>
struct LcpResult {
  LcpStatus status = LcpStatus::RayTermination;
  VectorX<Scalar> z;  // valid when Solved
  int pivots = 0;
};

/// Default pivot cap 10 * 2^n, saturating for large n.
inline int default_pivot_cap(Eigen::Index n) {
  if (n >= 26) return std::numeric_limits<int>::max();
  return 10 * (1 << n);
}

namespace detail {

// Lexicographic comparison of rows i and j of [q | B^{-1}] scaled by the
// entering column. Returns true when row i is strictly smaller.
template <typename Scalar>
bool lex_less(const MatrixX<Scalar>& tab, Eigen::Index i, Eigen::Index j, Eigen::Index entering,
              Eigen::Index rhs_col, Eigen::Index n, const Scalar& tol) {
  const Scalar di = tab(i, entering), dj = tab(j, entering);
  auto compare = [&](Eigen::Index col) -> int {
    const Scalar a = tab(i, col) / di, b = tab(j, col) / dj;
    if (a < b - tol) return -1;
    if (b < a - tol) return 1;
    return 0;
  };
  if (int c = compare(rhs_col); c != 0) return c < 0;
  for (Eigen::Index col = 0; col < n; ++col)
    if (int c = compare(col); c != 0) return c < 0;
  return false;
}

template <typename Scalar>
void pivot(MatrixX<Scalar>& tab, Eigen::Index row, Eigen::Index col) {
  tab.row(row) /= tab(row, col);
  for (Eigen::Index i = 0; i < tab.rows(); ++i) {
    if (i == row) continue;
    const Scalar factor = tab(i, col);
    if (factor != Scalar(0)) tab.row(i) -= factor * tab.row(row);
  }
}

}  // namespace detail

/// Lemke's complementary pivoting with covering vector e = (1, ..., 1) and a
/// lexicographic ratio test.
///
/// Tableau columns: w (0..n-1), z (n..2n-1), z0 (2n), rhs (2n+1), encoding
/// w - M z - e z0 = q. The w block holds B^{-1}, which drives the
/// lexicographic tie-break. When the artificial z0 is among the tied rows it
/// leaves first.
template <typename DerivedM, typename DerivedQ>
LcpResult<typename DerivedM::Scalar> lemke(const Eigen::MatrixBase<DerivedM>& M,
                                           const Eigen::MatrixBase<DerivedQ>& q,
                                           int max_pivots = -1) {
  using Scalar = typename DerivedM::Scalar;
  const Eigen::Index n = M.rows();
  if (M.cols() != n || q.size() != n) throw PreconditionError("lemke needs square M and matching q");
  if (max_pivots < 0) max_pivots = default_pivot_cap(n);
  if (max_pivots < 1) throw PreconditionError("lemke needs max_pivots >= 1");

  LcpResult<Scalar> result;
  result.z = VectorX<Scalar>::Zero(n);
  if (n == 0 || !(q.minCoeff() < Scalar(0))) {
    result.status = LcpStatus::Solved;
    return result;
  }

  const Eigen::Index z0_col = 2 * n, rhs_col = 2 * n + 1;
  MatrixX<Scalar> tab = MatrixX<Scalar>::Zero(n, 2 * n + 2);
  tab.leftCols(n).setIdentity();
  tab.block(0, n, n, n) = -M;
  tab.col(z0_col).setConstant(Scalar(-1));
  tab.col(rhs_col) = q;
  std::vector<Eigen::Index> basis(n);
  for (Eigen::Index i = 0; i < n; ++i) basis[i] = i;

  const Scalar scale = Scalar(1) + detail::max_abs(M) + detail::max_abs(q);
  const Scalar pivot_tol = Scalar(1e-12) * scale;
  const Scalar tie_tol = Scalar(1e-12) * scale;

  // z0 enters; the row with the most negative q leaves (lexicographic ties).
  Eigen::Index leave = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (q(i) < q(leave) - tie_tol ||
        (!(q(leave) < q(i) - tie_tol) && detail::lex_less(tab, i, leave, z0_col, rhs_col, n, tie_tol)))
      leave = i;
  }
  Eigen::Index entering = z0_col;

  while (true) {
    detail::pivot(tab, leave, entering);
    ++result.pivots;
    const Eigen::Index left = basis[leave];
    basis[leave] = entering;

    if (left == z0_col) {
      for (Eigen::Index i = 0; i < n; ++i)
        if (basis[i] >= n && basis[i] < 2 * n) result.z(basis[i] - n) = tab(i, rhs_col);
      result.status = LcpStatus::Solved;
      return result;
    }
    if (result.pivots >= max_pivots) {
      result.status = LcpStatus::CycleGuardTripped;
      return result;
    }
    entering = left < n ? left + n : left - n;

    // Ratio test over rows with a positive entry in the entering column.
    Eigen::Index best = -1;
    Scalar best_ratio(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(pivot_tol < tab(i, entering))) continue;
      const Scalar ratio = tab(i, rhs_col) / tab(i, entering);
      if (best < 0 || ratio < best_ratio) {
        best = i;
        best_ratio = ratio;
      }
    }
    if (best < 0) {
      result.status = LcpStatus::RayTermination;
      return result;
    }
    Eigen::Index choice = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(pivot_tol < tab(i, entering))) continue;
      const Scalar ratio = tab(i, rhs_col) / tab(i, entering);
      if (best_ratio + tie_tol < ratio) continue;
      if (basis[i] == z0_col) {
        choice = i;
        break;
      }
      if (choice < 0 || detail::lex_less(tab, i, choice, entering, rhs_col, n, Scalar(0))) choice = i;
    }
    leave = choice;
  }
}

template <typename Scalar>
struct LcpEnumeration {
  std::vector<VectorX<Scalar>> solutions;
  std::vector<std::uint32_t> singular_sets;  // index sets skipped as singular (bitmasks)
};

/// All LCP solutions by enumerating the 2^n complementary index sets (n <= 12).
template <typename Scalar>
LcpEnumeration<Scalar> lcp_enumerate(const MatrixX<Scalar>& M, const VectorX<Scalar>& q) {
  const Eigen::Index n = M.rows();
  if (n > 12) throw UnsupportedError("lcp_enumerate supports n <= 12");
  const Scalar tol(1e-10);
  const Scalar dedup = Scalar(1e-9) * (Scalar(1) + detail::max_abs(q));

  LcpEnumeration<Scalar> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    const auto alpha = mask_indices(mask, n);
    VectorX<Scalar> z = VectorX<Scalar>::Zero(n);
    if (!alpha.empty()) {
      auto za = solve_dense<Scalar>(take(M, alpha, alpha), VectorX<Scalar>(-take(q, alpha)));
      if (!za) {
        out.singular_sets.push_back(mask);
        continue;
      }
      if (za->minCoeff() < -tol) continue;
      for (std::size_t k = 0; k < alpha.size(); ++k) z(alpha[k]) = (*za)(static_cast<Eigen::Index>(k));
    }
    const VectorX<Scalar> w = M * z + q;
    bool ok = true;
    for (Eigen::Index i = 0; i < n && ok; ++i)
      if (!(mask & (1u << i)) && w(i) < -tol) ok = false;
    if (!ok) continue;
    bool duplicate = false;
    for (const auto& s : out.solutions)
      if (!(dedup < detail::max_abs(VectorX<Scalar>(s - z)))) duplicate = true;
    if (!duplicate) out.solutions.push_back(z);
  }
  return out;
}

}  // namespace geqn
