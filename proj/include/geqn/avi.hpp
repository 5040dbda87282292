#pragma once

// Affine variational inequalities q + M z + N_C(z) ∋ 0: one Josephy-Newton
// subproblem.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geqn/dense_lu.hpp"
#include "geqn/errors.hpp"
#include "geqn/lcp.hpp"
#include "geqn/sets.hpp"
#include "geqn/types.hpp"

namespace geqn {

template <typename Scalar>
struct Avi {
  MatrixX<Scalar> M;
  VectorX<Scalar> q;
  SetDescriptor<Scalar> set;
};

template <typename Scalar>
struct Localization {
  VectorX<Scalar> center;
  Scalar radius;
};

template <typename Scalar>
struct AviSolution {
  VectorX<Scalar> z;
  // Number of distinct solutions seen by the enumeration oracle; 1 when only
  // a pivoting or linear solve ran.
  std::size_t num_solutions = 1;
  std::string method;
};

template <typename Scalar>
struct SolutionList {
  std::vector<VectorX<Scalar>> solutions;
  std::size_t singular_blocks = 0;
};

namespace detail {

template <typename Scalar>
Scalar complementarity_tol() {
  return Scalar(1e-10);
}

template <typename Scalar>
void push_unique(std::vector<VectorX<Scalar>>& list, const VectorX<Scalar>& z) {
  const Scalar tol = Scalar(1e-9) * (Scalar(1) + max_abs(z));
  for (const auto& s : list)
    if (!(tol < max_abs(VectorX<Scalar>(s - z)))) return;
  list.push_back(z);
}

// Candidate order: squared distance to the hint, then coordinates.
template <typename Scalar>
bool nearer(const VectorX<Scalar>& a, const VectorX<Scalar>& b, const VectorX<Scalar>& hint) {
  const Scalar da = (a - hint).squaredNorm(), db = (b - hint).squaredNorm();
  if (da < db) return true;
  if (db < da) return false;
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace detail

/// Partial linearization at x: M = f'(x), q = f(x) - f'(x) x.
template <typename Scalar>
Avi<Scalar> linearize(const VectorX<Scalar>& fx, const MatrixX<Scalar>& jx, const VectorX<Scalar>& x,
                      SetDescriptor<Scalar> set) {
  return Avi<Scalar>{jx, VectorX<Scalar>(fx - jx * x), std::move(set)};
}

/// All solutions of a box-constrained AVI by enumerating the 3^n faces
/// (each coordinate at its lower bound, free, or at its upper bound).
template <typename Scalar>
SolutionList<Scalar> box_face_enumerate(const MatrixX<Scalar>& M, const VectorX<Scalar>& q,
                                        const Box<Scalar>& box) {
  const Eigen::Index n = M.rows();
  if (n > 8) throw UnsupportedError("box face enumeration supports n <= 8");
  const Scalar tol = detail::complementarity_tol<Scalar>();

  SolutionList<Scalar> out;
  std::vector<int> face(n, 0);  // 0 lower, 1 free, 2 upper
  long total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= 3;
  for (long code = 0; code < total; ++code) {
    long c = code;
    bool usable = true;
    VectorX<Scalar> z = VectorX<Scalar>::Zero(n);
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < n; ++i, c /= 3) {
      face[i] = static_cast<int>(c % 3);
      if (face[i] == 1) {
        free.push_back(i);
        continue;
      }
      const Scalar& bound = face[i] == 0 ? box.lower(i) : box.upper(i);
      if (!detail::is_finite(bound)) usable = false;
      else z(i) = bound;
    }
    if (!usable) continue;

    if (!free.empty()) {
      VectorX<Scalar> rhs = -(M * z + q);
      auto zf = solve_dense<Scalar>(take(M, free, free), take(rhs, free));
      if (!zf) {
        ++out.singular_blocks;
        continue;
      }
      for (std::size_t k = 0; k < free.size(); ++k) z(free[k]) = (*zf)(static_cast<Eigen::Index>(k));
    }
    const VectorX<Scalar> w = M * z + q;
    bool ok = true;
    for (Eigen::Index i = 0; i < n && ok; ++i) {
      if (face[i] == 1)
        ok = !(z(i) < box.lower(i) - tol) && !(box.upper(i) + tol < z(i));
      else if (face[i] == 0)
        ok = !(w(i) < -tol);
      else
        ok = !(tol < w(i));
    }
    if (ok) detail::push_unique(out.solutions, z);
  }
  return out;
}

/// KKT reduction of a polyhedral AVI to an LCP in the multipliers:
/// M' = A M^{-1} A^T, q' = b + A M^{-1} q, z = -M^{-1}(q + A^T mu).
template <typename Scalar>
struct PolyhedronLcp {
  MatrixX<Scalar> M;
  VectorX<Scalar> q;
  MatrixX<Scalar> minv;  // M^{-1} of the original AVI
  VectorX<Scalar> q_orig;
  MatrixX<Scalar> A;

  VectorX<Scalar> recover(const VectorX<Scalar>& mu) const {
    return -minv * (q_orig + A.transpose() * mu);
  }
};

/// nullopt when M is singular; callers then fall back to active-set enumeration.
template <typename Scalar>
std::optional<PolyhedronLcp<Scalar>> polyhedron_to_lcp(const MatrixX<Scalar>& M, const VectorX<Scalar>& q,
                                                       const Polyhedron<Scalar>& poly) {
  DenseLu<Scalar> lu(M);
  if (lu.singular()) return std::nullopt;
  MatrixX<Scalar> minv = lu.solve(MatrixX<Scalar>(MatrixX<Scalar>::Identity(M.rows(), M.cols())));
  PolyhedronLcp<Scalar> out;
  out.M = poly.A * minv * poly.A.transpose();
  out.q = poly.b + poly.A * (minv * q);
  out.minv = std::move(minv);
  out.q_orig = q;
  out.A = poly.A;
  return out;
}

/// All solutions of a polyhedral AVI: for every subset S of rows solve
/// [M A_S^T; A_S 0][z; mu] = [-q; b_S] and keep mu >= 0 with A z <= b.
template <typename Scalar>
SolutionList<Scalar> polyhedron_enumerate(const MatrixX<Scalar>& M, const VectorX<Scalar>& q,
                                          const Polyhedron<Scalar>& poly) {
  const Eigen::Index n = M.rows(), m = poly.A.rows();
  if (m > kMaxPolyhedronRows) throw UnsupportedError("active-set enumeration supports at most 12 rows");
  const Scalar tol = detail::complementarity_tol<Scalar>();
  const Scalar slack_tol = tol * (Scalar(1) + detail::max_abs(poly.b));

  SolutionList<Scalar> out;
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    const auto rows = mask_indices(mask, m);
    const auto s = static_cast<Eigen::Index>(rows.size());
    if (s > n) continue;
    MatrixX<Scalar> kkt = MatrixX<Scalar>::Zero(n + s, n + s);
    VectorX<Scalar> rhs = VectorX<Scalar>::Zero(n + s);
    kkt.topLeftCorner(n, n) = M;
    rhs.head(n) = -q;
    for (Eigen::Index k = 0; k < s; ++k) {
      kkt.block(n + k, 0, 1, n) = poly.A.row(rows[k]);
      kkt.block(0, n + k, n, 1) = poly.A.row(rows[k]).transpose();
      rhs(n + k) = poly.b(rows[k]);
    }
    auto sol = solve_dense<Scalar>(kkt, rhs);
    if (!sol) {
      ++out.singular_blocks;
      continue;
    }
    if (s > 0 && sol->tail(s).minCoeff() < -tol) continue;
    VectorX<Scalar> z = sol->head(n);
    VectorX<Scalar> slack = poly.b - poly.A * z;
    if (slack.minCoeff() < -slack_tol) continue;
    detail::push_unique(out.solutions, z);
  }
  return out;
}

/// Solves the AVI, returning the solution nearest to `hint` (ties broken
/// lexicographically). With a localization ball only solutions inside it are
/// eligible.
template <typename Scalar, typename Derived>
AviSolution<Scalar> solve_avi(const Avi<Scalar>& avi, const Eigen::MatrixBase<Derived>& hint_expr,
                              const std::optional<Localization<Scalar>>& localization = std::nullopt) {
  const VectorX<Scalar> hint = hint_expr;
  const Eigen::Index n = avi.M.rows();
  if (avi.M.cols() != n || avi.q.size() != n || hint.size() != n)
    throw PreconditionError("AVI dimensions are inconsistent");
  validate_set(avi.set, n);

  std::vector<VectorX<Scalar>> candidates;
  std::string method;

  if (std::holds_alternative<ZeroMap>(avi.set)) {
    auto z = solve_dense<Scalar>(avi.M, VectorX<Scalar>(-avi.q));
    if (!z) throw SingularError("linearized equation has a singular Jacobian");
    candidates.push_back(*z);
    method = "lu";
  } else if (std::holds_alternative<Orthant>(avi.set)) {
    const auto lemke_result = lemke(avi.M, avi.q);
    if (n <= 12) {
      candidates = lcp_enumerate<Scalar>(avi.M, avi.q).solutions;
      method = "lemke+enumeration";
    }
    if (candidates.empty() && lemke_result.status == LcpStatus::Solved) {
      candidates.push_back(lemke_result.z);
      method = "lemke";
    }
    if (candidates.empty()) {
      if (n > 12)
        throw InfeasibleError(std::string("lemke stopped with ") + to_string(lemke_result.status) +
                              " and n > 12 rules out enumeration");
      throw InfeasibleError("linear complementarity subproblem has no solution");
    }
  } else if (auto* box = std::get_if<Box<Scalar>>(&avi.set); box && n <= 8) {
    candidates = box_face_enumerate(avi.M, avi.q, *box).solutions;
    method = "box-faces";
    if (candidates.empty()) throw InfeasibleError("box subproblem has no solution");
  } else {
    const Polyhedron<Scalar> poly = as_polyhedron(avi.set, n);
    if (poly.A.rows() <= kMaxPolyhedronRows) {
      candidates = polyhedron_enumerate(avi.M, avi.q, poly).solutions;
      method = "active-sets";
    }
    if (candidates.empty()) {
      if (auto red = polyhedron_to_lcp(avi.M, avi.q, poly)) {
        const auto res = lemke(red->M, red->q);
        if (res.status == LcpStatus::Solved) {
          candidates.push_back(red->recover(res.z));
          method = "kkt-lemke";
        }
      }
    }
    if (candidates.empty()) throw InfeasibleError("polyhedral subproblem has no solution");
  }

  const std::size_t total = candidates.size();
  if (localization) {
    const Scalar r2 = localization->radius * localization->radius;
    std::erase_if(candidates, [&](const VectorX<Scalar>& z) {
      return r2 < (z - localization->center).squaredNorm();
    });
    if (candidates.empty()) throw InfeasibleError("no localized solution");
  }
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [&](const auto& a, const auto& b) { return detail::nearer(a, b, hint); });
  return AviSolution<Scalar>{*best, total, method};
}

}  // namespace geqn
