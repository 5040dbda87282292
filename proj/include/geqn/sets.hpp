#pragma once

// Convex sets C whose normal cone plays the role of F in f(x) + F(x) ∋ 0.

#include <string>
#include <variant>
#include <vector>

#include "geqn/dense_lu.hpp"
#include "geqn/errors.hpp"
#include "geqn/types.hpp"

namespace geqn {

/// F ≡ {0}: the plain equation f(x) = 0 (C = R^n).
struct ZeroMap {};

struct Orthant {
  Eigen::Index n = 0;
};

template <typename Scalar>
struct Box {
  VectorX<Scalar> lower;  // -inf allowed (floating scalars)
  VectorX<Scalar> upper;  // +inf allowed
};

/// {x : A x <= b}.
template <typename Scalar>
struct Polyhedron {
  MatrixX<Scalar> A;
  VectorX<Scalar> b;
};

template <typename Scalar>
using SetDescriptor = std::variant<ZeroMap, Orthant, Box<Scalar>, Polyhedron<Scalar>>;

/// Active-set enumeration over polyhedron rows is capped at this many rows.
inline constexpr Eigen::Index kMaxPolyhedronRows = 12;

template <typename Scalar>
std::string set_name(const SetDescriptor<Scalar>& set) {
  switch (set.index()) {
    case 0: return "zero";
    case 1: return "orthant";
    case 2: return "box";
    default: return "polyhedron";
  }
}

template <typename Scalar>
void validate_set(const SetDescriptor<Scalar>& set, Eigen::Index n) {
  if (auto* o = std::get_if<Orthant>(&set)) {
    if (o->n != n) throw ValidationError("orthant dimension does not match problem dimension");
  } else if (auto* box = std::get_if<Box<Scalar>>(&set)) {
    if (box->lower.size() != n || box->upper.size() != n)
      throw ValidationError("box bounds must have problem dimension");
    for (Eigen::Index i = 0; i < n; ++i)
      if (box->upper(i) < box->lower(i)) throw ValidationError("box requires lower <= upper");
  } else if (auto* poly = std::get_if<Polyhedron<Scalar>>(&set)) {
    if (poly->A.rows() < 1) throw ValidationError("polyhedron needs at least one row");
    if (poly->A.cols() != n || poly->b.size() != poly->A.rows())
      throw ValidationError("polyhedron A/b dimensions are inconsistent");
  }
}

/// Orthant and box rewritten as {x : A x <= b}; infinite box bounds drop out.
template <typename Scalar>
Polyhedron<Scalar> as_polyhedron(const SetDescriptor<Scalar>& set, Eigen::Index n) {
  if (auto* poly = std::get_if<Polyhedron<Scalar>>(&set)) return *poly;
  if (std::holds_alternative<ZeroMap>(set)) throw UnsupportedError("ZeroMap has no polyhedral form");
  std::vector<std::pair<Eigen::Index, int>> rows;  // (coordinate, sign)
  std::vector<Scalar> rhs;
  if (std::holds_alternative<Orthant>(set)) {
    for (Eigen::Index i = 0; i < n; ++i) {
      rows.emplace_back(i, -1);
      rhs.push_back(Scalar(0));
    }
  } else {
    const auto& box = std::get<Box<Scalar>>(set);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (detail::is_finite(box.lower(i))) {
        rows.emplace_back(i, -1);
        rhs.push_back(-box.lower(i));
      }
      if (detail::is_finite(box.upper(i))) {
        rows.emplace_back(i, +1);
        rhs.push_back(box.upper(i));
      }
    }
  }
  Polyhedron<Scalar> out{MatrixX<Scalar>::Zero(static_cast<Eigen::Index>(rows.size()), n),
                         VectorX<Scalar>(static_cast<Eigen::Index>(rows.size()))};
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.A(static_cast<Eigen::Index>(r), rows[r].first) = Scalar(rows[r].second);
    out.b(static_cast<Eigen::Index>(r)) = rhs[r];
  }
  return out;
}

inline std::vector<Eigen::Index> mask_indices(unsigned long mask, Eigen::Index m) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < m; ++i)
    if (mask & (1UL << i)) idx.push_back(i);
  return idx;
}

namespace detail {

/// Euclidean projection onto {A x <= b} by enumerating active row subsets and
/// keeping the feasible KKT point nearest to v.
template <typename Scalar>
VectorX<Scalar> project_polyhedron(const Polyhedron<Scalar>& poly, const VectorX<Scalar>& v) {
  const Eigen::Index m = poly.A.rows();
  if (m > kMaxPolyhedronRows) throw UnsupportedError("polyhedron projection supports at most 12 rows");
  const Scalar tol(1e-10);

  std::optional<VectorX<Scalar>> best;
  Scalar best_dist(0);
  for (unsigned long mask = 0; mask < (1UL << m); ++mask) {
    const auto active = mask_indices(mask, m);
    VectorX<Scalar> x = v;
    VectorX<Scalar> mu;
    if (!active.empty()) {
      MatrixX<Scalar> As(static_cast<Eigen::Index>(active.size()), poly.A.cols());
      VectorX<Scalar> bs(As.rows());
      for (std::size_t r = 0; r < active.size(); ++r) {
        As.row(static_cast<Eigen::Index>(r)) = poly.A.row(active[r]);
        bs(static_cast<Eigen::Index>(r)) = poly.b(active[r]);
      }
      MatrixX<Scalar> gram = As * As.transpose();
      VectorX<Scalar> rhs = As * v - bs;
      auto sol = solve_dense<Scalar>(gram, rhs);
      if (!sol) continue;
      mu = *sol;
      if (mu.size() > 0 && mu.minCoeff() < -tol) continue;
      x = v - As.transpose() * mu;
    }
    VectorX<Scalar> slack = poly.b - poly.A * x;
    const Scalar scale = Scalar(1) + detail::max_abs(poly.b);
    if (slack.minCoeff() < -tol * scale) continue;
    const Scalar dist = (x - v).squaredNorm();
    if (!best || dist < best_dist) {
      best = x;
      best_dist = dist;
    }
  }
  if (!best) throw InfeasibleError("polyhedron is empty (no feasible projection)");
  return *best;
}

}  // namespace detail

/// Euclidean projection onto C. For ZeroMap (C = R^n) this is the identity.
template <typename Scalar>
VectorX<Scalar> project(const SetDescriptor<Scalar>& set, const VectorX<Scalar>& v) {
  if (std::holds_alternative<ZeroMap>(set)) return v;
  if (std::holds_alternative<Orthant>(set)) return v.cwiseMax(Scalar(0));
  if (auto* box = std::get_if<Box<Scalar>>(&set)) return v.cwiseMax(box->lower).cwiseMin(box->upper);
  return detail::project_polyhedron(std::get<Polyhedron<Scalar>>(set), v);
}

template <typename Scalar>
bool contains(const SetDescriptor<Scalar>& set, const VectorX<Scalar>& x, const Scalar& tol) {
  if (std::holds_alternative<ZeroMap>(set)) return true;
  if (std::holds_alternative<Orthant>(set)) return !(x.minCoeff() < -tol);
  if (auto* box = std::get_if<Box<Scalar>>(&set)) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
      if (x(i) < box->lower(i) - tol || box->upper(i) + tol < x(i)) return false;
    return true;
  }
  const auto& poly = std::get<Polyhedron<Scalar>>(set);
  VectorX<Scalar> slack = poly.b - poly.A * x;
  return !(slack.minCoeff() < -tol);
}

}  // namespace geqn
