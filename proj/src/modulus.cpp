#include "geqn/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "geqn/dense_lu.hpp"
#include "geqn/errors.hpp"
#include "geqn/sets.hpp"
#include "geqn/tensor.hpp"

namespace geqn {

double avi_residual(const Avi<double>& avi, const Vector& z) {
  const Vector w = avi.M * z + avi.q;
  if (std::holds_alternative<ZeroMap>(avi.set)) return w.norm();
  return (z - project(avi.set, Vector(z - w))).norm();
}

double strong_regularity_modulus(const Avi<double>& avi, const Vector& xstar, double tol) {
  const Eigen::Index n = avi.M.rows();
  if (xstar.size() != n) throw PreconditionError("xstar has wrong dimension");
  if (avi_residual(avi, xstar) > tol)
    throw PreconditionError("xstar does not solve the linearized problem");

  if (std::holds_alternative<ZeroMap>(avi.set)) {
    DenseLu<double> lu(avi.M);
    if (lu.singular()) throw SingularError("not strongly regular: singular Jacobian");
    return spectral_norm(lu.solve(Matrix(Matrix::Identity(n, n))));
  }

  const Polyhedron<double> poly = as_polyhedron(avi.set, n);
  std::vector<Eigen::Index> active;
  for (Eigen::Index i = 0; i < poly.A.rows(); ++i)
    if (std::abs(poly.b(i) - poly.A.row(i).dot(xstar)) <= tol * (1.0 + std::abs(poly.b(i)))) active.push_back(i);
  if (static_cast<Eigen::Index>(active.size()) > kMaxPolyhedronRows)
    throw UnsupportedError("too many active constraints for piece enumeration");

  // Multipliers from M x + q + A_I^T mu = 0.
  const Vector w = avi.M * xstar + avi.q;
  Vector mu = Vector::Zero(static_cast<Eigen::Index>(active.size()));
  if (!active.empty()) {
    Matrix AI(static_cast<Eigen::Index>(active.size()), n);
    for (std::size_t k = 0; k < active.size(); ++k) AI.row(static_cast<Eigen::Index>(k)) = poly.A.row(active[k]);
    auto sol = solve_dense<double>(Matrix(AI * AI.transpose()), Vector(-(AI * w)));
    if (!sol) throw SingularError("not strongly regular: active constraint gradients are dependent");
    mu = *sol;
  }

  std::vector<Eigen::Index> strong, degenerate;
  for (std::size_t k = 0; k < active.size(); ++k) {
    if (mu(static_cast<Eigen::Index>(k)) > tol) strong.push_back(active[k]);
    else degenerate.push_back(active[k]);
  }

  double modulus = 0.0;
  int orientation = 0;
  for (unsigned long mask = 0; mask < (1UL << degenerate.size()); ++mask) {
    std::vector<Eigen::Index> rows = strong;
    for (auto k : mask_indices(mask, static_cast<Eigen::Index>(degenerate.size()))) rows.push_back(degenerate[k]);
    const auto s = static_cast<Eigen::Index>(rows.size());
    Matrix kkt = Matrix::Zero(n + s, n + s);
    kkt.topLeftCorner(n, n) = avi.M;
    for (Eigen::Index k = 0; k < s; ++k) {
      kkt.block(n + k, 0, 1, n) = poly.A.row(rows[k]);
      kkt.block(0, n + k, n, 1) = poly.A.row(rows[k]).transpose();
    }
    DenseLu<double> lu(kkt);
    if (lu.singular()) throw SingularError("not strongly regular: piece singular");
    const int sign = ((s % 2 == 0) ? 1 : -1) * (lu.determinant() > 0 ? 1 : -1);
    if (orientation == 0) orientation = sign;
    else if (sign != orientation)
      throw SingularError("not strongly regular: pieces have inconsistent orientation");
    const Matrix inverse = lu.solve(Matrix(Matrix::Identity(n + s, n + s)));
    modulus = std::max(modulus, spectral_norm(inverse.topLeftCorner(n, n)));
  }
  return modulus;
}

}  // namespace geqn
