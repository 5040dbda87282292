#pragma once

// Operator norms of matrices and of symmetric multilinear maps.

#include <functional>
#include <vector>

#include "geqn/polynomial.hpp"
#include "geqn/types.hpp"

namespace geqn {

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// sup_{|v| = 1} |g(v)| for a homogeneous map g(v) = T(v, ..., v) with T
/// symmetric; by Banach's theorem on symmetric forms this is the norm of T.
/// Exact for n = 1; for n = 2 a 720-point circle grid refined by golden-section
/// search; for n >= 3 a Fibonacci sphere grid (or seeded random starts when
/// n > 3) refined by projected gradient ascent down to step 1e-8.
double homogeneous_sup(Eigen::Index n, const std::function<Vector(const Vector&)>& g);

/// Norm of the bilinear map (u, v) -> (u^T H_i v)_i.
double bilinear_norm(const std::vector<Matrix>& hessians);

/// Norm of the k-th derivative of a polynomial map at x.
double multilinear_norm(const Polynomial<double>& poly, int order, const Vector& x);

}  // namespace geqn
