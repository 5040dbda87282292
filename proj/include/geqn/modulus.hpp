#pragma once

#include "geqn/avi.hpp"
#include "geqn/types.hpp"

namespace geqn {

/// Lipschitz modulus of the localized solution map of the AVI at xstar.
///
/// Zero map: ||M^{-1}||. Polyhedral sets: active constraints are split into
/// strongly active (multiplier > tol) and degenerate ones; every piece
/// S = strongly active ∪ D, D ⊆ degenerate, must have a nonsingular KKT matrix
/// [M A_S^T; A_S 0] with the same orientation sign (-1)^{|S|} det. The result
/// is the largest spectral norm of the z-block of the piece inverses.
double strong_regularity_modulus(const Avi<double>& avi, const Vector& xstar, double tol = 1e-8);

/// Natural residual ||z - P_C(z - (M z + q))|| of the AVI.
double avi_residual(const Avi<double>& avi, const Vector& z);

}  // namespace geqn
