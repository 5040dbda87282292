#pragma once

// Generalized equations f(x) + N_C(x) ∋ 0 with optional known solution.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geqn/avi.hpp"
#include "geqn/errors.hpp"
#include "geqn/majorant.hpp"
#include "geqn/polynomial.hpp"
#include "geqn/sets.hpp"
#include "geqn/types.hpp"

namespace geqn {

template <typename Scalar>
struct ProblemInstance {
  std::string name;
  Eigen::Index n = 0;
  std::function<VectorX<Scalar>(const VectorX<Scalar>&)> f;
  std::function<MatrixX<Scalar>(const VectorX<Scalar>&)> jacobian;
  // Per-component second derivatives; empty when unavailable.
  std::function<std::vector<MatrixX<Scalar>>(const VectorX<Scalar>&)> hessian;
  std::optional<Polynomial<Scalar>> poly;
  SetDescriptor<Scalar> set = ZeroMap{};
  std::optional<VectorX<Scalar>> solution;
  std::optional<Scalar> kappa;  // nullopt: +infinity
  // Set when the problem is the odd extension of a majorant.
  std::optional<MajorantSpec<Scalar>> extremal_of;
};

template <typename Scalar>
ProblemInstance<Scalar> make_polynomial_problem(std::string name, Polynomial<Scalar> poly,
                                                SetDescriptor<Scalar> set,
                                                std::optional<VectorX<Scalar>> solution = std::nullopt,
                                                std::optional<Scalar> kappa = std::nullopt) {
  ProblemInstance<Scalar> p;
  p.name = std::move(name);
  p.n = poly.dim();
  validate_set(set, p.n);
  if (solution && solution->size() != p.n) throw ValidationError("solution has wrong dimension");
  if (kappa && !(Scalar(0) < *kappa)) throw ValidationError("kappa must be positive");
  p.f = [poly](const VectorX<Scalar>& x) { return poly(x); };
  p.jacobian = [poly](const VectorX<Scalar>& x) { return poly.jacobian(x); };
  p.hessian = [poly](const VectorX<Scalar>& x) { return poly.hessians(x); };
  p.poly = std::move(poly);
  p.set = std::move(set);
  p.solution = std::move(solution);
  p.kappa = kappa;
  return p;
}

/// E_f(x, y) = f(y) - f(x) - f'(x)(y - x).
template <typename Scalar>
VectorX<Scalar> linearization_error(const ProblemInstance<Scalar>& problem, const VectorX<Scalar>& x,
                                    const VectorX<Scalar>& y) {
  return problem.f(y) - problem.f(x) - problem.jacobian(x) * (y - x);
}

/// ||x - P_C(x - f(x))||; for the zero map simply ||f(x)||.
template <typename Scalar>
double natural_residual(const ProblemInstance<Scalar>& problem, const VectorX<Scalar>& x) {
  const VectorX<Scalar> fx = problem.f(x);
  if (std::holds_alternative<ZeroMap>(problem.set)) return norm2(fx);
  return norm2(VectorX<Scalar>(x - project(problem.set, VectorX<Scalar>(x - fx))));
}

template <typename Scalar>
Avi<Scalar> linearize(const ProblemInstance<Scalar>& problem, const VectorX<Scalar>& x) {
  return linearize(problem.f(x), problem.jacobian(x), x, problem.set);
}

/// Scalar witness f(x) = sign(x) psi(|x|) on (-R, R) with solution 0. Newton
/// from t0 in (0, rho) reproduces the majorizing sequence with alternating
/// signs.
template <typename Scalar>
ProblemInstance<Scalar> extremal_problem(const MajorantSpec<Scalar>& spec) {
  if (spec.lambda() != Scalar(1)) throw PreconditionError("extremal problem needs lambda = 1");
  auto scalar_of = [](const VectorX<Scalar>& x) {
    if (x.size() != 1) throw PreconditionError("extremal problem is one-dimensional");
    return x(0);
  };
  ProblemInstance<Scalar> p;
  p.name = "extremal_" + describe(spec);
  p.n = 1;
  p.f = [spec, scalar_of](const VectorX<Scalar>& x) {
    const Scalar t = scalar_of(x);
    const Scalar v = eval_psi(spec, detail::abs_value(t)).value;
    VectorX<Scalar> out(1);
    out(0) = t < Scalar(0) ? Scalar(-v) : v;
    return out;
  };
  p.jacobian = [spec, scalar_of](const VectorX<Scalar>& x) {
    MatrixX<Scalar> J(1, 1);
    J(0, 0) = eval_psi(spec, detail::abs_value(scalar_of(x))).slope;
    return J;
  };
  p.hessian = [spec, scalar_of](const VectorX<Scalar>& x) {
    const Scalar t = scalar_of(x);
    const Scalar c = eval_psi(spec, detail::abs_value(t)).curvature;
    MatrixX<Scalar> H(1, 1);
    H(0, 0) = t < Scalar(0) ? Scalar(-c) : c;
    return std::vector<MatrixX<Scalar>>{H};
  };
  p.set = ZeroMap{};
  p.solution = VectorX<Scalar>::Zero(1);
  p.kappa = spec.domain_radius();
  p.extremal_of = spec;
  return p;
}

}  // namespace geqn
