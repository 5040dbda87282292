#pragma once

// Sampling checks of the inequalities that tie f to a majorant psi. A failed
// check is a certified counterexample; a pass only covers the samples drawn.

#include <cstdint>
#include <optional>

#include "geqn/majorant.hpp"
#include "geqn/problem.hpp"
#include "geqn/sampling.hpp"
#include "geqn/types.hpp"

namespace geqn {

struct InequalityReport {
  std::size_t samples = 0;
  double max_violation = 0.0;  // max(LHS - RHS, 0)
  double tolerance = 0.0;      // tolerance at the worst sample
  Vector worst_x;
  std::optional<double> worst_tau;
  bool pass = true;
};

struct CheckOptions {
  std::size_t samples = 2000;
  std::uint64_t seed = kDefaultSeed;
  int tau_points = 33;
  std::optional<double> radius;  // default min(kappa, R), else nu
};

/// lambda ||f'(x) - f'(xbar + tau (x - xbar))|| <= psi'(|x - xbar|) - psi'(tau |x - xbar|).
InequalityReport check_majorant_inequality(const ProblemInstance<double>& problem,
                                           const MajorantSpec<double>& spec, const CheckOptions& opts = {});

/// lambda ||E_f(x, xbar)|| <= e_psi(|x - xbar|, 0).
InequalityReport check_taylor_bound(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec,
                                    const CheckOptions& opts = {});

/// lambda ||f''(x)|| <= psi''(|x - xbar|), sampled in the ball shrunk by 1e-6.
InequalityReport check_second_derivative_bounds(const ProblemInstance<double>& problem,
                                                const MajorantSpec<double>& spec, const CheckOptions& opts = {});

struct LipschitzEstimate {
  double L = 0.0;
  std::size_t samples = 0;
};

/// Sampled lower estimate of the Lipschitz constant of f' on B(center, radius).
LipschitzEstimate fit_lipschitz(const ProblemInstance<double>& problem, const Vector& center, double radius,
                                std::size_t samples = 2000, std::uint64_t seed = kDefaultSeed);

/// max over 2 <= k <= degree of (lambda ||f^{(k)}(xbar)|| / k!)^{1/(k-1)}; 0 for affine f.
double smale_gamma(const ProblemInstance<double>& problem, double lambda);

/// The ball radius the checks sample by default.
double default_check_radius(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec);

}  // namespace geqn
