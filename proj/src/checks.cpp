#include "geqn/checks.hpp"

#include <algorithm>
#include <cmath>

#include "geqn/errors.hpp"
#include "geqn/tensor.hpp"

namespace geqn {

namespace {

const Vector& require_solution(const ProblemInstance<double>& problem) {
  if (!problem.solution) throw PreconditionError("check needs a problem with a known solution");
  return *problem.solution;
}

std::vector<Vector> sample_points(const Vector& center, double radius, const CheckOptions& opts) {
  Rng rng(opts.seed);
  std::vector<Vector> xs{center};
  for (std::size_t i = 1; i < opts.samples; ++i) xs.push_back(rng.in_ball(center, radius));
  return xs;
}

// Each sample is judged against its own tolerance abs + rel * max(|lhs|, |rhs|);
// the reported worst sample is the one with the largest excess over it.
struct Accumulator {
  double absolute;
  double relative;
  InequalityReport report;
  double worst_excess = -kInf;

  void add(double lhs, double rhs, const Vector& x, std::optional<double> tau) {
    ++report.samples;
    const double violation = lhs - rhs;
    report.max_violation = std::max(report.max_violation, violation);
    const double tol = absolute + relative * std::max(std::abs(lhs), std::abs(rhs));
    if (violation - tol > worst_excess) {
      worst_excess = violation - tol;
      report.tolerance = tol;
      report.worst_x = x;
      report.worst_tau = tau;
    }
  }

  InequalityReport finish() {
    report.pass = worst_excess <= 0.0;
    return report;
  }
};

}  // namespace

double default_check_radius(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec) {
  std::optional<double> radius = problem.kappa;
  if (auto R = spec.domain_radius()) radius = radius ? std::min(*radius, *R) : *R;
  if (!radius) radius = radii(spec, problem.kappa).nu;
  return *radius * (1.0 - 1e-6);
}

InequalityReport check_majorant_inequality(const ProblemInstance<double>& problem,
                                           const MajorantSpec<double>& spec, const CheckOptions& opts) {
  const Vector& xbar = require_solution(problem);
  if (opts.tau_points < 2) throw PreconditionError("tau grid needs at least 2 points");
  const double radius = opts.radius.value_or(default_check_radius(problem, spec));
  const double lambda = spec.lambda();

  Accumulator acc{1e-9, 1e-9, {}};
  for (const Vector& x : sample_points(xbar, radius, opts)) {
    const double d = (x - xbar).norm();
    const Matrix jx = problem.jacobian(x);
    const double slope_d = eval_psi(spec, d).slope;
    for (int j = 0; j < opts.tau_points; ++j) {
      const double tau = static_cast<double>(j) / (opts.tau_points - 1);
      const Vector mid = xbar + tau * (x - xbar);
      const double lhs = lambda * spectral_norm(jx - problem.jacobian(mid));
      const double rhs = slope_d - eval_psi(spec, tau * d).slope;
      acc.add(lhs, rhs, x, tau);
    }
  }
  return acc.finish();
}

InequalityReport check_taylor_bound(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec,
                                    const CheckOptions& opts) {
  const Vector& xbar = require_solution(problem);
  const double radius = opts.radius.value_or(default_check_radius(problem, spec));

  Accumulator acc{1e-9, 1e-9, {}};
  for (const Vector& x : sample_points(xbar, radius, opts)) {
    const double d = (x - xbar).norm();
    const double lhs = spec.lambda() * linearization_error(problem, x, xbar).norm();
    acc.add(lhs, e_psi(spec, d, 0.0), x, std::nullopt);
  }
  return acc.finish();
}

InequalityReport check_second_derivative_bounds(const ProblemInstance<double>& problem,
                                                const MajorantSpec<double>& spec, const CheckOptions& opts) {
  const Vector& xbar = require_solution(problem);
  if (!problem.hessian && !problem.poly) throw UnsupportedError("problem exposes no second derivatives");
  if (auto* h = spec.as<HoelderMajorant<double>>(); h && h->p != 1.0)
    throw UnsupportedError("second-derivative bound needs a Smale or Hoelder p = 1 majorant");
  const double radius = opts.radius.value_or(default_check_radius(problem, spec));

  Accumulator acc{1e-9, 1e-9, {}};
  for (const Vector& x : sample_points(xbar, radius, opts)) {
    const auto hess = problem.hessian ? problem.hessian(x) : problem.poly->hessians(x);
    const double lhs = spec.lambda() * bilinear_norm(hess);
    acc.add(lhs, eval_psi(spec, (x - xbar).norm()).curvature, x, std::nullopt);
  }
  return acc.finish();
}

LipschitzEstimate fit_lipschitz(const ProblemInstance<double>& problem, const Vector& center, double radius,
                                std::size_t samples, std::uint64_t seed) {
  if (!(radius > 0)) throw PreconditionError("fit_lipschitz needs a positive radius");
  if (center.size() != problem.n) throw PreconditionError("center has wrong dimension");
  Rng rng(seed);
  LipschitzEstimate est;
  auto consider_hessian = [&](const Vector& x) {
    if (problem.hessian) est.L = std::max(est.L, bilinear_norm(problem.hessian(x)));
  };
  for (std::size_t i = 0; i < samples; ++i) {
    const Vector x = rng.in_ball(center, radius);
    const Vector y = rng.in_ball(center, radius);
    const double gap = (x - y).norm();
    if (gap > 0) est.L = std::max(est.L, spectral_norm(problem.jacobian(x) - problem.jacobian(y)) / gap);
    // Points on the sphere catch suprema attained at the boundary.
    const Vector edge = center + radius * rng.unit_vector(problem.n);
    consider_hessian(x);
    consider_hessian(edge);
    est.samples += 1;
  }
  consider_hessian(center);
  if (problem.n == 1) {
    consider_hessian(center + Vector::Constant(1, radius));
    consider_hessian(center - Vector::Constant(1, radius));
  }
  return est;
}

double smale_gamma(const ProblemInstance<double>& problem, double lambda) {
  const Vector& xbar = require_solution(problem);
  if (!problem.poly) throw UnsupportedError("Smale gamma needs a polynomial problem");
  if (!(lambda > 0)) throw PreconditionError("lambda must be positive");
  double gamma = 0.0;
  double factorial = 1.0;
  for (int k = 2; k <= problem.poly->degree(); ++k) {
    factorial *= k;
    const double size = lambda * multilinear_norm(*problem.poly, k, xbar) / factorial;
    gamma = std::max(gamma, std::pow(size, 1.0 / (k - 1)));
  }
  return gamma;
}

}  // namespace geqn
