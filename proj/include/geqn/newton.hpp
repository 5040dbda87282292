#pragma once

// Josephy-Newton iteration: x_{k+1} solves f(x_k) + f'(x_k)(z - x_k) + N_C(z) ∋ 0.

#include <optional>
#include <string>
#include <vector>

#include "geqn/avi.hpp"
#include "geqn/errors.hpp"
#include "geqn/majorant.hpp"
#include "geqn/problem.hpp"
#include "geqn/types.hpp"

namespace geqn {

struct SolverConfig {
  double tol_residual = 1e-10;
  int max_iter = 50;
  double divergence_radius = 1e3;  // multiple of (1 + ||x0||)

  void validate() const {
    if (!(tol_residual > 0) || max_iter < 1 || !(divergence_radius > 0))
      throw PreconditionError("solver configuration values must be positive");
  }
};

enum class SolveStatus { Converged, MaxIter, SubproblemFailure, Diverged };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::MaxIter: return "max-iter";
    case SolveStatus::SubproblemFailure: return "subproblem-failure";
    default: return "diverged";
  }
}

template <typename Scalar>
struct IterationTrace {
  std::vector<VectorX<Scalar>> iterates;
  std::vector<double> residuals;
  std::vector<double> errors;    // ||x_k - xbar||, empty without a known solution
  std::vector<double> envelope;  // t_k, filled by attach_envelope
  std::vector<double> ratios;    // e_{k+1} / e_k
  // Number of subproblem solutions found at step k (more than one means the
  // nearest-to-x_k rule picked among them).
  std::vector<std::size_t> multiplicity;
  SolveStatus status = SolveStatus::MaxIter;
  std::string message;

  std::size_t steps() const { return iterates.empty() ? 0 : iterates.size() - 1; }
};

template <typename Scalar, typename Derived>
IterationTrace<Scalar> solve(const ProblemInstance<Scalar>& problem, const Eigen::MatrixBase<Derived>& start,
                             const SolverConfig& config = {}) {
  config.validate();
  const VectorX<Scalar> x0 = start;
  if (x0.size() != problem.n) throw PreconditionError("x0 has wrong dimension");

  IterationTrace<Scalar> trace;
  const double guard = config.divergence_radius * (1.0 + norm2(x0));
  VectorX<Scalar> x = x0;
  auto record = [&](const VectorX<Scalar>& xk) {
    trace.iterates.push_back(xk);
    trace.residuals.push_back(natural_residual(problem, xk));
    if (problem.solution) {
      trace.errors.push_back(norm2(VectorX<Scalar>(xk - *problem.solution)));
      const std::size_t k = trace.errors.size();
      if (k >= 2 && trace.errors[k - 2] > 0) trace.ratios.push_back(trace.errors[k - 1] / trace.errors[k - 2]);
    }
  };

  try {
    record(x);
  } catch (const Error& e) {
    throw PreconditionError(std::string("x0 is outside the problem domain: ") + e.what());
  }

  for (int k = 0;; ++k) {
    if (trace.residuals.back() <= config.tol_residual) {
      trace.status = SolveStatus::Converged;
      return trace;
    }
    if (k >= config.max_iter) {
      trace.status = SolveStatus::MaxIter;
      return trace;
    }
    try {
      const auto step = solve_avi(linearize(problem, x), x);
      trace.multiplicity.push_back(step.num_solutions);
      x = step.z;
      record(x);
    } catch (const Error& e) {
      trace.status = SolveStatus::SubproblemFailure;
      trace.message = e.what();
      return trace;
    }
    if (norm2(VectorX<Scalar>(x - x0)) > guard) {
      trace.status = SolveStatus::Diverged;
      trace.message = "iterate left the divergence ball";
      return trace;
    }
  }
}

/// Fills trace.envelope with t_k from t0 = ||x0 - xbar||, one entry per
/// iterate (the sequence is extended with zeros once it reaches 0).
template <typename Scalar>
void attach_envelope(IterationTrace<Scalar>& trace, const MajorantSpec<Scalar>& spec) {
  trace.envelope.clear();
  if (trace.errors.empty()) return;
  const Scalar t0 = Scalar(trace.errors.front());
  if (!(Scalar(0) < t0)) {
    trace.envelope.assign(trace.errors.size(), 0.0);
    return;
  }
  const auto seq = majorant_sequence(spec, t0, static_cast<int>(trace.errors.size()), Scalar(0));
  for (std::size_t k = 0; k < trace.errors.size(); ++k)
    trace.envelope.push_back(k < seq.size() ? to_double(seq[k]) : 0.0);
}

}  // namespace geqn
