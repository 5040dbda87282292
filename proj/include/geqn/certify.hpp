#pragma once

// Checks a Newton run against what the majorant predicts: radii, envelope
// t_k >= ||x_k - xbar||, the rate inequality and local uniqueness.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "geqn/checks.hpp"
#include "geqn/majorant.hpp"
#include "geqn/newton.hpp"
#include "geqn/problem.hpp"

namespace geqn {

/// Least-squares slope of log e_{k+1} against log e_k over errors above the
/// rounding floor 64 eps (1 + ||xbar||). Needs at least 4 such errors spanning
/// 4 orders of magnitude; otherwise throws PreconditionError("order undetermined").
double estimate_order(const std::vector<double>& errors, double solution_norm = 0.0);
double estimate_order(const IterationTrace<double>& trace, double solution_norm = 0.0);

struct UniquenessReport {
  double radius = 0.0;
  std::size_t points = 0;
  double spacing = 0.0;
  std::vector<Vector> other_solutions;
  bool pass = true;
};

/// Scans the natural residual on a grid over B(xbar, radius) (n <= 3) and
/// refines grid minima with Newton; any solution farther than 10 grid
/// spacings from xbar fails the scan.
UniquenessReport uniqueness_scan(const ProblemInstance<double>& problem, double radius, int grid_per_dim);

struct Verdict {
  std::string name;
  bool pass = true;
  std::string detail;
  bool skipped = false;  // not applicable; does not affect the overall verdict
};

struct CertifyOptions {
  SolverConfig solver;
  CheckOptions checks;
  bool scan_uniqueness = true;
};

struct Certificate {
  RadiusReport<double> radii{};
  double t0 = 0.0;
  double rate_exponent = 1.0;
  std::vector<Verdict> preconditions;
  IterationTrace<double> trace;
  std::vector<bool> majorized;       // e_k <= t_k per iterate
  std::vector<double> rate_bounds;   // t_{k+1} / t_k^{p+1}
  std::optional<double> quadratic_bound;
  std::vector<Verdict> verdicts;     // majorization, rate, convergence, uniqueness
  std::optional<UniquenessReport> uniqueness;
  bool pass = false;
};

Certificate certify(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec, const Vector& x0,
                    const CertifyOptions& opts = {});

/// Human-readable summary, one verdict per line.
void print_certificate(std::ostream& out, const Certificate& cert);

/// CSV columns k, x (semicolon-joined), residual, error, t_k, ratio; 17
/// significant digits; absent values left empty.
void write_trace_csv(std::ostream& out, const IterationTrace<double>& trace);

/// %.17g formatting independent of the global locale.
std::string format_number(double value);

}  // namespace geqn
