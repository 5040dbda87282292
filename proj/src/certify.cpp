#include "geqn/certify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "geqn/errors.hpp"
#include "geqn/modulus.hpp"

namespace geqn {

namespace {

double rounding_floor(double solution_norm) {
  return 64.0 * std::numeric_limits<double>::epsilon() * (1.0 + solution_norm);
}

bool all_pass(const std::vector<Verdict>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.skipped || v.pass; });
}

std::string short_number(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

double estimate_order(const std::vector<double>& errors, double solution_norm) {
  const double floor = rounding_floor(solution_norm);
  std::vector<double> tail;
  for (double e : errors) {
    if (!(e > floor)) break;
    tail.push_back(std::log(e));
  }
  if (tail.size() < 4 || tail.front() - tail.back() < 4.0 * std::log(10.0))
    throw PreconditionError("order undetermined");
  const std::size_t m = tail.size() - 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < m; ++k) {
    sx += tail[k];
    sy += tail[k + 1];
    sxx += tail[k] * tail[k];
    sxy += tail[k] * tail[k + 1];
  }
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw PreconditionError("order undetermined");
  return (m * sxy - sx * sy) / denom;
}

double estimate_order(const IterationTrace<double>& trace, double solution_norm) {
  return estimate_order(trace.errors, solution_norm);
}

UniquenessReport uniqueness_scan(const ProblemInstance<double>& problem, double radius, int grid_per_dim) {
  if (!problem.solution) throw PreconditionError("uniqueness scan needs a known solution");
  if (problem.n > 3) throw UnsupportedError("uniqueness scan supports n <= 3");
  if (grid_per_dim < 2) throw PreconditionError("uniqueness scan needs at least 2 grid points per dimension");
  const Vector& xbar = *problem.solution;
  const Eigen::Index n = problem.n;

  UniquenessReport report;
  report.radius = std::max(radius, 0.0);
  if (!(radius > 0)) return report;
  const double h = 2.0 * radius / (grid_per_dim - 1);
  const double near = 10.0 * h;
  report.spacing = h;

  std::size_t total = 1;
  for (Eigen::Index i = 0; i < n; ++i) total *= static_cast<std::size_t>(grid_per_dim);
  std::vector<double> residual(total, std::numeric_limits<double>::quiet_NaN());
  auto point_of = [&](std::size_t code) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i, code /= grid_per_dim)
      x(i) = xbar(i) - radius + static_cast<double>(code % grid_per_dim) * h;
    return x;
  };

  auto record = [&](const Vector& x) {
    for (const auto& s : report.other_solutions)
      if ((s - x).norm() <= near) return;
    report.other_solutions.push_back(x);
  };

  for (std::size_t code = 0; code < total; ++code) {
    const Vector x = point_of(code);
    if (!((x - xbar).norm() < radius)) continue;
    try {
      residual[code] = natural_residual(problem, x);
    } catch (const Error&) {
      continue;
    }
    ++report.points;
    if (residual[code] < 1e-6 && (x - xbar).norm() > near) record(x);
  }

  // Roots between grid points: refine discrete local minima with Newton.
  std::vector<std::pair<double, std::size_t>> minima;
  for (std::size_t code = 0; code < total; ++code) {
    if (std::isnan(residual[code])) continue;
    bool is_min = true;
    std::size_t stride = 1;
    for (Eigen::Index i = 0; i < n && is_min; ++i, stride *= grid_per_dim) {
      const std::size_t digit = (code / stride) % grid_per_dim;
      if (digit > 0 && residual[code - stride] < residual[code]) is_min = false;
      if (digit + 1 < static_cast<std::size_t>(grid_per_dim) && residual[code + stride] < residual[code])
        is_min = false;
    }
    if (is_min && (point_of(code) - xbar).norm() > near) minima.emplace_back(residual[code], code);
  }
  std::sort(minima.begin(), minima.end());
  if (minima.size() > 64) minima.resize(64);
  SolverConfig refine;
  refine.tol_residual = 1e-12;
  refine.max_iter = 30;
  for (const auto& [value, code] : minima) {
    const auto trace = solve(problem, point_of(code), refine);
    if (trace.status != SolveStatus::Converged) continue;
    const Vector& y = trace.iterates.back();
    const double dist = (y - xbar).norm();
    if (dist < radius && dist > near && trace.residuals.back() < 1e-6) record(y);
  }
  report.pass = report.other_solutions.empty();
  return report;
}

Certificate certify(const ProblemInstance<double>& problem, const MajorantSpec<double>& spec, const Vector& x0,
                    const CertifyOptions& opts) {
  if (!problem.solution) throw PreconditionError("certification needs a known solution");
  if (x0.size() != problem.n) throw PreconditionError("x0 has wrong dimension");
  const Vector& xbar = *problem.solution;
  const double floor = rounding_floor(xbar.norm());

  Certificate cert;
  cert.radii = radii(spec, problem.kappa);
  cert.rate_exponent = default_rate_exponent(spec);
  const auto axioms = verify_majorant_axioms(spec, default_grid(cert.radii.nu), cert.rate_exponent);
  if (!axioms.pass()) {
    std::string why;
    for (const auto* a : {&axioms.h1, &axioms.h2, &axioms.h3, &axioms.smooth})
      if (!a->pass) why += (why.empty() ? "" : "; ") + a->detail;
    throw PreconditionError("majorant axioms fail: " + why);
  }
  cert.preconditions.push_back({"majorant axioms", true, "h1 h2 h3 smoothness hold on the grid"});

  cert.t0 = (x0 - xbar).norm();
  const double r = cert.radii.r;
  cert.preconditions.push_back({"x0 in B(xbar, r)", cert.t0 < r,
                                "t0=" + short_number(cert.t0) + (cert.t0 < r ? " < " : " >= ") + "r=" +
                                    short_number(r)});

  const auto ineq = check_majorant_inequality(problem, spec, opts.checks);
  cert.preconditions.push_back({"majorant inequality (sampled)", ineq.pass,
                                "max violation " + short_number(ineq.max_violation) + " over " +
                                    std::to_string(ineq.samples) + " samples"});

  try {
    const double modulus = strong_regularity_modulus(linearize(problem, xbar), xbar);
    const bool ok = spec.lambda() >= modulus * (1.0 - 1e-9);
    cert.preconditions.push_back({"strong regularity modulus", ok,
                                  "computed " + short_number(modulus) + (ok ? " <= " : " > ") + "lambda=" +
                                      short_number(spec.lambda())});
  } catch (const Error& e) {
    cert.preconditions.push_back({"strong regularity modulus", false, e.what()});
  }

  cert.trace = solve(problem, x0, opts.solver);
  const auto& errors = cert.trace.errors;
  cert.verdicts.push_back({"converged", cert.trace.status == SolveStatus::Converged,
                           std::string(to_string(cert.trace.status)) + " after " +
                               std::to_string(cert.trace.steps()) + " steps"});

  if (cert.t0 == 0.0) {
    cert.verdicts.push_back({"majorization", true, "x0 is the solution"});
  } else if (!(cert.t0 < cert.radii.rho)) {
    cert.verdicts.push_back({"majorization", false, "t0 >= rho: no majorizing sequence"});
  } else {
    attach_envelope(cert.trace, spec);
    const auto& t = cert.trace.envelope;
    const double slack = 1e-10 * (1.0 + cert.t0);
    bool majorized = true;
    for (std::size_t k = 0; k < errors.size(); ++k) {
      cert.majorized.push_back(errors[k] <= t[k] + slack);
      majorized = majorized && cert.majorized.back();
    }
    cert.verdicts.push_back({"majorization", majorized, "e_k <= t_k for all k"});

    const double q = cert.rate_exponent + 1.0;
    bool rate_ok = true, monotone = true;
    for (std::size_t k = 0; k + 1 < errors.size() && k + 1 < t.size(); ++k) {
      const double denom = std::pow(t[k], q);
      if (!(denom > 0) || !(errors[k] > floor)) break;
      const double bound = t[k + 1] / denom;
      cert.rate_bounds.push_back(bound);
      if (errors[k + 1] > bound * std::pow(errors[k], q) + floor) rate_ok = false;
      if (!(errors[k + 1] < errors[k])) monotone = false;
    }
    cert.verdicts.push_back({"rate", rate_ok, "e_{k+1} <= (t_{k+1}/t_k^" + short_number(q) + ") e_k^" +
                                                  short_number(q)});
    cert.verdicts.push_back({"monotone errors", monotone, "e_{k+1} < e_k"});

    if (cert.rate_exponent == 1.0) {
      const auto v = eval_psi(spec, cert.t0);
      const double qb = v.curvature / (2.0 * std::abs(v.slope));
      cert.quadratic_bound = qb;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        if (!(errors[k] > floor)) break;
        if (errors[k + 1] > (qb + 1e-9) * errors[k] * errors[k] + floor) ok = false;
      }
      cert.verdicts.push_back({"quadratic bound", ok, "e_{k+1}/e_k^2 <= " + short_number(qb)});
    }
  }

  if (opts.scan_uniqueness && problem.n <= 3) {
    const double radius = std::min(r, cert.radii.sigma);
    const int grid = problem.n == 1 ? 2001 : problem.n == 2 ? 101 : 31;
    cert.uniqueness = uniqueness_scan(problem, radius, grid);
    cert.verdicts.push_back({"uniqueness", cert.uniqueness->pass,
                             std::to_string(cert.uniqueness->other_solutions.size()) +
                                 " other solutions within radius " + short_number(radius)});
  } else {
    cert.verdicts.push_back({"uniqueness", true, "scan skipped", true});
  }

  cert.pass = all_pass(cert.preconditions) && all_pass(cert.verdicts);
  return cert;
}

void print_certificate(std::ostream& out, const Certificate& cert) {
  out << "certificate: " << (cert.pass ? "PASS" : "FAIL") << "\n";
  out << "radii: nu=" << short_number(cert.radii.nu) << " rho=" << short_number(cert.radii.rho)
      << " sigma=" << short_number(cert.radii.sigma) << " r=" << short_number(cert.radii.r) << "\n";
  out << "t0=" << short_number(cert.t0) << " p=" << short_number(cert.rate_exponent) << "\n";
  auto line = [&](const Verdict& v) {
    out << (v.skipped ? "[skip] " : v.pass ? "[pass] " : "[FAIL] ") << v.name << ": " << v.detail << "\n";
  };
  for (const auto& v : cert.preconditions) line(v);
  for (const auto& v : cert.verdicts) line(v);
  out << "k error t_k\n";
  for (std::size_t k = 0; k < cert.trace.errors.size(); ++k) {
    out << k << " " << format_number(cert.trace.errors[k]);
    if (k < cert.trace.envelope.size()) out << " " << format_number(cert.trace.envelope[k]);
    out << "\n";
  }
}

void write_trace_csv(std::ostream& out, const IterationTrace<double>& trace) {
  out << "k,x,residual,error,t_k,ratio\n";
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    out << k << ",";
    const Vector& x = trace.iterates[k];
    for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? ";" : "") << format_number(x(i));
    out << "," << format_number(trace.residuals[k]) << ",";
    if (k < trace.errors.size()) out << format_number(trace.errors[k]);
    out << ",";
    if (k < trace.envelope.size()) out << format_number(trace.envelope[k]);
    out << ",";
    if (k >= 1 && k - 1 < trace.ratios.size()) out << format_number(trace.ratios[k - 1]);
    out << "\n";
  }
}

}  // namespace geqn
