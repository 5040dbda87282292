#include "geqn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "geqn/certify.hpp"
#include "geqn/checks.hpp"
#include "geqn/errors.hpp"
#include "geqn/lcp.hpp"
#include "geqn/majorant.hpp"
#include "geqn/newton.hpp"
#include "geqn/problem_io.hpp"
#include "geqn/registry.hpp"

namespace geqn {

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

double parse_double(std::string_view text, const std::string& what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text == "inf" || text == "+inf") return kInf;
  if (text == "-inf") return -kInf;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || end != text.data() + text.size())
    throw UsageError(what + ": '" + std::string(text) + "' is not a number");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

Vector parse_vector(const std::string& text, const std::string& what) {
  const auto parts = split(text, ',');
  if (parts.empty()) throw UsageError(what + " is empty");
  Vector v(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_double(parts[i], what);
  return v;
}

Matrix parse_matrix(const std::string& text, const std::string& what) {
  const auto rows = split(text, ';');
  if (rows.empty()) throw UsageError(what + " is empty");
  std::vector<Vector> parsed;
  for (const auto& r : rows) parsed.push_back(parse_vector(r, what));
  Matrix m(static_cast<Eigen::Index>(parsed.size()), parsed.front().size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    if (parsed[i].size() != m.cols()) throw UsageError(what + " rows have different lengths");
    m.row(static_cast<Eigen::Index>(i)) = parsed[i].transpose();
  }
  return m;
}

struct SpecFlags {
  std::vector<std::string> holder;
  std::vector<std::string> smale;
  double lambda = 1.0;
};

void add_spec_options(CLI::App* sub, SpecFlags& flags) {
  auto* h = sub->add_option("--holder", flags.holder, "Hoelder majorant: K=<value> [p=<value>] [R=<value>]")
                ->expected(1, 3);
  auto* s = sub->add_option("--smale", flags.smale, "Smale majorant: gamma=<value>")->expected(1, 1);
  h->excludes(s);
  sub->add_option("--lambda", flags.lambda, "strong regularity modulus (default 1)");
}

std::map<std::string, double> key_values(const std::vector<std::string>& items, const std::string& flag) {
  std::map<std::string, double> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(flag + " expects key=value, got '" + item + "'");
    out[item.substr(0, eq)] = parse_double(item.substr(eq + 1), flag + " " + item.substr(0, eq));
  }
  return out;
}

MajorantSpec<double> build_spec(const SpecFlags& flags) {
  if (!flags.holder.empty()) {
    auto kv = key_values(flags.holder, "--holder");
    for (const auto& [k, v] : kv)
      if (k != "K" && k != "p" && k != "R") throw UsageError("--holder: unknown key '" + k + "'");
    if (!kv.count("K")) throw UsageError("--holder needs K=<value>");
    std::optional<double> R;
    if (kv.count("R") && std::isfinite(kv["R"])) R = kv["R"];
    return MajorantSpec<double>::hoelder(flags.lambda, kv["K"], kv.count("p") ? kv["p"] : 1.0, R);
  }
  if (!flags.smale.empty()) {
    auto kv = key_values(flags.smale, "--smale");
    if (kv.size() != 1 || !kv.count("gamma")) throw UsageError("--smale needs gamma=<value>");
    return MajorantSpec<double>::smale(flags.lambda, kv["gamma"]);
  }
  throw UsageError("a majorant is required: --holder K=<value> [p=<value>] or --smale gamma=<value>");
}

std::optional<double> parse_kappa(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const double k = parse_double(text, "--kappa");
  if (!(k > 0)) throw UsageError("--kappa must be positive");
  if (std::isinf(k)) return std::nullopt;
  return k;
}

std::string short_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

std::string join(const Vector& x) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += (i ? "," : "") + format_number(x(i));
  return s;
}

// Writes to --output when given, else to the output stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write " + path);
      out_ = &file_;
    }
  }
  std::ostream& operator*() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_;
};

int cmd_radii(const SpecFlags& flags, const std::string& kappa_text, const std::string& format, std::ostream& out) {
  const auto spec = build_spec(flags);
  const auto kappa = parse_kappa(kappa_text);
  const auto r = radii(spec, kappa);
  if (format == "csv") {
    out << "nu,rho,sigma,r,kappa\n"
        << format_number(r.nu) << "," << format_number(r.rho) << "," << format_number(r.sigma) << ","
        << format_number(r.r) << "," << format_number(kappa.value_or(kInf)) << "\n";
  } else {
    out << "ν=" << short_number(r.nu) << " ρ=" << short_number(r.rho) << " σ=" << short_number(r.sigma)
        << " r=" << short_number(r.r) << "\n";
  }
  return 0;
}

int cmd_sequence(const SpecFlags& flags, double t0, int k_max, double tol, const std::string& format,
                 std::ostream& out) {
  const auto spec = build_spec(flags);
  const auto seq = majorant_sequence(spec, t0, k_max, tol);
  out << (format == "csv" ? "k,t_k,ratio\n" : "k t_k t_k/t_{k-1}\n");
  const char sep = format == "csv" ? ',' : ' ';
  for (std::size_t k = 0; k < seq.size(); ++k) {
    out << k << sep << format_number(seq[k]) << sep;
    if (k > 0) out << format_number(seq[k] / seq[k - 1]);
    out << "\n";
  }
  return 0;
}

void print_trace_text(std::ostream& out, const IterationTrace<double>& trace) {
  out << "status: " << to_string(trace.status);
  if (!trace.message.empty()) out << " (" << trace.message << ")";
  out << "\nsteps: " << trace.steps() << "\n";
  out << "k x residual" << (trace.errors.empty() ? "" : " error") << (trace.envelope.empty() ? "" : " t_k")
      << "\n";
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    out << k << " " << join(trace.iterates[k]) << " " << format_number(trace.residuals[k]);
    if (k < trace.errors.size()) out << " " << format_number(trace.errors[k]);
    if (k < trace.envelope.size()) out << " " << format_number(trace.envelope[k]);
    out << "\n";
  }
}

Vector starting_point(const std::string& text, const ProblemInstance<double>& problem) {
  const Vector x0 = parse_vector(text, "--x0");
  if (x0.size() != problem.n)
    throw UsageError("--x0 has " + std::to_string(x0.size()) + " entries; problem dimension is " +
                     std::to_string(problem.n));
  return x0;
}

int cmd_solve(const std::string& path, const std::string& x0_text, const SolverConfig& config,
              const std::string& format, Sink& sink) {
  const auto problem = parse_problem(path);
  const auto trace = solve(problem, starting_point(x0_text, problem), config);
  if (format == "csv") write_trace_csv(*sink, trace);
  else print_trace_text(*sink, trace);
  return trace.status == SolveStatus::Converged ? 0 : 1;
}

int cmd_certify(const std::string& path, const SpecFlags& flags, const std::string& x0_text,
                const CertifyOptions& opts, const std::string& format, Sink& sink) {
  const auto problem = parse_problem(path);
  const auto spec = build_spec(flags);
  const auto cert = certify(problem, spec, starting_point(x0_text, problem), opts);
  if (format == "csv") write_trace_csv(*sink, cert.trace);
  else print_certificate(*sink, cert);
  return cert.pass ? 0 : 1;
}

int cmd_lcp(const std::string& m_text, const std::string& q_text, const std::string& path, int max_pivots,
            std::ostream& out) {
  Matrix M;
  Vector q;
  if (!path.empty()) {
    if (!m_text.empty() || !q_text.empty()) throw UsageError("give either --problem or --M/--q");
    const auto problem = parse_problem(path);
    if (!std::holds_alternative<Orthant>(problem.set)) throw UsageError("lcp needs a problem on the orthant");
    if (!problem.poly || problem.poly->degree() > 1) throw UsageError("lcp needs an affine problem");
    const Vector zero = Vector::Zero(problem.n);
    M = problem.jacobian(zero);
    q = problem.f(zero);
  } else {
    if (m_text.empty() || q_text.empty()) throw UsageError("lcp needs --M and --q (or --problem)");
    M = parse_matrix(m_text, "--M");
    q = parse_vector(q_text, "--q");
    if (M.rows() != M.cols() || q.size() != M.rows()) throw UsageError("--M must be square and match --q");
  }
  const auto result = lemke(M, q, max_pivots);
  out << "status=" << to_string(result.status) << " pivots=" << result.pivots;
  if (result.status == LcpStatus::Solved) out << " z=" << join(result.z);
  out << "\n";
  return result.status == LcpStatus::Solved ? 0 : 1;
}

struct BenchRow {
  std::string problem, majorant, x0, status, steps, final_error, order;
  bool certified = false;
};

BenchRow bench_one(const CertifiedPair& pair, const CertifyOptions& opts) {
  BenchRow row{pair.problem, pair.label, join(pair.x0), "", "", "", ""};
  try {
    const auto& problem = registry_problem(pair.problem);
    const auto cert = certify(problem, pair.spec, pair.x0, opts);
    row.status = to_string(cert.trace.status);
    row.steps = std::to_string(cert.trace.steps());
    if (!cert.trace.errors.empty()) row.final_error = format_number(cert.trace.errors.back());
    try {
      row.order = format_number(estimate_order(cert.trace, problem.solution->norm()));
    } catch (const PreconditionError&) {
    }
    row.certified = cert.pass;
  } catch (const Error& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

int cmd_bench(unsigned threads, const CertifyOptions& opts, Sink& sink) {
  const auto pairs = certified_pairs();
  std::vector<BenchRow> rows(pairs.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::size_t next = 0;
  while (next < pairs.size()) {
    std::vector<std::future<BenchRow>> batch;
    const std::size_t start = next;
    for (; next < pairs.size() && next - start < threads; ++next)
      batch.push_back(std::async(std::launch::async, bench_one, std::cref(pairs[next]), std::cref(opts)));
    for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
  }
  std::sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return std::tie(a.problem, a.majorant, a.x0) < std::tie(b.problem, b.majorant, b.x0);
  });
  auto& out = *sink;
  out << "problem,majorant,x0,status,steps,final_error,order,certified\n";
  bool all = true;
  for (const auto& r : rows) {
    std::string x0 = r.x0;
    std::replace(x0.begin(), x0.end(), ',', ';');
    out << r.problem << "," << r.majorant << "," << x0 << "," << r.status << "," << r.steps << ","
        << r.final_error << "," << r.order << "," << (r.certified ? "pass" : "fail") << "\n";
    all = all && r.certified;
  }
  return all ? 0 : 1;
}

int cmd_extremal(const SpecFlags& flags, double t0, int iterations, const std::string& format, Sink& sink) {
  const auto spec = build_spec(flags);
  const auto problem = extremal_problem(spec);
  const double rho = radii(spec, problem.kappa).rho;
  SolverConfig config;
  config.max_iter = iterations;
  config.tol_residual = 1e-15;
  auto trace = solve(problem, Vector::Constant(1, t0), config);
  const bool inside = t0 > 0 && t0 < rho;
  if (inside) attach_envelope(trace, spec);

  auto& out = *sink;
  const char sep = format == "csv" ? ',' : ' ';
  out << (format == "csv" ? "k,x,abs_x,t_k\n" : "k x |x| t_k\n");
  double worst = 0.0;
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    const double x = trace.iterates[k](0);
    out << k << sep << format_number(x) << sep << format_number(std::abs(x)) << sep;
    if (k < trace.envelope.size()) {
      out << format_number(trace.envelope[k]);
      worst = std::max(worst, std::abs(std::abs(x) - trace.envelope[k]));
    }
    out << "\n";
  }
  if (format != "csv") {
    out << "rho=" << short_number(rho) << " status=" << to_string(trace.status);
    if (inside) out << " max | |x_k| - t_k | = " << format_number(worst);
    out << "\n";
  }
  return inside && trace.status == SolveStatus::Converged && worst <= 1e-12 ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Newton's method for generalized equations f(x) + N_C(x) ∋ 0 with majorant certificates", "geqn"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  };
  std::string output;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = 2000;

  SpecFlags flags;
  std::string kappa_text, problem_path, x0_text, m_text, q_text;
  double t0 = 0.0, tol = 1e-15;
  int k_max = 20, iterations = 50, max_pivots = -1;
  SolverConfig config;
  unsigned threads = 0;

  auto* radii_cmd = app.add_subcommand("radii", "convergence and uniqueness radii of a majorant");
  add_spec_options(radii_cmd, flags);
  radii_cmd->add_option("--kappa", kappa_text, "domain radius around the solution (default inf)");
  add_format(radii_cmd);

  auto* seq_cmd = app.add_subcommand("sequence", "majorizing sequence t_k");
  add_spec_options(seq_cmd, flags);
  seq_cmd->add_option("--t0", t0, "starting value in (0, rho)")->required();
  seq_cmd->add_option("--kmax", k_max, "maximum number of steps");
  seq_cmd->add_option("--tol", tol, "stop once t_k < tol");
  add_format(seq_cmd);

  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--problem", problem_path, "problem file (.geqn)")->required();
    sub->add_option("--x0", x0_text, "starting point, comma separated")->required()->allow_extra_args(false);
    sub->add_option("--max-iter", config.max_iter, "iteration limit");
    sub->add_option("--tol", config.tol_residual, "natural residual tolerance");
    sub->add_option("--output", output, "write data to this file");
    add_format(sub);
  };
  auto* solve_cmd = app.add_subcommand("solve", "run Newton's method");
  add_solver(solve_cmd);

  auto* cert_cmd = app.add_subcommand("certify", "run Newton's method and check it against a majorant");
  add_solver(cert_cmd);
  add_spec_options(cert_cmd, flags);
  cert_cmd->add_option("--seed", seed, "seed for the sampling checks");
  cert_cmd->add_option("--samples", samples, "number of sampled points per check");

  auto* lcp_cmd = app.add_subcommand("lcp", "solve 0 <= z ⊥ M z + q >= 0 by Lemke's method");
  lcp_cmd->add_option("--M", m_text, "matrix, rows separated by ';' (e.g. \"2,1;1,2\")");
  lcp_cmd->add_option("--q", q_text, "vector, comma separated");
  lcp_cmd->add_option("--problem", problem_path, "affine problem file on the orthant");
  lcp_cmd->add_option("--max-pivots", max_pivots, "pivot limit (default 10 * 2^n)");

  auto* bench_cmd = app.add_subcommand("bench", "certify every registered problem/majorant pair");
  bench_cmd->add_option("--output", output, "write the CSV summary to this file");
  bench_cmd->add_option("--seed", seed, "seed for the sampling checks");
  bench_cmd->add_option("--samples", samples, "number of sampled points per check");
  bench_cmd->add_option("--threads", threads, "worker threads (default: hardware concurrency)");

  auto* ext_cmd = app.add_subcommand("extremal", "Newton's method on the odd extension of a majorant");
  add_spec_options(ext_cmd, flags);
  ext_cmd->add_option("--t0", t0, "starting point")->required();
  ext_cmd->add_option("--iterations", iterations, "iteration limit");
  ext_cmd->add_option("--output", output, "write data to this file");
  add_format(ext_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  CertifyOptions opts;
  opts.solver = config;
  opts.checks.seed = seed;
  opts.checks.samples = samples;

  try {
    if (*radii_cmd) return cmd_radii(flags, kappa_text, format, out);
    if (*seq_cmd) return cmd_sequence(flags, t0, k_max, tol, format, out);
    if (*lcp_cmd) return cmd_lcp(m_text, q_text, problem_path, max_pivots, out);
    Sink sink(output, out);
    if (*solve_cmd) return cmd_solve(problem_path, x0_text, config, format, sink);
    if (*cert_cmd) return cmd_certify(problem_path, flags, x0_text, opts, format, sink);
    if (*bench_cmd) return cmd_bench(threads, opts, sink);
    if (*ext_cmd) return cmd_extremal(flags, t0, iterations, format, sink);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace geqn
