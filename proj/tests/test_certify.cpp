#include <doctest.h>

#include <cmath>
#include <sstream>

#include "geqn/certify.hpp"
#include "geqn/registry.hpp"

using namespace geqn;

namespace {

Vector scalar(double x) { return Vector::Constant(1, x); }

const Verdict* find(const std::vector<Verdict>& vs, const std::string& name) {
  for (const auto& v : vs)
    if (v.name == name) return &v;
  return nullptr;
}

}  // namespace

TEST_CASE("order estimation") {
  const auto& problem = registry_problem("sqrt1_eq");
  const auto trace = solve(problem, scalar(0.5));
  CHECK(estimate_order(trace, 1.0) == doctest::Approx(2.0).epsilon(0.1));

  std::vector<double> geometric;
  for (int k = 0; k < 30; ++k) geometric.push_back(std::ldexp(1.0, -k));
  CHECK(estimate_order(geometric) == doctest::Approx(1.0).epsilon(0.05));

  CHECK_THROWS_WITH_AS(estimate_order(std::vector<double>{0.5, 0.25}), "order undetermined", PreconditionError);
  CHECK_THROWS_AS(estimate_order(std::vector<double>{1.0, 0.9, 0.8, 0.7, 0.6}), PreconditionError);
}

TEST_CASE("uniqueness scan") {
  const auto clean = uniqueness_scan(registry_problem("sqrt1"), 2.0 / 3.0, 10001);
  CHECK(clean.pass);
  CHECK(clean.points > 9000);

  CHECK(uniqueness_scan(registry_problem("sqrt1"), 0.0, 101).pass);

  const auto planted = uniqueness_scan(registry_problem("planted_roots"), 0.6, 2001);
  CHECK_FALSE(planted.pass);
  REQUIRE(planted.other_solutions.size() == 2);
  std::vector<double> roots{planted.other_solutions[0](0), planted.other_solutions[1](0)};
  std::sort(roots.begin(), roots.end());
  CHECK(roots[0] == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(roots[1] == doctest::Approx(0.5).epsilon(1e-9));

  const auto two_d = uniqueness_scan(registry_problem("ncp2d"), 0.5, 101);
  CHECK(two_d.pass);
}

TEST_CASE("certificate for the worked example") {
  const auto spec = MajorantSpec<double>::hoelder(0.5, 1.0, 1.0);
  const auto cert = certify(registry_problem("sqrt1_eq"), spec, scalar(0.5));
  CHECK(cert.pass);
  CHECK(cert.t0 == 0.5);
  CHECK(cert.radii.r == doctest::Approx(2.0 / 3.0));
  REQUIRE(cert.quadratic_bound);
  CHECK(*cert.quadratic_bound == doctest::Approx(1.0));
  CHECK(cert.trace.errors[1] == doctest::Approx(0.25));
  CHECK(cert.trace.envelope[1] == doctest::Approx(0.25));
  REQUIRE(cert.uniqueness);
  CHECK(cert.uniqueness->pass);
}

TEST_CASE("start outside the convergence ball") {
  const auto spec = MajorantSpec<double>::hoelder(0.5, 1.0, 1.0);
  const auto cert = certify(registry_problem("sqrt1_eq"), spec, scalar(0.3));
  CHECK_FALSE(cert.pass);
  const auto* ball = find(cert.preconditions, "x0 in B(xbar, r)");
  REQUIRE(ball);
  CHECK_FALSE(ball->pass);
}

TEST_CASE("boundary start on the extremal problem") {
  const auto spec = MajorantSpec<double>::hoelder(1.0, 1.0, 1.0);
  CertifyOptions opts;
  opts.solver.tol_residual = 1e-15;
  const auto cert = certify(registry_problem("extremal_holder"), spec, scalar(2.0 / 3.0), opts);
  CHECK_FALSE(cert.pass);
  const auto* maj = find(cert.verdicts, "majorization");
  REQUIRE(maj);
  CHECK_FALSE(maj->pass);
}

TEST_CASE("a too-small modulus is rejected") {
  const auto spec = MajorantSpec<double>::hoelder(0.25, 1.0, 1.0);
  const auto cert = certify(registry_problem("sqrt1_eq"), spec, scalar(0.8));
  const auto* mod = find(cert.preconditions, "strong regularity modulus");
  REQUIRE(mod);
  CHECK_FALSE(mod->pass);
  CHECK_FALSE(cert.pass);
}

TEST_CASE("every registered pair certifies") {
  for (const auto& pair : certified_pairs()) {
    CAPTURE(pair.problem);
    CAPTURE(pair.label);
    const auto cert = certify(registry_problem(pair.problem), pair.spec, pair.x0);
    for (const auto& v : cert.preconditions) {
      CAPTURE(v.name);
      CAPTURE(v.detail);
      CHECK(v.pass);
    }
    for (const auto& v : cert.verdicts) {
      CAPTURE(v.name);
      CAPTURE(v.detail);
      CHECK(v.pass);
    }
    CHECK(cert.pass);
  }
}

TEST_CASE("superlinear ratios on non-affine runs started within rho/2") {
  for (const auto& pair : certified_pairs()) {
    const auto& problem = registry_problem(pair.problem);
    if (problem.poly && problem.poly->degree() <= 1) continue;
    const auto cert = certify(problem, pair.spec, pair.x0);
    if (!(cert.t0 < cert.radii.rho / 2.0) || cert.trace.ratios.empty()) continue;
    CAPTURE(pair.problem);
    const auto& ratios = cert.trace.ratios;
    CHECK(*std::min_element(ratios.begin(), ratios.end()) < 0.1);
  }
}

TEST_CASE("certification preconditions") {
  auto unknown = registry_problem("sqrt1");
  unknown.solution.reset();
  CHECK_THROWS_AS(certify(unknown, MajorantSpec<double>::hoelder(0.5, 1.0, 1.0), scalar(0.5)), PreconditionError);
  const auto bad = MajorantSpec<double>::custom(
      1.0, [](const double& t) { return PsiValue<double>{t * t / 2.0 - t, t - 0.9, 1.0}; }, std::nullopt);
  CHECK_THROWS_AS(certify(registry_problem("sqrt1_eq"), bad, scalar(0.9)), PreconditionError);
}

TEST_CASE("number formatting and trace CSV") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(kInf) == "inf");

  const auto trace = solve(registry_problem("affine_vi"), Vector::Constant(2, 1.0));
  std::ostringstream a, b;
  write_trace_csv(a, trace);
  write_trace_csv(b, trace);
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "k,x,residual,error,t_k,ratio");
  std::getline(lines, row);
  CHECK(row.rfind("0,1;1,", 0) == 0);
}
