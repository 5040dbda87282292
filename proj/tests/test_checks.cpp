#include <doctest.h>

#include "geqn/checks.hpp"
#include "geqn/registry.hpp"

using namespace geqn;

namespace {
const auto tight = MajorantSpec<double>::hoelder(0.5, 1.0, 1.0);
const auto loose_smale = MajorantSpec<double>::smale(0.5, 0.5);
}  // namespace

TEST_CASE("majorant inequality holds with equality for x^2 - 1") {
  const auto& problem = registry_problem("sqrt1");
  const auto report = check_majorant_inequality(problem, tight);
  CHECK(report.pass);
  CHECK(report.max_violation <= 1e-12);
  CHECK(report.samples == 2000u * 33u);
}

TEST_CASE("a too-small majorant is rejected at tau = 0") {
  const auto& problem = registry_problem("sqrt1");
  const auto small = MajorantSpec<double>::hoelder(0.5, 0.5, 1.0);
  const auto report = check_majorant_inequality(problem, small);
  CHECK_FALSE(report.pass);
  REQUIRE(report.worst_tau);
  CHECK(*report.worst_tau == 0.0);
  CHECK(report.max_violation > 0.1);
  for (const auto& pair : incompatible_pairs())
    CHECK_FALSE(check_majorant_inequality(registry_problem(pair.problem), pair.spec).pass);
}

TEST_CASE("Taylor bound") {
  const auto& problem = registry_problem("sqrt1");
  const auto report = check_taylor_bound(problem, tight);
  CHECK(report.pass);
  CHECK(report.max_violation <= 1e-12);
  CHECK_FALSE(check_taylor_bound(problem, MajorantSpec<double>::hoelder(0.5, 0.5, 1.0)).pass);

  const auto& affine = registry_problem("affine_vi");
  const auto a = check_taylor_bound(affine, MajorantSpec<double>::hoelder(1.0, 1.0, 1.0));
  CHECK(a.pass);
  CHECK(a.max_violation == 0.0);
}

TEST_CASE("second-derivative bound") {
  const auto& problem = registry_problem("sqrt1");
  CHECK(check_second_derivative_bounds(problem, loose_smale).pass);
  CHECK(check_second_derivative_bounds(problem, tight).pass);
  CHECK_FALSE(check_second_derivative_bounds(problem, MajorantSpec<double>::smale(0.5, 0.4)).pass);
  CHECK(check_second_derivative_bounds(registry_problem("affine_vi"), loose_smale).pass);
  CHECK_THROWS_AS(check_second_derivative_bounds(problem, MajorantSpec<double>::hoelder(0.5, 1.0, 0.5)),
                  UnsupportedError);
}

TEST_CASE("check radius and sampling options") {
  const auto& problem = registry_problem("sqrt1");
  CHECK(default_check_radius(problem, tight) == doctest::Approx(10.0 * (1.0 - 1e-6)));
  CHECK(default_check_radius(problem, loose_smale) == doctest::Approx(2.0 * (1.0 - 1e-6)));

  CheckOptions opts;
  opts.samples = 50;
  opts.radius = 0.25;
  const auto a = check_taylor_bound(problem, tight, opts);
  const auto b = check_taylor_bound(problem, tight, opts);
  CHECK(a.samples == 50);
  CHECK(a.worst_x == b.worst_x);
  opts.tau_points = 1;
  CHECK_THROWS_AS(check_majorant_inequality(problem, tight, opts), PreconditionError);

  auto unknown = problem;
  unknown.solution.reset();
  CHECK_THROWS_AS(check_taylor_bound(unknown, tight), PreconditionError);
}

TEST_CASE("every certified pair satisfies its sampled inequalities") {
  CheckOptions opts;
  opts.samples = 300;
  for (const auto& pair : certified_pairs()) {
    const auto& problem = registry_problem(pair.problem);
    CAPTURE(pair.problem);
    CAPTURE(pair.label);
    CHECK(check_majorant_inequality(problem, pair.spec, opts).pass);
    CHECK(check_taylor_bound(problem, pair.spec, opts).pass);
  }
}
