#include <doctest.h>

#include <cmath>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include "geqn/newton.hpp"
#include "geqn/registry.hpp"

using namespace geqn;
using Rational = boost::multiprecision::mpq_rational;

namespace {
Vector scalar(double x) { return Vector::Constant(1, x); }
}  // namespace

TEST_CASE("Newton on x^2 - 1 follows the classical recurrence") {
  const std::vector<double> expected{1.5, 1.0833333333333333, 1.0032051282051282, 1.0000051200131072};
  for (const char* name : {"sqrt1_eq", "sqrt1"}) {
    const auto trace = solve(registry_problem(name), scalar(1.5));
    CAPTURE(name);
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.steps() <= 5);
    REQUIRE(trace.iterates.size() >= 5);
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(trace.iterates[k](0) == doctest::Approx(expected[k]).epsilon(1e-12));
    CHECK(std::abs(trace.iterates[4](0) - 1.0 - 1.31e-11) <= 1e-13);
  }
}

TEST_CASE("affine problems converge in one step") {
  for (const char* name : {"affine_vi"}) {
    const auto trace = solve(registry_problem(name), Vector::Constant(2, 3.0));
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.steps() == 1);
  }
}

TEST_CASE("starting at the solution takes no steps") {
  for (const auto& problem : registry_problems()) {
    const auto trace = solve(problem, *problem.solution);
    CAPTURE(problem.name);
    CHECK(trace.status == SolveStatus::Converged);
    CHECK(trace.steps() == 0);
  }
}

TEST_CASE("failure statuses") {
  const auto& sqrt1 = registry_problem("sqrt1");
  // At x = 0 the linearized problem is 0 <= z, -1 >= 0: infeasible.
  const auto stuck = solve(sqrt1, scalar(0.0));
  CHECK(stuck.status == SolveStatus::SubproblemFailure);
  CHECK_FALSE(stuck.message.empty());

  SolverConfig few;
  few.max_iter = 2;
  CHECK(solve(sqrt1, scalar(30.0), few).status == SolveStatus::MaxIter);

  SolverConfig tight;
  tight.divergence_radius = 1e-3;
  CHECK(solve(sqrt1, scalar(30.0), tight).status == SolveStatus::Diverged);

  const auto neg = solve(registry_problem("sqrt1"), scalar(-5.0));
  CHECK(neg.status != SolveStatus::Converged);

  SolverConfig bad;
  bad.max_iter = 0;
  CHECK_THROWS_AS(solve(sqrt1, scalar(1.0), bad), PreconditionError);
  CHECK_THROWS_AS(solve(sqrt1, Vector::Zero(2)), PreconditionError);
  const auto smale_witness = extremal_problem(MajorantSpec<double>::smale(1.0, 1.0));
  CHECK_THROWS_AS(solve(smale_witness, scalar(1.5)), PreconditionError);
}

TEST_CASE("extremal problem reproduces the majorizing sequence") {
  const auto spec = MajorantSpec<double>::hoelder(1.0, 1.0, 1.0);
  const auto problem = extremal_problem(spec);
  auto first = solve(problem, scalar(0.5), SolverConfig{1e-15, 1, 1e3});
  REQUIRE(first.iterates.size() == 2);
  CHECK(first.iterates[1](0) == doctest::Approx(-0.25).epsilon(1e-15));

  SolverConfig config;
  config.tol_residual = 1e-15;
  auto trace = solve(problem, scalar(0.5), config);
  attach_envelope(trace, spec);
  REQUIRE(trace.envelope.size() == trace.iterates.size());
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    CHECK(std::abs(std::abs(trace.iterates[k](0)) - trace.envelope[k]) <= 1e-12);
    if (k > 0 && trace.iterates[k](0) != 0.0) CHECK((trace.iterates[k](0) > 0) != (trace.iterates[k - 1](0) > 0));
  }
}

TEST_CASE("exact arithmetic: period-2 cycle at rho") {
  const auto spec = MajorantSpec<Rational>::hoelder(Rational(1), Rational(1), Rational(1));
  const auto problem = extremal_problem(spec);
  VectorX<Rational> x0(1);
  x0(0) = Rational(2, 3);
  SolverConfig config;
  config.max_iter = 50;
  const auto trace = solve(problem, x0, config);
  CHECK(trace.status == SolveStatus::MaxIter);
  REQUIRE(trace.iterates.size() == 51);
  for (std::size_t k = 0; k < trace.iterates.size(); ++k)
    CHECK(trace.iterates[k](0) == (k % 2 == 0 ? Rational(2, 3) : Rational(-2, 3)));
}

TEST_CASE("exact arithmetic: Newton on x^2 - 1 from 1/2") {
  const Polynomial<Rational> p(1, {{0, {2}, Rational(1)}, {0, {0}, Rational(-1)}});
  VectorX<Rational> one(1), x0(1);
  one(0) = Rational(1);
  x0(0) = Rational(1, 2);
  const auto problem = make_polynomial_problem<Rational>("sqrt1", p, ZeroMap{}, one);
  SolverConfig config;
  config.max_iter = 2;
  const auto trace = solve(problem, x0, config);
  REQUIRE(trace.iterates.size() == 3);
  CHECK(trace.iterates[1](0) == Rational(5, 4));
  CHECK(trace.iterates[2](0) == Rational(41, 40));
}

TEST_CASE("envelope") {
  const auto spec = MajorantSpec<double>::hoelder(0.5, 1.0, 1.0);
  auto trace = solve(registry_problem("sqrt1_eq"), scalar(0.5));
  attach_envelope(trace, spec);
  REQUIRE(trace.envelope.size() == trace.errors.size());
  CHECK(trace.envelope[0] == 0.5);
  CHECK(trace.envelope[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(trace.errors[1] == doctest::Approx(0.25).epsilon(1e-15));
  for (std::size_t k = 0; k < trace.errors.size(); ++k) CHECK(trace.errors[k] <= trace.envelope[k]);
  REQUIRE(trace.ratios.size() + 1 == trace.errors.size());
}
