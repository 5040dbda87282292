#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "geqn/problem_io.hpp"
#include "geqn/registry.hpp"

using namespace geqn;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string problem_file(const std::string& name) { return std::string(GEQN_PROBLEM_DIR) + "/" + name + ".geqn"; }

const char* sqrt1_text = R"({
  "name": "sqrt1", "n": 1,
  "poly": [{"component": 0, "exponents": [2], "coefficient": 1.0},
           {"component": 0, "exponents": [0], "coefficient": -1.0}],
  "set": {"type": "orthant"},
  "solution": [1.0],
  "kappa": 10
})";

std::string with(const std::string& key, const std::string& value) {
  auto j = nlohmann::json::parse(sqrt1_text);
  j[key] = nlohmann::json::parse(value);
  return j.dump();
}

}  // namespace

TEST_CASE("the registry file for x^2 - 1 parses") {
  const auto p = parse_problem(problem_file("sqrt1"));
  CHECK(p.name == "sqrt1");
  CHECK(p.n == 1);
  CHECK(std::holds_alternative<Orthant>(p.set));
  CHECK((*p.solution)(0) == 1.0);
  CHECK(*p.kappa == 10.0);
  CHECK(p.jacobian(Vector::Constant(1, 3.0))(0, 0) == 6.0);
}

TEST_CASE("every registry problem round-trips through its file") {
  for (const auto& problem : registry_problems()) {
    CAPTURE(problem.name);
    const std::string text = serialize_problem(problem);
    CHECK(read_file(problem_file(problem.name)) == text);
    const auto parsed = parse_problem(problem_file(problem.name));
    CHECK(serialize_problem(parsed) == text);
    CHECK(nlohmann::json::parse(serialize_problem(parsed)) == nlohmann::json::parse(text));
    CHECK(parsed.n == problem.n);
    CHECK(set_name(parsed.set) == set_name(problem.set));
    CHECK(*parsed.solution == *problem.solution);
  }
}

TEST_CASE("parse errors") {
  CHECK_NOTHROW(parse_problem_text(sqrt1_text));
  CHECK_THROWS_WITH_AS(parse_problem_text(with("set", R"({"type": "cone"})")),
                       doctest::Contains("unknown set type 'cone'"), ParseError);
  CHECK_THROWS_WITH_AS(parse_problem_text(with("extra", "1")), doctest::Contains("unexpected field 'extra'"),
                       ParseError);
  auto j = nlohmann::json::parse(sqrt1_text);
  j.erase("poly");
  CHECK_THROWS_WITH_AS(parse_problem_text(j.dump()), doctest::Contains("missing field 'poly'"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("n", "0")), ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("n", "1.5")), ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("solution", "[1.0, 2.0]")), ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("poly", R"([{"component": 1, "exponents": [1], "coefficient": 1}])")),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("poly", R"([{"component": 0, "exponents": [1, 0], "coefficient": 1}])")),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("poly", R"([{"component": 0, "exponents": [-1], "coefficient": 1}])")),
                  ParseError);
  CHECK_THROWS_AS(parse_problem_text(with("kappa", "-1")), ParseError);
  CHECK_THROWS_AS(parse_problem_text("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_problem("/nonexistent/file.geqn"), ParseError);
}

TEST_CASE("a wrong solution fails validation") {
  // Residual on the orthant at x = 1.1 is f(1.1) = 0.21.
  CHECK_THROWS_WITH_AS(parse_problem_text(with("solution", "[1.1]")),
                       doctest::Contains("solution residual 2.1e-01 > 1e-10"), ValidationError);
}

TEST_CASE("infinite bounds and kappa") {
  const auto p = parse_problem_text(with("set", R"({"type": "box", "lower": ["-inf"], "upper": [2]})"));
  CHECK(std::get<Box<double>>(p.set).lower(0) == -kInf);
  const auto q = parse_problem_text(with("kappa", R"("inf")"));
  CHECK_FALSE(q.kappa);
  CHECK(serialize_problem(q).find(R"("kappa": "inf")") != std::string::npos);
}

TEST_CASE("extremal problem files") {
  const auto p = parse_problem_text(R"({"name": "w", "extremal": {"form": "smale", "gamma": 2}})");
  CHECK(p.extremal_of);
  CHECK(*p.kappa == 0.5);
  CHECK(p.f(Vector::Constant(1, -0.1))(0) == doctest::Approx(-(0.1 / 0.8 - 0.2)));
  CHECK_THROWS_AS(parse_problem_text(R"({"name": "w", "extremal": {"form": "hoelder", "K": 1}})"), ParseError);
  CHECK_THROWS_AS(parse_problem_text(R"({"name": "w", "extremal": {"form": "cubic"}})"), ParseError);
}
