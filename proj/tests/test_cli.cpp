#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "geqn/cli.hpp"

using namespace geqn;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "geqn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string problem_file(const std::string& name) { return std::string(GEQN_PROBLEM_DIR) + "/" + name + ".geqn"; }

std::string temp_file(const std::string& name, const std::string& text) {
  const std::string path = std::string("/tmp/geqn_test_") + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("radii") {
  const auto r = run({"radii", "--holder", "K=1", "p=1", "--kappa", "10"});
  CHECK(r.code == 0);
  CHECK(r.out == "ν=1 ρ=0.666667 σ=2 r=0.666667\n");
  const auto csv = run({"radii", "--smale", "gamma=1", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.rfind("nu,rho,sigma,r,kappa\n0.29289321881345", 0) == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"radii"}).code == 2);
  CHECK(run({"radii", "--holder", "K=1", "--smale", "gamma=1"}).code == 2);
  CHECK(run({"radii", "--holder", "p=1"}).code == 2);
  CHECK(run({"radii", "--holder", "K=abc"}).code == 2);
  CHECK(run({"radii", "--holder", "K=1", "--format", "xml"}).code == 2);
  CHECK(run({"sequence", "--holder", "K=1", "--t0", "0.9"}).code == 2);
  CHECK(run({"solve", "--problem", problem_file("sqrt1"), "--x0", "1,2"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("parse and validation errors exit with 2") {
  const auto cone = temp_file("cone.geqn", R"({"name": "c", "n": 1, "poly": [], "set": {"type": "cone"}})");
  const auto r = run({"solve", "--problem", cone, "--x0", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown set type") != std::string::npos);
  CHECK(r.out.empty());

  const auto wrong = temp_file(
      "wrong.geqn",
      R"({"name": "w", "n": 1, "poly": [{"component": 0, "exponents": [2], "coefficient": 1},
          {"component": 0, "exponents": [0], "coefficient": -1}], "set": {"type": "zero"}, "solution": [1.5]})");
  const auto v = run({"solve", "--problem", wrong, "--x0", "1"});
  CHECK(v.code == 2);
  CHECK(v.err.find("solution residual 1.2e+00 > 1e-10") != std::string::npos);
}

TEST_CASE("sequence") {
  const auto r = run({"sequence", "--holder", "K=1", "--t0", "0.5", "--kmax", "3", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out ==
        "k,t_k,ratio\n0,0.5,\n1,0.25,0.5\n2,0.041666666666666685,0.16666666666666674\n"
        "3,0.00090579710144927245,0.021739130434782528\n");
}

TEST_CASE("solve") {
  const auto ok = run({"solve", "--problem", problem_file("sqrt1"), "--x0", "1.5"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("status: converged", 0) == 0);

  const auto far = run({"solve", "--problem", problem_file("sqrt1"), "--x0", "-5"});
  CHECK(far.code == 1);
  CHECK(far.out.find("status: ") != std::string::npos);
  CHECK(far.out.find("converged") == std::string::npos);

  const auto csv1 = run({"solve", "--problem", problem_file("ncp2d"), "--x0", "1.2,0.1", "--format", "csv"});
  const auto csv2 = run({"solve", "--problem", problem_file("ncp2d"), "--x0", "1.2,0.1", "--format", "csv"});
  CHECK(csv1.code == 0);
  CHECK(csv1.out == csv2.out);
  CHECK(csv1.out.rfind("k,x,residual,error,t_k,ratio\n0,1.2;0.10000000000000001,", 0) == 0);
}

TEST_CASE("output file") {
  const std::string path = "/tmp/geqn_test_trace.csv";
  std::remove(path.c_str());
  const auto r =
      run({"solve", "--problem", problem_file("sqrt1"), "--x0", "1.5", "--format", "csv", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "k,x,residual,error,t_k,ratio");
}

TEST_CASE("certify") {
  const auto pass =
      run({"certify", "--problem", problem_file("sqrt1"), "--holder", "K=1", "p=1", "--lambda", "0.5", "--x0", "0.5"});
  CHECK(pass.code == 0);
  CHECK(pass.out.rfind("certificate: PASS", 0) == 0);

  const auto outside =
      run({"certify", "--problem", problem_file("sqrt1"), "--holder", "K=1", "--lambda", "0.5", "--x0", "0.3"});
  CHECK(outside.code == 1);
  CHECK(outside.out.rfind("certificate: FAIL", 0) == 0);

  const auto small = run({"certify", "--problem", problem_file("sqrt1"), "--holder", "K=0.5", "--lambda", "0.5",
                          "--x0", "0.9", "--seed", "3", "--samples", "200"});
  CHECK(small.code == 1);
}

TEST_CASE("lcp") {
  const auto r = run({"lcp", "--M", "2,1;1,2", "--q", "-5,-6"});
  CHECK(r.code == 0);
  CHECK(r.out == "status=solved pivots=3 z=1.3333333333333333,2.333333333333333\n");
  const auto p = run({"lcp", "--problem", problem_file("affine_vi")});
  CHECK(p.code == 0);
  CHECK(p.out.find("status=solved") == 0);
  CHECK(run({"lcp", "--M", "-1", "--q", "-1"}).code == 1);
  CHECK(run({"lcp", "--M", "1,2", "--q", "1"}).code == 2);
  CHECK(run({"lcp", "--problem", problem_file("sqrt1")}).code == 2);
}

TEST_CASE("bench is deterministic and all pairs pass") {
  const auto a = run({"bench", "--threads", "4"});
  const auto b = run({"bench", "--threads", "1"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "problem,majorant,x0,status,steps,final_error,order,certified");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(line.size() - 5) == ",pass");
  }
  CHECK(rows == 11);
}

TEST_CASE("extremal") {
  const auto inside = run({"extremal", "--holder", "K=1", "--t0", "0.5"});
  CHECK(inside.code == 0);
  CHECK(inside.out.find("status=converged") != std::string::npos);
  const auto boundary = run({"extremal", "--holder", "K=1", "--t0", "0.6666666666666666", "--iterations", "5"});
  CHECK(boundary.code == 1);
  CHECK(run({"extremal", "--holder", "K=1", "--lambda", "0.5", "--t0", "0.5"}).code == 2);
}
