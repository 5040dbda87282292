#include "geqn/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "geqn/errors.hpp"

namespace geqn {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

void expect_object(const json& j, const std::string& where, const std::set<std::string>& required,
                   const std::set<std::string>& optional) {
  if (!j.is_object()) throw ParseError(where + ": expected an object");
  for (const auto& key : required)
    if (!j.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
  for (const auto& [key, value] : j.items())
    if (!required.count(key) && !optional.count(key)) throw ParseError(where + ": unexpected field '" + key + "'");
}

double number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  throw ParseError(where + ": expected a number");
}

long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<long>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  return j;
}

Vector vector_field(const json& j, const std::string& where, Eigen::Index n) {
  array(j, where);
  if (static_cast<Eigen::Index>(j.size()) != n)
    throw ParseError(where + ": expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = number(j[i], where + "[" + std::to_string(i) + "]");
  return v;
}

SetDescriptor<double> parse_set(const json& j, Eigen::Index n) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw ParseError("set: missing field 'type'");
  const auto type = j["type"].get<std::string>();
  if (type == "zero") {
    expect_object(j, "set", {"type"}, {});
    return ZeroMap{};
  }
  if (type == "orthant") {
    expect_object(j, "set", {"type"}, {});
    return Orthant{n};
  }
  if (type == "box") {
    expect_object(j, "set", {"type", "lower", "upper"}, {});
    return Box<double>{vector_field(j["lower"], "set.lower", n), vector_field(j["upper"], "set.upper", n)};
  }
  if (type == "polyhedron") {
    expect_object(j, "set", {"type", "A", "b"}, {});
    const auto& rows = array(j["A"], "set.A");
    const auto m = static_cast<Eigen::Index>(rows.size());
    Polyhedron<double> poly{Matrix(m, n), vector_field(j["b"], "set.b", m)};
    for (Eigen::Index i = 0; i < m; ++i)
      poly.A.row(i) = vector_field(rows[i], "set.A[" + std::to_string(i) + "]", n).transpose();
    return poly;
  }
  throw ParseError("set.type: unknown set type '" + type + "'");
}

MajorantSpec<double> parse_extremal(const json& j) {
  if (!j.is_object() || !j.contains("form") || !j["form"].is_string())
    throw ParseError("extremal: missing field 'form'");
  const auto form = j["form"].get<std::string>();
  if (form == "hoelder") {
    expect_object(j, "extremal", {"form", "K", "p"}, {});
    return MajorantSpec<double>::hoelder(1.0, number(j["K"], "extremal.K"), number(j["p"], "extremal.p"));
  }
  if (form == "smale") {
    expect_object(j, "extremal", {"form", "gamma"}, {});
    return MajorantSpec<double>::smale(1.0, number(j["gamma"], "extremal.gamma"));
  }
  throw ParseError("extremal.form: unknown majorant form '" + form + "'");
}

std::string residual_message(double residual) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "solution residual %.1e > 1e-10", residual);
  return buf;
}

ordered number_json(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

ordered vector_json(const Vector& v) {
  ordered out = ordered::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number_json(v(i)));
  return out;
}

}  // namespace

ProblemInstance<double> parse_problem_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!j.is_object()) throw ParseError("problem: expected an object");
  if (j.contains("name") && !j["name"].is_string()) throw ParseError("name: expected a string");

  if (j.contains("extremal")) {
    expect_object(j, "problem", {"name", "extremal"}, {});
    auto p = extremal_problem(parse_extremal(j["extremal"]));
    p.name = j["name"].get<std::string>();
    return p;
  }

  expect_object(j, "problem", {"name", "n", "poly", "set"}, {"solution", "kappa"});
  const long n = integer(j["n"], "n");
  if (n < 1) throw ParseError("n: must be positive");

  std::vector<Term<double>> terms;
  const auto& poly = array(j["poly"], "poly");
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const std::string where = "poly[" + std::to_string(k) + "]";
    expect_object(poly[k], where, {"component", "exponents", "coefficient"}, {});
    Term<double> t;
    t.component = integer(poly[k]["component"], where + ".component");
    if (t.component < 0 || t.component >= n) throw ParseError(where + ".component: out of range");
    const auto& exps = array(poly[k]["exponents"], where + ".exponents");
    if (static_cast<long>(exps.size()) != n) throw ParseError(where + ".exponents: expected n entries");
    for (std::size_t i = 0; i < exps.size(); ++i) {
      const long e = integer(exps[i], where + ".exponents[" + std::to_string(i) + "]");
      if (e < 0) throw ParseError(where + ".exponents: negative exponent");
      t.exponents.push_back(static_cast<int>(e));
    }
    t.coefficient = number(poly[k]["coefficient"], where + ".coefficient");
    if (!std::isfinite(t.coefficient)) throw ParseError(where + ".coefficient: must be finite");
    terms.push_back(std::move(t));
  }

  auto set = parse_set(j["set"], n);
  std::optional<Vector> solution;
  if (j.contains("solution")) solution = vector_field(j["solution"], "solution", n);
  std::optional<double> kappa;
  if (j.contains("kappa")) {
    const double k = number(j["kappa"], "kappa");
    if (!(k > 0)) throw ParseError("kappa: must be positive");
    if (std::isfinite(k)) kappa = k;
  }

  auto problem = make_polynomial_problem<double>(j["name"].get<std::string>(),
                                                 Polynomial<double>(n, std::move(terms)), std::move(set),
                                                 std::move(solution), kappa);
  if (problem.solution) {
    const double residual = natural_residual(problem, *problem.solution);
    if (!(residual <= 1e-10)) throw ValidationError(residual_message(residual));
  }
  return problem;
}

ProblemInstance<double> parse_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open problem file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_problem_text(buffer.str());
}

std::string serialize_problem(const ProblemInstance<double>& problem) {
  ordered j;
  j["name"] = problem.name;
  if (problem.extremal_of) {
    const auto& spec = *problem.extremal_of;
    ordered e;
    if (auto* h = spec.as<HoelderMajorant<double>>()) {
      e["form"] = "hoelder";
      e["K"] = h->K;
      e["p"] = h->p;
    } else if (auto* s = spec.as<SmaleMajorant<double>>()) {
      e["form"] = "smale";
      e["gamma"] = s->gamma;
    } else {
      throw UnsupportedError("custom majorants have no file form");
    }
    j["extremal"] = e;
    return j.dump(2) + "\n";
  }
  if (!problem.poly) throw UnsupportedError("only polynomial problems can be serialized");

  j["n"] = problem.n;
  ordered terms = ordered::array();
  for (const auto& t : problem.poly->terms()) {
    ordered term;
    term["component"] = t.component;
    term["exponents"] = t.exponents;
    term["coefficient"] = t.coefficient;
    terms.push_back(term);
  }
  j["poly"] = terms;

  ordered set;
  set["type"] = set_name(problem.set);
  if (auto* box = std::get_if<Box<double>>(&problem.set)) {
    set["lower"] = vector_json(box->lower);
    set["upper"] = vector_json(box->upper);
  } else if (auto* poly = std::get_if<Polyhedron<double>>(&problem.set)) {
    ordered rows = ordered::array();
    for (Eigen::Index i = 0; i < poly->A.rows(); ++i) rows.push_back(vector_json(poly->A.row(i).transpose()));
    set["A"] = rows;
    set["b"] = vector_json(poly->b);
  }
  j["set"] = set;
  if (problem.solution) j["solution"] = vector_json(*problem.solution);
  j["kappa"] = number_json(problem.kappa.value_or(kInf));
  return j.dump(2) + "\n";
}

}  // namespace geqn
