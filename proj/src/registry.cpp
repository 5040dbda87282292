#include "geqn/registry.hpp"

#include <algorithm>

#include "geqn/errors.hpp"

namespace geqn {

namespace {

using Terms = std::vector<Term<double>>;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

ProblemInstance<double> poly_problem(std::string name, Eigen::Index n, Terms terms, SetDescriptor<double> set,
                                     Vector solution, std::optional<double> kappa) {
  return make_polynomial_problem<double>(std::move(name), Polynomial<double>(n, std::move(terms)), std::move(set),
                                         std::move(solution), kappa);
}

// x^2 - 1
Terms square_minus_one() { return {{0, {2}, 1.0}, {0, {0}, -1.0}}; }

}  // namespace

std::vector<ProblemInstance<double>> registry_problems() {
  std::vector<ProblemInstance<double>> out;
  out.push_back(poly_problem("sqrt1", 1, square_minus_one(), Orthant{1}, vec({1.0}), 10.0));
  out.push_back(poly_problem("sqrt1_eq", 1, square_minus_one(), ZeroMap{}, vec({1.0}), 10.0));
  // f(x) = A x + c with A = [2 1; 1 2], c = (-5, -6).
  out.push_back(poly_problem("affine_vi", 2,
                             {{0, {1, 0}, 2.0}, {0, {0, 1}, 1.0}, {0, {0, 0}, -5.0},
                              {1, {1, 0}, 1.0}, {1, {0, 1}, 2.0}, {1, {0, 0}, -6.0}},
                             Orthant{2}, vec({4.0 / 3.0, 7.0 / 3.0}), std::nullopt));
  // Strict complementarity at (1, 0): x1 > 0 = f1, x2 = 0 < f2 = 1.
  out.push_back(poly_problem("ncp2d", 2,
                             {{0, {2, 0}, 1.0}, {0, {0, 1}, 1.0}, {0, {0, 0}, -1.0},
                              {1, {1, 1}, 1.0}, {1, {0, 1}, 2.0}, {1, {0, 0}, 1.0}},
                             Orthant{2}, vec({1.0, 0.0}), std::nullopt));
  // x1 sits at its upper bound with f1 = -0.8; x2 is interior.
  out.push_back(poly_problem("box2d", 2,
                             {{0, {2, 0}, 1.0}, {0, {0, 1}, 0.5}, {0, {0, 0}, -2.0},
                              {1, {0, 1}, 1.0}, {1, {0, 0}, -0.5}, {1, {2, 0}, 0.1}},
                             Box<double>{vec({0.0, 0.0}), vec({1.0, 2.0})}, vec({1.0, 0.4}), std::nullopt));
  out.push_back(poly_problem("poly1d", 1, square_minus_one(),
                             Polyhedron<double>{Matrix((Matrix(2, 1) << 1.0, -1.0).finished()), vec({1.5, 0.0})},
                             vec({1.0}), std::nullopt));
  {
    auto p = extremal_problem(MajorantSpec<double>::hoelder(1.0, 1.0, 1.0));
    p.name = "extremal_holder";
    out.push_back(std::move(p));
  }
  // x^2 + x on the orthant: solution 0 with zero multiplier.
  out.push_back(poly_problem("degenerate_ncp", 1, {{0, {2}, 1.0}, {0, {1}, 1.0}}, Orthant{1}, vec({0.0}),
                             std::nullopt));
  out.push_back(poly_problem("cubic_smale", 1, {{0, {3}, 1.0}, {0, {0}, -1.0}}, ZeroMap{}, vec({1.0}),
                             std::nullopt));
  // x (x - 0.1) (x - 0.5): roots 0.1 and 0.5 next to the reference root 0.
  out.push_back(poly_problem("planted_roots", 1, {{0, {3}, 1.0}, {0, {2}, -0.6}, {0, {1}, 0.05}}, ZeroMap{},
                             vec({0.0}), std::nullopt));
  return out;
}

const ProblemInstance<double>& registry_problem(const std::string& name) {
  static const auto problems = registry_problems();
  auto it = std::find_if(problems.begin(), problems.end(), [&](const auto& p) { return p.name == name; });
  if (it == problems.end()) throw PreconditionError("unknown registry problem '" + name + "'");
  return *it;
}

std::vector<CertifiedPair> certified_pairs() {
  using S = MajorantSpec<double>;
  std::vector<CertifiedPair> out;
  auto add = [&](const char* problem, const char* label, S spec, Vector x0) {
    out.push_back(CertifiedPair{problem, label, std::move(spec), std::move(x0)});
  };
  add("sqrt1", "hoelder K=1", S::hoelder(0.5, 1.0, 1.0), vec({0.5}));
  add("sqrt1", "smale gamma=0.5", S::smale(0.5, 0.5), vec({0.6}));
  add("sqrt1_eq", "hoelder K=1", S::hoelder(0.5, 1.0, 1.0), vec({0.5}));
  add("sqrt1_eq", "smale gamma=0.5", S::smale(0.5, 0.5), vec({0.6}));
  add("affine_vi", "hoelder K=1", S::hoelder(1.0, 1.0, 1.0), vec({1.5, 2.5}));
  add("ncp2d", "hoelder K=1", S::hoelder(0.5, 1.0, 1.0), vec({1.2, 0.1}));
  add("box2d", "hoelder K=2.1", S::hoelder(1.0, 2.1, 1.0), vec({0.8, 0.6}));
  add("poly1d", "hoelder K=1", S::hoelder(0.5, 1.0, 1.0), vec({0.5}));
  add("extremal_holder", "hoelder K=1", S::hoelder(1.0, 1.0, 1.0), vec({0.5}));
  add("degenerate_ncp", "hoelder K=2", S::hoelder(1.0, 2.0, 1.0), vec({0.25}));
  add("cubic_smale", "smale gamma=1", S::smale(1.0 / 3.0, 1.0), vec({1.15}));
  return out;
}

std::vector<CertifiedPair> incompatible_pairs() {
  std::vector<CertifiedPair> out;
  out.push_back(CertifiedPair{"sqrt1", "hoelder K=0.5", MajorantSpec<double>::hoelder(0.5, 0.5, 1.0), vec({0.5})});
  return out;
}

}  // namespace geqn
