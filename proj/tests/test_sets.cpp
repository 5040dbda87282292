#include <doctest.h>

#include "geqn/sampling.hpp"
#include "geqn/sets.hpp"

using namespace geqn;

namespace {
Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}
}  // namespace

TEST_CASE("projection onto simple sets") {
  const SetDescriptor<double> box = Box<double>{vec({0.0}), vec({1.0})};
  CHECK(project(box, vec({1.7}))(0) == 1.0);
  CHECK(project(box, vec({-0.2}))(0) == 0.0);
  CHECK(project(box, vec({0.3}))(0) == 0.3);

  const SetDescriptor<double> orthant = Orthant{2};
  CHECK(project(orthant, vec({-1.0, 2.0})) == vec({0.0, 2.0}));

  const SetDescriptor<double> zero = ZeroMap{};
  CHECK(project(zero, vec({-3.0, 5.0})) == vec({-3.0, 5.0}));
}

TEST_CASE("projection onto a half-plane") {
  const SetDescriptor<double> half = Polyhedron<double>{Matrix::Ones(1, 2), vec({1.0})};
  const Vector p = project(half, vec({1.0, 1.0}));
  CHECK(p(0) == doctest::Approx(0.5));
  CHECK(p(1) == doctest::Approx(0.5));
  CHECK(project(half, vec({0.2, 0.1})) == vec({0.2, 0.1}));
}

TEST_CASE("polyhedron projection satisfies the variational inequality") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Polyhedron<double> poly{Matrix(4, 2), Vector(4)};
    for (Eigen::Index i = 0; i < 4; ++i) {
      poly.A.row(i) = rng.unit_vector(2).transpose();
      poly.b(i) = rng.uniform(0.2, 1.0);
    }
    const SetDescriptor<double> set = poly;
    const Vector v = 3.0 * rng.unit_vector(2);
    const Vector p = project(set, v);
    CHECK(contains(set, p, 1e-9));
    for (int k = 0; k < 100; ++k) {
      const Vector c = rng.in_ball(Vector::Zero(2), 3.0);
      if (!contains(set, c, 0.0)) continue;
      CHECK((v - p).dot(c - p) <= 1e-9);
    }
  }
}

TEST_CASE("membership") {
  const SetDescriptor<double> box = Box<double>{vec({0.0, -1.0}), vec({1.0, 1.0})};
  CHECK(contains(box, vec({0.5, 0.0}), 0.0));
  CHECK_FALSE(contains(box, vec({1.5, 0.0}), 1e-9));
  CHECK(contains(SetDescriptor<double>{Orthant{1}}, vec({0.0}), 0.0));
  CHECK_FALSE(contains(SetDescriptor<double>{Orthant{1}}, vec({-1e-3}), 1e-9));
}

TEST_CASE("set validation") {
  CHECK_THROWS_AS(validate_set(SetDescriptor<double>{Orthant{2}}, 3), ValidationError);
  CHECK_THROWS_AS(validate_set(SetDescriptor<double>{Box<double>{vec({1.0}), vec({0.0})}}, 1), ValidationError);
  CHECK_THROWS_AS(validate_set(SetDescriptor<double>{Polyhedron<double>{Matrix::Ones(2, 2), Vector::Ones(3)}}, 2),
                  ValidationError);
  CHECK_THROWS_AS(project(SetDescriptor<double>{Polyhedron<double>{Matrix::Ones(13, 1), Vector::Ones(13)}}, vec({2.0})),
                  UnsupportedError);
  CHECK_NOTHROW(validate_set(SetDescriptor<double>{ZeroMap{}}, 4));
}

TEST_CASE("set names and polyhedral form") {
  CHECK(set_name(SetDescriptor<double>{ZeroMap{}}) == "zero");
  CHECK(set_name(SetDescriptor<double>{Orthant{1}}) == "orthant");
  const auto poly = as_polyhedron(SetDescriptor<double>{Box<double>{vec({0.0}), vec({2.0})}}, 1);
  CHECK(poly.A.rows() == 2);
  CHECK(contains(SetDescriptor<double>{poly}, vec({1.0}), 0.0));
  CHECK_FALSE(contains(SetDescriptor<double>{poly}, vec({2.5}), 0.0));
}
