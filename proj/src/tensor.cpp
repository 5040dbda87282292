#include "geqn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "geqn/sampling.hpp"

namespace geqn {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

namespace {

double golden_max(const std::function<double(double)>& phi, double a, double b) {
  const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv * (b - a), d = a + inv * (b - a);
  double fc = phi(c), fd = phi(d);
  while (b - a > 1e-12) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv * (b - a);
      fd = phi(d);
    }
  }
  return std::max({phi(a), phi(b), fc, fd});
}

double circle_sup(const std::function<Vector(const Vector&)>& g) {
  constexpr int kGrid = 720;
  const double h = std::numbers::pi / kGrid;
  auto phi = [&](double theta) {
    Vector v(2);
    v << std::cos(theta), std::sin(theta);
    return g(v).norm();
  };
  std::vector<double> values(kGrid);
  for (int i = 0; i < kGrid; ++i) values[i] = phi(i * h);
  double best = *std::max_element(values.begin(), values.end());
  for (int i = 0; i < kGrid; ++i) {
    const double left = values[(i + kGrid - 1) % kGrid], right = values[(i + 1) % kGrid];
    if (values[i] >= left && values[i] >= right) best = std::max(best, golden_max(phi, (i - 1) * h, (i + 1) * h));
  }
  return best;
}

std::vector<Vector> sphere_starts(Eigen::Index n) {
  std::vector<Vector> starts;
  if (n == 3) {
    constexpr int kPoints = 4000;
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kPoints; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / kPoints;
      const double r = std::sqrt(1.0 - z * z);
      Vector v(3);
      v << r * std::cos(golden_angle * i), r * std::sin(golden_angle * i), z;
      starts.push_back(v);
    }
  } else {
    Rng rng(kDefaultSeed);
    for (int i = 0; i < 2000; ++i) starts.push_back(rng.unit_vector(n));
    for (Eigen::Index i = 0; i < n; ++i) starts.push_back(Vector::Unit(n, i));
  }
  return starts;
}

double ascend(const std::function<Vector(const Vector&)>& g, Vector v) {
  auto phi = [&](const Vector& u) { return g(u).squaredNorm(); };
  double value = phi(v);
  double step = 1.0;
  const double h = 1e-6;
  for (int iter = 0; iter < 500; ++iter) {
    Vector grad(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      Vector a = v, b = v;
      a(i) += h;
      b(i) -= h;
      grad(i) = (phi(a) - phi(b)) / (2 * h);
    }
    grad -= grad.dot(v) * v;  // tangent component
    if (grad.norm() == 0.0) break;
    bool improved = false;
    while (step * grad.norm() > 1e-8) {
      Vector candidate = (v + step * grad).normalized();
      const double cv = phi(candidate);
      if (cv > value) {
        v = candidate;
        value = cv;
        improved = true;
        step *= 2;
        break;
      }
      step /= 2;
    }
    if (!improved) break;
  }
  return std::sqrt(value);
}

}  // namespace

double homogeneous_sup(Eigen::Index n, const std::function<Vector(const Vector&)>& g) {
  if (n == 1) return g(Vector::Ones(1)).norm();
  if (n == 2) return circle_sup(g);

  auto starts = sphere_starts(n);
  std::vector<std::pair<double, std::size_t>> ranked;
  for (std::size_t i = 0; i < starts.size(); ++i) ranked.emplace_back(g(starts[i]).norm(), i);
  const std::size_t keep = std::min<std::size_t>(8, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(keep), ranked.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });
  double best = ranked.front().first;
  for (std::size_t i = 0; i < keep; ++i) best = std::max(best, ascend(g, starts[ranked[i].second]));
  return best;
}

double bilinear_norm(const std::vector<Matrix>& hessians) {
  if (hessians.empty()) return 0.0;
  const Eigen::Index n = hessians.front().rows();
  if (std::all_of(hessians.begin(), hessians.end(), [](const Matrix& h) { return h.isZero(0.0); })) return 0.0;
  if (hessians.size() == 1) {
    // A single quadratic form: its sup on the sphere is the largest |eigenvalue|.
    const Matrix sym = 0.5 * (hessians.front() + hessians.front().transpose());
    return Eigen::SelfAdjointEigenSolver<Matrix>(sym, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  }
  return homogeneous_sup(n, [&](const Vector& v) {
    Vector out(static_cast<Eigen::Index>(hessians.size()));
    for (std::size_t i = 0; i < hessians.size(); ++i) out(static_cast<Eigen::Index>(i)) = v.dot(hessians[i] * v);
    return out;
  });
}

double multilinear_norm(const Polynomial<double>& poly, int order, const Vector& x) {
  return homogeneous_sup(poly.dim(), [&](const Vector& v) { return poly.directional_derivative(order, x, v); });
}

}  // namespace geqn
