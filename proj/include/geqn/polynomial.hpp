#pragma once

// Vector-valued polynomials f : R^n -> R^n stored as exponent-vector terms.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "geqn/errors.hpp"
#include "geqn/types.hpp"

namespace geqn {

template <typename Scalar>
struct Term {
  Eigen::Index component = 0;
  std::vector<int> exponents;
  Scalar coefficient{};
};

template <typename Scalar>
class Polynomial {
 public:
  Polynomial() = default;

  Polynomial(Eigen::Index n, std::vector<Term<Scalar>> terms) : n_(n), terms_(std::move(terms)) {
    if (n_ < 1) throw ValidationError("polynomial dimension must be positive");
    for (std::size_t k = 0; k < terms_.size(); ++k) {
      const auto& t = terms_[k];
      const std::string where = "poly term " + std::to_string(k);
      if (t.component < 0 || t.component >= n_) throw ValidationError(where + ": component out of range");
      if (static_cast<Eigen::Index>(t.exponents.size()) != n_)
        throw ValidationError(where + ": exponents must have length n");
      for (int e : t.exponents)
        if (e < 0) throw ValidationError(where + ": negative exponent");
    }
  }

  Eigen::Index dim() const { return n_; }
  const std::vector<Term<Scalar>>& terms() const { return terms_; }

  int degree() const {
    int d = 0;
    for (const auto& t : terms_) {
      if (t.coefficient == Scalar(0)) continue;
      int s = 0;
      for (int e : t.exponents) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  VectorX<Scalar> operator()(const VectorX<Scalar>& x) const {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n_);
    for (const auto& t : terms_) out(t.component) += t.coefficient * monomial(t.exponents, x, -1, -1);
    return out;
  }

  MatrixX<Scalar> jacobian(const VectorX<Scalar>& x) const {
    MatrixX<Scalar> J = MatrixX<Scalar>::Zero(n_, n_);
    for (const auto& t : terms_)
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (t.exponents[j] == 0) continue;
        J(t.component, j) += t.coefficient * Scalar(t.exponents[j]) * monomial(t.exponents, x, j, -1);
      }
    return J;
  }

  /// Second derivatives, one symmetric n x n matrix per component.
  std::vector<MatrixX<Scalar>> hessians(const VectorX<Scalar>& x) const {
    std::vector<MatrixX<Scalar>> H(n_, MatrixX<Scalar>::Zero(n_, n_));
    for (const auto& t : terms_)
      for (Eigen::Index j = 0; j < n_; ++j)
        for (Eigen::Index l = 0; l < n_; ++l) {
          const int ej = t.exponents[j];
          const int factor = j == l ? ej * (ej - 1) : ej * t.exponents[l];
          if (factor == 0) continue;
          H[t.component](j, l) += t.coefficient * Scalar(factor) * monomial(t.exponents, x, j, l);
        }
    return H;
  }

  /// k-th derivative applied to (v, ..., v): k! times the s^k coefficient of
  /// f(x + s v).
  VectorX<Scalar> directional_derivative(int k, const VectorX<Scalar>& x, const VectorX<Scalar>& v) const {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(n_);
    for (const auto& t : terms_) {
      std::vector<Scalar> series{t.coefficient};  // coefficients in s
      for (Eigen::Index j = 0; j < n_; ++j)
        for (int e = 0; e < t.exponents[j]; ++e) {
          std::vector<Scalar> next(series.size() + 1, Scalar(0));
          for (std::size_t a = 0; a < series.size(); ++a) {
            next[a] += series[a] * x(j);
            next[a + 1] += series[a] * v(j);
          }
          series.swap(next);
        }
      if (k < static_cast<int>(series.size())) out(t.component) += series[k];
    }
    Scalar factorial(1);
    for (int i = 2; i <= k; ++i) factorial *= Scalar(i);
    return out * factorial;
  }

  /// The same map expressed in the variable y = x - shift.
  Polynomial shifted(const VectorX<Scalar>& shift) const {
    std::map<std::pair<Eigen::Index, std::vector<int>>, Scalar> acc;
    for (const auto& t : terms_) {
      std::vector<std::pair<std::vector<int>, Scalar>> parts{{std::vector<int>(n_, 0), t.coefficient}};
      for (Eigen::Index j = 0; j < n_; ++j) {
        std::vector<std::pair<std::vector<int>, Scalar>> next;
        const int e = t.exponents[j];
        for (const auto& [exps, c] : parts) {
          Scalar binom(1);
          for (int a = 0; a <= e; ++a) {
            // (y + s)^e = sum_a C(e,a) y^a s^{e-a}
            Scalar power(1);
            for (int i = 0; i < e - a; ++i) power *= shift(j);
            auto ex = exps;
            ex[j] = a;
            next.emplace_back(ex, c * binom * power);
            binom = binom * Scalar(e - a) / Scalar(a + 1);
          }
        }
        parts.swap(next);
      }
      for (auto& [exps, c] : parts) {
        auto key = std::make_pair(t.component, exps);
        auto it = acc.find(key);
        if (it == acc.end()) acc.emplace(key, c);
        else it->second += c;
      }
    }
    std::vector<Term<Scalar>> terms;
    for (auto& [key, c] : acc)
      if (c != Scalar(0)) terms.push_back(Term<Scalar>{key.first, key.second, c});
    return Polynomial(n_, std::move(terms));
  }

 private:
  // Monomial with one power removed for each of skip1, skip2 (>= 0).
  static Scalar monomial(const std::vector<int>& exps, const VectorX<Scalar>& x, Eigen::Index skip1,
                         Eigen::Index skip2) {
    Scalar v(1);
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(exps.size()); ++j) {
      int e = exps[j] - (j == skip1) - (j == skip2);
      for (int i = 0; i < e; ++i) v *= x(j);
    }
    return v;
  }

  Eigen::Index n_ = 0;
  std::vector<Term<Scalar>> terms_;
};

}  // namespace geqn
