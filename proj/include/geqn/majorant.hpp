#pragma once

// Scalar majorant functions psi on [0, R): evaluation, the scalar Newton map,
// the majorizing sequence, and the radii nu / rho / sigma / r.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "geqn/errors.hpp"
#include "geqn/types.hpp"

namespace geqn {

template <typename Scalar>
struct PsiValue {
  Scalar value;
  Scalar slope;
  Scalar curvature;
};

/// psi(t) = K t^{p+1} / (p+1) - t. K already carries the modulus lambda.
template <typename Scalar>
struct HoelderMajorant {
  Scalar K;
  Scalar p;
  std::optional<Scalar> R;  // nullopt: +infinity
};

/// psi(t) = t / (1 - gamma t) - 2t on [0, 1/gamma).
template <typename Scalar>
struct SmaleMajorant {
  Scalar gamma;
};

template <typename Scalar>
struct CustomMajorant {
  std::function<PsiValue<Scalar>(const Scalar&)> psi;
  std::optional<Scalar> R;
  std::string label = "custom";
};

template <typename Scalar>
class MajorantSpec {
 public:
  using Form = std::variant<HoelderMajorant<Scalar>, SmaleMajorant<Scalar>, CustomMajorant<Scalar>>;

  static MajorantSpec hoelder(Scalar lambda, Scalar K, Scalar p,
                              std::optional<Scalar> R = std::nullopt) {
    if (!(Scalar(0) < K)) throw PreconditionError("Hoelder majorant needs K > 0");
    if (!(Scalar(0) < p) || Scalar(1) < p) throw PreconditionError("Hoelder majorant needs p in (0, 1]");
    return MajorantSpec(lambda, HoelderMajorant<Scalar>{K, p, R});
  }

  static MajorantSpec smale(Scalar lambda, Scalar gamma) {
    if (!(Scalar(0) < gamma)) throw PreconditionError("Smale majorant needs gamma > 0");
    return MajorantSpec(lambda, SmaleMajorant<Scalar>{gamma});
  }

  static MajorantSpec custom(Scalar lambda, std::function<PsiValue<Scalar>(const Scalar&)> psi,
                             std::optional<Scalar> R, std::string label = "custom") {
    if (!psi) throw PreconditionError("custom majorant needs an evaluator");
    return MajorantSpec(lambda, CustomMajorant<Scalar>{std::move(psi), R, std::move(label)});
  }

  const Scalar& lambda() const { return lambda_; }
  const Form& form() const { return form_; }

  template <typename F>
  const F* as() const {
    return std::get_if<F>(&form_);
  }

  /// Right end R of the domain [0, R); nullopt when unbounded.
  std::optional<Scalar> domain_radius() const {
    if (auto* h = as<HoelderMajorant<Scalar>>()) return h->R;
    if (auto* s = as<SmaleMajorant<Scalar>>()) return Scalar(1) / s->gamma;
    return as<CustomMajorant<Scalar>>()->R;
  }

  MajorantSpec with_lambda(Scalar lambda) const { return MajorantSpec(lambda, form_); }

 private:
  MajorantSpec(Scalar lambda, Form form) : lambda_(lambda), form_(std::move(form)) {
    if (!(Scalar(0) < lambda_)) throw PreconditionError("majorant modulus lambda must be positive");
    if (auto R = domain_radius(); R && !(Scalar(0) < *R))
      throw PreconditionError("majorant domain radius R must be positive");
  }

  Scalar lambda_;
  Form form_;
};

template <typename Scalar>
struct RadiusReport {
  Scalar nu;
  Scalar rho;
  Scalar sigma;
  Scalar r;
  std::optional<Scalar> kappa;  // nullopt: +infinity
};

namespace detail {

template <typename Scalar>
Scalar real_pow(const Scalar& base, const Scalar& exponent) {
  if (exponent == Scalar(0)) return Scalar(1);
  if (exponent == Scalar(1)) return base;
  if (exponent == Scalar(2)) return base * base;
  if constexpr (is_float_v<Scalar>) {
    using std::pow;
    return pow(base, exponent);
  } else {
    throw UnsupportedError("non-integral exponent needs a floating-point scalar");
  }
}

template <typename Scalar>
Scalar real_sqrt(const Scalar& x) {
  if constexpr (is_float_v<Scalar>) {
    using std::sqrt;
    return sqrt(x);
  } else {
    (void)x;
    throw UnsupportedError("square root needs a floating-point scalar");
  }
}

template <typename Scalar>
const Scalar& min_of(const Scalar& a, const Scalar& b) {
  return b < a ? b : a;
}

template <typename Scalar>
Scalar min_with(const Scalar& a, const std::optional<Scalar>& b) {
  return b ? min_of(a, *b) : a;
}

template <typename Scalar>
std::string show(const Scalar& t) {
  std::ostringstream os;
  os.precision(17);
  os << to_double(t);
  return os.str();
}

/// Bisection for a sign change of `fn` on [lo, hi]; absolute tolerance on t.
template <typename Scalar, typename Fn>
Scalar bisect(Fn&& fn, Scalar lo, Scalar hi, const Scalar& tol) {
  const bool lo_positive = Scalar(0) < fn(lo);
  while (tol < hi - lo) {
    Scalar mid = (lo + hi) / Scalar(2);
    if ((Scalar(0) < fn(mid)) == lo_positive)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / Scalar(2);
}

}  // namespace detail

template <typename Scalar>
bool in_domain(const MajorantSpec<Scalar>& spec, const Scalar& t) {
  if (t < Scalar(0)) return false;
  auto R = spec.domain_radius();
  return !R || t < *R;
}

template <typename Scalar>
PsiValue<Scalar> eval_psi(const MajorantSpec<Scalar>& spec, const Scalar& t) {
  if (!in_domain(spec, t))
    throw DomainError("psi evaluated outside [0, R) at t = " + detail::show(t));

  if (auto* h = spec.template as<HoelderMajorant<Scalar>>()) {
    const Scalar tp = detail::real_pow(t, h->p);
    const Scalar value = h->K * t * tp / (h->p + Scalar(1)) - t;
    const Scalar slope = h->K * tp - Scalar(1);
    Scalar curvature;
    if (h->p == Scalar(1)) {
      curvature = h->K;
    } else if (t == Scalar(0)) {
      if constexpr (detail::is_float_v<Scalar>)
        curvature = std::numeric_limits<Scalar>::infinity();
      else
        throw DomainError("psi'' is unbounded at 0 for p < 1");
    } else {
      curvature = h->K * h->p * detail::real_pow(t, h->p - Scalar(1));
    }
    return {value, slope, curvature};
  }
  if (auto* s = spec.template as<SmaleMajorant<Scalar>>()) {
    const Scalar d = Scalar(1) - s->gamma * t;
    return {t / d - Scalar(2) * t, Scalar(1) / (d * d) - Scalar(2),
            Scalar(2) * s->gamma / (d * d * d)};
  }
  return spec.template as<CustomMajorant<Scalar>>()->psi(t);
}

/// n_psi(t) = t - psi(t) / psi'(t), defined where psi'(t) < 0.
template <typename Scalar>
Scalar newton_map(const MajorantSpec<Scalar>& spec, const Scalar& t) {
  const auto v = eval_psi(spec, t);
  if (!(v.slope < Scalar(0)))
    throw DomainError("newton_map needs psi'(t) < 0; t = " + detail::show(t) + " is beyond nu");
  return t - v.value / v.slope;
}

/// e_psi(t, u) = psi(u) - [psi(t) + psi'(t)(u - t)].
template <typename Scalar>
Scalar e_psi(const MajorantSpec<Scalar>& spec, const Scalar& t, const Scalar& u) {
  const auto at_t = eval_psi(spec, t);
  const auto at_u = eval_psi(spec, u);
  return at_u.value - (at_t.value + at_t.slope * (u - t));
}

/// Wraps any spec as a Custom one so radii go through the bisection path.
template <typename Scalar>
MajorantSpec<Scalar> as_custom(const MajorantSpec<Scalar>& spec) {
  auto evaluator = [spec](const Scalar& t) { return eval_psi(spec, t); };
  return MajorantSpec<Scalar>::custom(spec.lambda(), evaluator, spec.domain_radius(), "wrapped");
}

namespace detail {

template <typename Scalar>
RadiusReport<Scalar> bisection_radii(const MajorantSpec<Scalar>& spec,
                                     const std::optional<Scalar>& kappa) {
  const Scalar tol(1e-12);
  const Scalar lo(1e-12);
  const auto R = spec.domain_radius();
  auto slope = [&](const Scalar& t) { return eval_psi(spec, t).slope; };
  auto value = [&](const Scalar& t) { return eval_psi(spec, t).value; };

  if (!(slope(lo) < Scalar(0))) throw RadiusUndetermined("nu");

  // nu: boundary psi'(t) = 0.
  Scalar nu;
  if (R) {
    const Scalar hi = *R - tol;
    if (!(lo < hi)) throw RadiusUndetermined("nu");
    nu = slope(hi) < Scalar(0) ? *R : bisect(slope, lo, hi, tol);
  } else {
    Scalar hi(1);
    while (slope(hi) < Scalar(0)) {
      hi *= Scalar(2);
      if (Scalar(1e15) < hi) throw RadiusUndetermined("nu");
    }
    nu = bisect(slope, lo, hi, tol);
  }

  // rho: boundary psi(t) = 2 t psi'(t) inside (0, nu).
  auto rho_gap = [&](const Scalar& t) {
    const auto v = eval_psi(spec, t);
    return v.value - Scalar(2) * t * v.slope;
  };
  const Scalar rho_hi = nu - tol;
  if (!(lo < rho_hi) || !(Scalar(0) < rho_gap(lo))) throw RadiusUndetermined("rho");
  const Scalar rho = Scalar(0) < rho_gap(rho_hi) ? nu : bisect(rho_gap, lo, rho_hi, tol);

  // sigma: first positive zero of psi below min(kappa, R).
  std::optional<Scalar> cap = kappa;
  if (R) cap = cap ? min_of(*cap, *R) : *R;
  if (!(value(lo) < Scalar(0))) throw RadiusUndetermined("sigma");
  Scalar sigma;
  if (cap) {
    const Scalar hi = *cap - tol;
    if (!(lo < hi)) throw RadiusUndetermined("sigma");
    sigma = value(hi) < Scalar(0) ? *cap : bisect(value, lo, hi, tol);
  } else {
    Scalar hi = Scalar(1) < nu ? nu : Scalar(1);
    while (value(hi) < Scalar(0)) {
      hi *= Scalar(2);
      if (Scalar(1e15) < hi) throw RadiusUndetermined("sigma");
    }
    sigma = bisect(value, lo, hi, tol);
  }

  return {nu, rho, sigma, min_with(rho, kappa), kappa};
}

}  // namespace detail

/// Radii nu, rho, sigma and r = min(kappa, rho). Closed forms for the Hoelder
/// and Smale majorants, bisection (absolute tolerance 1e-12) otherwise.
template <typename Scalar>
RadiusReport<Scalar> radii(const MajorantSpec<Scalar>& spec, const std::optional<Scalar>& kappa) {
  if (kappa && !(Scalar(0) < *kappa)) throw PreconditionError("kappa must be positive");

  if (auto* h = spec.template as<HoelderMajorant<Scalar>>()) {
    const Scalar inv_p = Scalar(1) / h->p;
    Scalar nu = detail::real_pow(Scalar(1) / h->K, inv_p);
    Scalar rho = detail::real_pow((h->p + Scalar(1)) / ((Scalar(2) * h->p + Scalar(1)) * h->K), inv_p);
    Scalar sigma = detail::real_pow((h->p + Scalar(1)) / h->K, inv_p);
    nu = detail::min_with(nu, h->R);
    rho = detail::min_of(rho, nu);
    sigma = detail::min_with(detail::min_with(sigma, h->R), kappa);
    return {nu, rho, sigma, detail::min_with(rho, kappa), kappa};
  }
  if (auto* s = spec.template as<SmaleMajorant<Scalar>>()) {
    const Scalar sqrt2 = detail::real_sqrt(Scalar(2));
    const Scalar nu = (sqrt2 - Scalar(1)) / (sqrt2 * s->gamma);
    const Scalar rho = (Scalar(5) - detail::real_sqrt(Scalar(17))) / (Scalar(4) * s->gamma);
    const Scalar sigma = detail::min_with(Scalar(1) / (Scalar(2) * s->gamma), kappa);
    return {nu, rho, sigma, detail::min_with(rho, kappa), kappa};
  }
  return detail::bisection_radii(spec, kappa);
}

/// t_0 = t0, t_{k+1} = |n_psi(t_k)|; stops after k_max steps or once t_k < tol.
template <typename Scalar>
std::vector<Scalar> majorant_sequence(const MajorantSpec<Scalar>& spec, const Scalar& t0, int k_max,
                                      const Scalar& tol) {
  const Scalar rho = radii(spec, std::optional<Scalar>{}).rho;
  if (!(Scalar(0) < t0) || !(t0 < rho))
    throw PreconditionError("majorant_sequence needs 0 < t0 < rho = " + detail::show(rho) +
                            "; got t0 = " + detail::show(t0));
  std::vector<Scalar> seq{t0};
  for (int k = 0; k < k_max && !(seq.back() < tol); ++k) {
    const Scalar next = detail::abs_value(newton_map(spec, seq.back()));
    seq.push_back(next);
    if (next == Scalar(0)) break;
  }
  return seq;
}

template <typename Scalar>
struct AxiomCheck {
  bool pass = true;
  std::optional<Scalar> violating_t;
  std::string detail;
};

template <typename Scalar>
struct AxiomReport {
  AxiomCheck<Scalar> h1;  // psi(0) = 0, psi'(0) = -1
  AxiomCheck<Scalar> h2;  // psi' strictly increasing
  AxiomCheck<Scalar> h3;  // [psi/psi' - t] / t^{p+1} strictly increasing
  AxiomCheck<Scalar> smooth;
  bool pass() const { return h1.pass && h2.pass && h3.pass && smooth.pass; }
};

/// 512-point grid on [0, upper): t = 0, a log-spaced block near zero, then a
/// uniform block up to 0.999 upper.
template <typename Scalar>
std::vector<Scalar> default_grid(const Scalar& upper, int count = 512) {
  static_assert(detail::is_float_v<Scalar>, "grids need a floating-point scalar");
  const int log_points = count * 2 / 5;
  const int lin_points = count - 1 - log_points;
  std::vector<Scalar> grid{Scalar(0)};
  const Scalar a = std::log(Scalar(1e-4)), b = std::log(Scalar(0.05));
  for (int i = 0; i < log_points; ++i)
    grid.push_back(upper * std::exp(a + (b - a) * Scalar(i) / Scalar(log_points)));
  for (int i = 0; i < lin_points; ++i)
    grid.push_back(upper * (Scalar(0.05) + Scalar(0.949) * Scalar(i) / Scalar(lin_points - 1)));
  return grid;
}

/// Checks h1, h2, h3 (for exponent p) and derivative consistency on `grid`.
/// Failures are reported, never thrown; a malformed grid is a precondition error.
template <typename Scalar>
AxiomReport<Scalar> verify_majorant_axioms(const MajorantSpec<Scalar>& spec,
                                           const std::vector<Scalar>& grid, const Scalar& p) {
  if (grid.size() < 16) throw PreconditionError("axiom grid needs at least 16 points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw PreconditionError("axiom grid must be strictly increasing");

  AxiomReport<Scalar> report;
  auto fail = [](AxiomCheck<Scalar>& check, const Scalar& t, std::string why) {
    if (!check.pass) return;
    check.pass = false;
    check.violating_t = t;
    check.detail = std::move(why) + " at t = " + detail::show(t);
  };

  std::vector<std::optional<PsiValue<Scalar>>> values;
  for (const Scalar& t : grid) {
    try {
      values.push_back(eval_psi(spec, t));
    } catch (const DomainError&) {
      values.push_back(std::nullopt);
    }
  }

  try {
    const auto at0 = eval_psi(spec, Scalar(0));
    const Scalar tol(1e-12);
    if (tol < detail::abs_value(at0.value)) fail(report.h1, Scalar(0), "psi(0) != 0");
    if (tol < detail::abs_value(at0.slope + Scalar(1))) fail(report.h1, Scalar(0), "psi'(0) != -1");
  } catch (const DomainError&) {
    fail(report.h1, Scalar(0), "psi undefined");
  }

  std::optional<Scalar> prev_slope, prev_h3;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Scalar& t = grid[i];
    if (!values[i]) {
      fail(report.h2, t, "psi undefined");
      fail(report.h3, t, "psi undefined");
      continue;
    }
    const auto& v = *values[i];
    if (prev_slope && !(*prev_slope < v.slope)) fail(report.h2, t, "psi' not strictly increasing");
    prev_slope = v.slope;

    if (!(Scalar(0) < t)) continue;
    if (!(v.slope < Scalar(0))) {
      fail(report.h3, t, "psi'(t) >= 0 (t outside (0, nu))");
      continue;
    }
    const Scalar g = (v.value / v.slope - t) / detail::real_pow(t, p + Scalar(1));
    if (prev_h3 && !(*prev_h3 < g)) fail(report.h3, t, "[psi/psi' - t]/t^(p+1) not strictly increasing");
    prev_h3 = g;
  }

  if constexpr (detail::is_float_v<Scalar>) {
    // Central differences: psi -> psi' and psi' -> psi''.
    const Scalar h = Scalar(1e-4) * grid.back();
    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    for (const Scalar& t : grid) {
      if (t < Scalar(2) * h) continue;
      try {
        const auto lo = eval_psi(spec, t - h), mid = eval_psi(spec, t), hi = eval_psi(spec, t + h);
        const Scalar third = std::abs(hi.curvature - lo.curvature) / (Scalar(2) * h);
        const Scalar allowed = Scalar(10) * h * h * (Scalar(1) + third) +
                               Scalar(1e3) * eps * (Scalar(1) + std::abs(mid.value) + std::abs(mid.slope)) / h;
        const Scalar fd_slope = (hi.value - lo.value) / (Scalar(2) * h);
        const Scalar fd_curv = (hi.slope - lo.slope) / (Scalar(2) * h);
        if (allowed < std::abs(fd_slope - mid.slope)) fail(report.smooth, t, "psi' inconsistent with psi");
        if (allowed < std::abs(fd_curv - mid.curvature)) fail(report.smooth, t, "psi'' inconsistent with psi'");
      } catch (const DomainError&) {
        continue;  // stencil leaves [0, R)
      }
    }
  }
  return report;
}

/// Exponent p for which h3 is expected: the Hoelder exponent, 1 for Smale,
/// and for custom specs 1 when psi' is convex on the default grid, else 0.
template <typename Scalar>
Scalar default_rate_exponent(const MajorantSpec<Scalar>& spec) {
  if (auto* h = spec.template as<HoelderMajorant<Scalar>>()) return h->p;
  if (spec.template as<SmaleMajorant<Scalar>>()) return Scalar(1);
  const Scalar nu = radii(spec, std::optional<Scalar>{}).nu;
  std::optional<Scalar> prev;
  for (const Scalar& t : default_grid(nu)) {
    if (!(Scalar(0) < t)) continue;
    const Scalar c = eval_psi(spec, t).curvature;
    if (prev && c < *prev) return Scalar(0);
    prev = c;
  }
  return Scalar(1);
}

template <typename Scalar>
struct RateEnvelope {
  std::vector<Scalar> sequence;
  std::vector<Scalar> ratios;  // t_{k+1} / t_k^{p+1}
  Scalar quadratic_bound;      // psi''(t0) / (2 |psi'(t0)|)
};

/// Ratio diagnostics for the majorizing sequence. h3 is verified first on the
/// default grid over (0, nu).
template <typename Scalar>
RateEnvelope<Scalar> rate_envelope(const MajorantSpec<Scalar>& spec, const Scalar& t0, const Scalar& p,
                                   int k_max = 16, const Scalar& tol = Scalar(1e-12)) {
  const Scalar nu = radii(spec, std::optional<Scalar>{}).nu;
  const auto axioms = verify_majorant_axioms(spec, default_grid(nu), p);
  if (!axioms.h3.pass) throw PreconditionError("h3 fails: " + axioms.h3.detail);

  RateEnvelope<Scalar> env;
  env.sequence = majorant_sequence(spec, t0, k_max, tol);
  for (std::size_t k = 0; k + 1 < env.sequence.size(); ++k) {
    if (!(Scalar(0) < env.sequence[k + 1])) break;
    env.ratios.push_back(env.sequence[k + 1] / detail::real_pow(env.sequence[k], p + Scalar(1)));
  }
  const auto v = eval_psi(spec, t0);
  env.quadratic_bound = v.curvature / (Scalar(2) * detail::abs_value(v.slope));
  return env;
}

template <typename Scalar>
std::string describe(const MajorantSpec<Scalar>& spec) {
  std::ostringstream os;
  os.precision(17);
  if (auto* h = spec.template as<HoelderMajorant<Scalar>>())
    os << "hoelder(K=" << to_double(h->K) << ",p=" << to_double(h->p) << ")";
  else if (auto* s = spec.template as<SmaleMajorant<Scalar>>())
    os << "smale(gamma=" << to_double(s->gamma) << ")";
  else
    os << spec.template as<CustomMajorant<Scalar>>()->label;
  os << ",lambda=" << to_double(spec.lambda());
  return os.str();
}

}  // namespace geqn
