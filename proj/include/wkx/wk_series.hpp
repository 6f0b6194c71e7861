#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "wkx/potential.hpp"

namespace wkx::wk {

/// The hbar-ordered correction polynomials W_0..W_K for a fixed potential.
/// W_0 = 1; each W_k is a polynomial in (x, p, t) vanishing at t = 0 for k >= 1.
struct WKSeries {
  PotentialSpec potential;
  int order = 0;
  std::vector<MultiPoly> terms;  // terms[k] = W_k
};

namespace detail {

/// Cached building blocks of the evolution operator's right-hand side.
struct RhsOperators {
  const PotentialSpec& pot;
  MultiPoly t_poly;
  MultiPoly grad_sq;  // (grad V)^2

  explicit RhsOperators(const PotentialSpec& p)
      : pot(p),
        t_poly(MultiPoly::variable(p.space, p.space.t())),
        grad_sq(MultiPoly::zero(p.space)) {
    for (const auto& g : p.grad) grad_sq += g * g;
  }

  /// [lap - t (lap V) + t^2 (grad V)^2 - 2 t (grad V).grad] f
  MultiPoly second_order(const MultiPoly& f) const {
    const VarSpace& s = pot.space;
    MultiPoly out = MultiPoly::zero(s);
    for (int a = 0; a < s.n; ++a) out += f.diff(s.x(a)).diff(s.x(a));
    out -= t_poly * (pot.laplacian * f);
    out += t_poly * t_poly * (grad_sq * f);
    for (int a = 0; a < s.n; ++a)
      out -= CRational(2) * (t_poly * (pot.grad[a] * f.diff(s.x(a))));
    return out;
  }

  /// i p.(grad - t grad V) f
  MultiPoly first_order(const MultiPoly& f) const {
    const VarSpace& s = pot.space;
    MultiPoly out = MultiPoly::zero(s);
    for (int a = 0; a < s.n; ++a) {
      MultiPoly pa = MultiPoly::variable(s, s.p(a));
      out += pa * (f.diff(s.x(a)) - t_poly * (pot.grad[a] * f));
    }
    return CRational::i() * out;
  }

  /// dW_k/dt expressed through the two lower orders.
  MultiPoly rhs(const MultiPoly& w_km1, const MultiPoly& w_km2) const {
    return CRational(Rational(1, 2)) * second_order(w_km2) + first_order(w_km1);
  }
};

}  // namespace detail

/// Builds W_0..W_K by integrating the order-by-order evolution equation in t.
/// Every step is exact rational arithmetic; each returned W_k satisfies the
/// defining equation identically and vanishes at t = 0 for k >= 1.
inline WKSeries wk_recursion(const PotentialSpec& potential, int order) {
  if (order < 0) throw std::invalid_argument("wk_recursion: order must be >= 0");
  detail::RhsOperators ops(potential);
  WKSeries s{potential, order, {}};
  s.terms.reserve(order + 1);
  s.terms.push_back(MultiPoly::constant(potential.space, CRational(1)));
  MultiPoly zero = MultiPoly::zero(potential.space);
  for (int k = 1; k <= order; ++k) {
    const MultiPoly& w1 = s.terms[k - 1];
    const MultiPoly& w2 = k >= 2 ? s.terms[k - 2] : zero;
    s.terms.push_back(ops.rhs(w1, w2).integrate_t());
  }
  return s;
}

/// Per-order residual of the truncated series substituted into the full
/// evolution equation, hbar kept as a formal grading symbol. The residual at
/// order m is dW_m/dt minus the right-hand side built from W_{m-1}, W_{m-2}
/// (terms above the truncation order treated as zero), so orders 0..K must be
/// exactly zero and only orders K+1 and K+2 may survive.
struct UBResidual {
  std::vector<MultiPoly> by_order;       // indices 0..K+2
  std::optional<int> first_violation;    // lowest order <= K with nonzero residual
};

inline UBResidual ub_residual(const WKSeries& series) {
  detail::RhsOperators ops(series.potential);
  const MultiPoly zero = MultiPoly::zero(series.potential.space);
  auto w_at = [&](int k) -> const MultiPoly& {
    return (k >= 0 && k <= series.order) ? series.terms[k] : zero;
  };
  UBResidual r;
  int tv = series.potential.space.t();
  for (int m = 0; m <= series.order + 2; ++m) {
    MultiPoly res = w_at(m).diff(tv) - ops.rhs(w_at(m - 1), w_at(m - 2));
    if (!res.is_zero() && m <= series.order && !r.first_violation)
      r.first_violation = m;
    r.by_order.push_back(std::move(res));
  }
  return r;
}

/// D_i f = d f / d x_i - t (d V / d x_i) f
inline MultiPoly covariant_derivative(const PotentialSpec& potential,
                                      const MultiPoly& f, int axis) {
  const VarSpace& s = potential.space;
  if (axis < 0 || axis >= s.n)
    throw std::out_of_range("covariant_derivative: axis out of range");
  MultiPoly t_poly = MultiPoly::variable(s, s.t());
  return f.diff(s.x(axis)) - t_poly * (potential.grad[axis] * f);
}

}  // namespace wkx::wk
