#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>

#include "wkx/multipoly.hpp"

namespace wkx::psint {

using poly::BigInt;
using poly::CRational;
using poly::MultiPoly;
using poly::Rational;
using poly::VarSpace;

/// Result of integrating out the momenta against the Gaussian weight
/// e^{-t p^2/2}. The represented value is
///   (2 pi / t)^{n/2} * t^{-t_denom_pow} * num(x, t)
/// with num free of p variables. Negative t powers produced by the moments
/// are tracked in the denominator exponent so num stays a plain polynomial.
struct PhaseSpaceMoment {
  MultiPoly num;
  int t_denom_pow = 0;
};

inline BigInt double_factorial_odd(int m) {  // (2m-1)!!
  BigInt r = 1;
  for (int j = 3; j <= 2 * m - 1; j += 2) r *= j;
  return r;
}

/// Momentum monomials p^alpha average to zero for odd alpha and to
/// prod_i (2 m_i - 1)!! t^{-m_i} for alpha = 2m, times the overall
/// normalization (2 pi / t)^{n/2} carried by the result type.
inline PhaseSpaceMoment gaussian_p_moments(const MultiPoly& f) {
  const VarSpace& s = f.space();
  int max_m = 0;
  for (const auto& [e, c] : f.terms()) {
    bool odd = false;
    int m = 0;
    for (int a = 0; a < s.n; ++a) {
      if (e[s.p(a)] % 2 != 0) {
        odd = true;
        break;
      }
      m += e[s.p(a)] / 2;
    }
    if (!odd) max_m = std::max(max_m, m);
  }

  PhaseSpaceMoment out{MultiPoly::zero(s), max_m};
  for (const auto& [e, c] : f.terms()) {
    Rational factor = 1;
    int m = 0;
    bool odd = false;
    for (int a = 0; a < s.n; ++a) {
      int pe = e[s.p(a)];
      if (pe % 2 != 0) {
        odd = true;
        break;
      }
      factor *= Rational(double_factorial_odd(pe / 2));
      m += pe / 2;
    }
    if (odd) continue;
    poly::ExpVec d = e;
    for (int a = 0; a < s.n; ++a) d[s.p(a)] = 0;
    d[s.t()] += max_m - m;  // rescale to the common denominator power
    out.num += MultiPoly::monomial(s, std::move(d), c * CRational(factor));
  }
  return out;
}

/// Evaluates the moment (including its normalization) at spatial point x and
/// time t > 0.
inline std::complex<double> eval_moment(const PhaseSpaceMoment& mom,
                                        std::span<const double> x, double t) {
  const VarSpace& s = mom.num.space();
  if (static_cast<int>(x.size()) != s.n)
    throw std::invalid_argument("eval_moment: x length mismatch");
  if (!(t > 0)) throw std::invalid_argument("eval_moment: t must be positive");
  std::vector<double> pt(s.vars(), 0.0);
  for (int a = 0; a < s.n; ++a) pt[a] = x[a];
  pt[s.t()] = t;
  double pref = std::pow(2.0 * std::numbers::pi / t, 0.5 * s.n) *
                std::pow(t, -mom.t_denom_pow);
  return pref * mom.num.eval(pt);
}

}  // namespace wkx::psint
