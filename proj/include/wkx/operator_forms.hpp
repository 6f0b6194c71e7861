#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "wkx/sampling.hpp"
#include "wkx/wk_series.hpp"

namespace wkx::wk {

/// The equivalent right-hand-side forms of the evolution equation for W.
/// Each is an independent product-rule expansion; all must produce the same
/// polynomial when applied to the same test function.
enum class OperatorForm {
  Expanded,        // fully expanded gradient form
  Covariant,       // (hbar D + i p)^2 + p^2 composite
  GaugedSource,    // gauged-out potential with explicit -V W' source
  FluxDivergence,  // continuity form: divergence of the probability current
  ConjugatedFP,    // drift-diffusion operator conjugated by the classical weight
  ConjugatedFlux,  // current form conjugated by the classical weight
  MomentumShift,   // shifted-momentum-operator (Bloch-Schroedinger) form
  HalfWeight,      // half-potential-weight form (supersymmetric pairing)
};

inline const char* form_name(OperatorForm f) {
  switch (f) {
    case OperatorForm::Expanded: return "expanded";
    case OperatorForm::Covariant: return "covariant";
    case OperatorForm::GaugedSource: return "gauged_source";
    case OperatorForm::FluxDivergence: return "flux_divergence";
    case OperatorForm::ConjugatedFP: return "conjugated_fp";
    case OperatorForm::ConjugatedFlux: return "conjugated_flux";
    case OperatorForm::MomentumShift: return "momentum_shift";
    case OperatorForm::HalfWeight: return "half_weight";
  }
  return "?";
}

inline const std::array<OperatorForm, 8>& all_operator_forms() {
  static const std::array<OperatorForm, 8> forms = {
      OperatorForm::Expanded,       OperatorForm::Covariant,
      OperatorForm::GaugedSource,   OperatorForm::FluxDivergence,
      OperatorForm::ConjugatedFP,   OperatorForm::ConjugatedFlux,
      OperatorForm::MomentumShift,  OperatorForm::HalfWeight,
  };
  return forms;
}

struct OperatorFormReport {
  OperatorForm form;
  double max_abs_residual = 0.0;
  int sample_count = 0;
};

namespace detail {

/// Pre-expanded operator pieces shared by the form implementations. All
/// exponential weights (e^{tV}, e^{tH}, e^{tV/2}) are eliminated analytically
/// by the product rule, so every form maps polynomials to polynomials.
struct FormOps {
  const PotentialSpec& pot;
  MultiPoly t_poly;
  MultiPoly half_t;   // t/2
  MultiPoly h_class;  // classical H = p^2/2 + V
  std::vector<MultiPoly> p_vars;
  std::vector<MultiPoly> grad_h;  // d/dx_i of H (equals grad V; p-part drops out)

  explicit FormOps(const PotentialSpec& p)
      : pot(p),
        t_poly(MultiPoly::variable(p.space, p.space.t())),
        half_t(CRational(Rational(1, 2)) * t_poly),
        h_class(p.V) {
    const VarSpace& s = p.space;
    for (int a = 0; a < s.n; ++a) {
      p_vars.push_back(MultiPoly::variable(s, s.p(a)));
      h_class += CRational(Rational(1, 2)) * (p_vars[a] * p_vars[a]);
    }
    for (int a = 0; a < s.n; ++a) grad_h.push_back(h_class.diff(s.x(a)));
  }

  MultiPoly dx(const MultiPoly& f, int a) const { return f.diff(pot.space.x(a)); }

  // e^{tV} d_i e^{-tV} = d_i - t (d_i V)
  MultiPoly cov(const MultiPoly& f, int a) const {
    return dx(f, a) - t_poly * (pot.grad[a] * f);
  }

  // e^{tH} d_i e^{-tH}: the p^2/2 part of H has no x-gradient, which is the
  // analytic statement that the classical weight commutes with x-derivatives.
  MultiPoly cov_h(const MultiPoly& f, int a) const {
    return dx(f, a) - t_poly * (grad_h[a] * f);
  }

  // e^{tV/2} applied around the half-weight derivative: expanding
  // (d_i - (t/2) d_iV) and its conjugation by e^{-tV/2} separately.
  MultiPoly half_d(const MultiPoly& f, int a) const {
    return dx(f, a) - half_t * (pot.grad[a] * f);
  }
  MultiPoly cov_half(const MultiPoly& f, int a) const {
    return half_d(f, a) - half_t * (pot.grad[a] * f);
  }
};

}  // namespace detail

/// Applies one right-hand-side form to a polynomial test function with hbar a
/// fixed rational. Substituted weights are expanded analytically, so the
/// result is again a polynomial in (x, p, t); all forms agree identically.
/// `total_energy_weight` switches the gauged form to the classical-energy
/// weight (the extra e^{-p^2 t/2} factor cancels against its own time
/// derivative and is carried here through the explicit H terms).
inline MultiPoly apply_operator_form(const PotentialSpec& pot, OperatorForm form,
                                     const MultiPoly& f, const Rational& hbar,
                                     bool total_energy_weight = false) {
  using detail::FormOps;
  const VarSpace& s = pot.space;
  FormOps ops(pot);
  const CRational h2_half(hbar * hbar / 2);
  const CRational i_h(Rational(0), hbar);
  const CRational half(Rational(1, 2));
  MultiPoly out = MultiPoly::zero(s);

  switch (form) {
    case OperatorForm::Expanded: {
      // (hbar^2/2)[lap - t lapV + t^2 (gradV)^2 - 2t gradV.grad] f
      //   + i hbar p.(grad - t gradV) f
      detail::RhsOperators rhs(pot);
      out = h2_half * rhs.second_order(f);
      MultiPoly first = MultiPoly::zero(s);
      for (int a = 0; a < s.n; ++a)
        first += ops.p_vars[a] * (ops.dx(f, a) - ops.t_poly * (pot.grad[a] * f));
      out += i_h * first;
      return out;
    }
    case OperatorForm::Covariant: {
      // (1/2)[(hbar D + i p)^2 + p^2] f
      const CRational hb(hbar);
      const CRational i = CRational::i();
      for (int a = 0; a < s.n; ++a) {
        MultiPoly g = hb * ops.cov(f, a) + i * (ops.p_vars[a] * f);
        out += hb * ops.cov(g, a) + i * (ops.p_vars[a] * g);
        out += ops.p_vars[a] * (ops.p_vars[a] * f);
      }
      return half * out;
    }
    case OperatorForm::GaugedSource: {
      // W = e^{tU} W', dW'/dt = L_FP W' - U W'  with U = V (or classical H):
      // prediction = U f + e^{tU} (L_FP - U)(e^{-tU} f).
      auto covU = [&](const MultiPoly& g, int a) {
        return total_energy_weight ? ops.cov_h(g, a) : ops.cov(g, a);
      };
      const MultiPoly& u = total_energy_weight ? ops.h_class : pot.V;
      out = u * f;
      MultiPoly inner = MultiPoly::zero(s);
      for (int a = 0; a < s.n; ++a) inner += covU(covU(f, a), a);
      out += h2_half * inner;
      MultiPoly drift = MultiPoly::zero(s);
      for (int a = 0; a < s.n; ++a) drift += ops.p_vars[a] * covU(f, a);
      out += i_h * drift;
      out -= u * f;
      return out;
    }
    case OperatorForm::FluxDivergence: {
      // dW'/dt + div J' = -V W' with J' = -i hbar p W' - (hbar^2/2) grad W';
      // conjugating the divergence by e^{tV} turns grad into D.
      out = pot.V * f;
      for (int a = 0; a < s.n; ++a) {
        MultiPoly k = -i_h * (ops.p_vars[a] * f) - h2_half * ops.cov(f, a);
        out -= ops.dx(k, a) - ops.t_poly * (pot.grad[a] * k);
      }
      out -= pot.V * f;
      return out;
    }
    case OperatorForm::ConjugatedFP: {
      // e^{tH} L_FP e^{-tH} with L_FP = (hbar^2/2) lap + i hbar p.grad
      for (int a = 0; a < s.n; ++a) {
        out += h2_half * ops.cov_h(ops.cov_h(f, a), a);
        out += i_h * (ops.p_vars[a] * ops.cov_h(f, a));
      }
      return out;
    }
    case OperatorForm::ConjugatedFlux: {
      // e^{tH} div J e^{-tH} with J = (hbar^2/2)[grad + (2i/hbar) p] W
      for (int a = 0; a < s.n; ++a) {
        MultiPoly k = h2_half * ops.cov_h(f, a) + i_h * (ops.p_vars[a] * f);
        out += ops.cov_h(k, a);
      }
      return out;
    }
    case OperatorForm::MomentumShift: {
      // (1/2) e^{tH} (p^2 - P^2) e^{-tH} with P = p - i hbar grad.
      // The conjugated P_i is p_i - i hbar D_i.
      auto conj_p = [&](const MultiPoly& g, int a) {
        return ops.p_vars[a] * g - i_h * ops.cov_h(g, a);
      };
      for (int a = 0; a < s.n; ++a) {
        out += ops.p_vars[a] * (ops.p_vars[a] * f);
        out -= conj_p(conj_p(f, a), a);
      }
      return half * out;
    }
    case OperatorForm::HalfWeight: {
      // W = e^{tV/2} Wt, dWt/dt = [(hbar^2/2) Dt^2 + i hbar p.Dt] Wt - (V/2) Wt
      // with Dt = e^{tV/2} grad e^{-tV/2}; conjugating Dt by the remaining
      // half weight gives the full covariant derivative piecewise.
      out = half * (pot.V * f);
      MultiPoly inner = MultiPoly::zero(s);
      for (int a = 0; a < s.n; ++a) inner += ops.cov_half(ops.cov_half(f, a), a);
      out += h2_half * inner;
      MultiPoly drift = MultiPoly::zero(s);
      for (int a = 0; a < s.n; ++a) drift += ops.p_vars[a] * ops.cov_half(f, a);
      out += i_h * drift;
      out -= half * (pot.V * f);
      return out;
    }
  }
  throw std::logic_error("unknown operator form");
}

/// Applies every form to the test function, evaluates all of them on the
/// sample set, and reports per form the largest absolute disagreement with
/// any other form. The forms are algebraic rewritings of one equation, so
/// any nonzero residual beyond rounding noise is a failure.
inline std::vector<OperatorFormReport> form_equivalence_check(
    const PotentialSpec& pot, const MultiPoly& testfn, const Rational& hbar,
    const std::vector<std::vector<double>>& points) {
  const auto& forms = all_operator_forms();
  std::vector<MultiPoly> applied;
  applied.reserve(forms.size());
  for (auto form : forms)
    applied.push_back(apply_operator_form(pot, form, testfn, hbar));

  std::vector<std::vector<std::complex<double>>> vals(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    vals[i].reserve(points.size());
    for (const auto& pt : points) vals[i].push_back(applied[i].eval(pt));
  }

  std::vector<OperatorFormReport> reports;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    OperatorFormReport rep{forms[i], 0.0, static_cast<int>(points.size())};
    for (std::size_t j = 0; j < forms.size(); ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < points.size(); ++k)
        rep.max_abs_residual =
            std::max(rep.max_abs_residual, std::abs(vals[i][k] - vals[j][k]));
    }
    reports.push_back(rep);
  }
  return reports;
}

/// Applies the free drift-diffusion operator (hbar^2/2) lap + i hbar p.grad
/// to the plane wave e^{i a p.x / hbar} and returns the scalar multiplier.
/// The hbar powers cancel identically: the result is (-a^2/2 - a) p^2,
/// computed in exact rational arithmetic before any float enters.
inline std::complex<double> fokker_planck_plane_wave(const Rational& a,
                                                     std::span<const double> p) {
  Rational coeff = -(a * a) / 2 - a;
  double p2 = 0.0;
  for (double v : p) p2 += v * v;
  return {poly::to_double(coeff) * p2, 0.0};
}

/// Residual of the stationary kernel: the a = -2 plane wave is annihilated
/// exactly, independent of hbar and of the undetermined normalization.
inline std::complex<double> stationary_plane_wave_residual(std::span<const double> p,
                                                           double hbar) {
  if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  return fokker_planck_plane_wave(Rational(-2), p);
}

/// Confirms that a stationary solution is impossible for nonzero V:
/// a stationary plane wave would require (grad ln u)^2 = (2/hbar^2) V(x),
/// i.e. -p^2/hbar^2 = 2 V(x)/hbar^2 at every x. For V == 0 the p = 0
/// constant is stationary and the identity holds everywhere; for V != 0 the
/// check must find a sample where it fails.
inline bool no_stationary_solution_check(const PotentialSpec& pot, double hbar,
                                         std::span<const double> p,
                                         const std::vector<std::vector<double>>& x_samples) {
  if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  double p2 = 0.0;
  for (double v : p) p2 += v * v;
  const double lhs = -p2 / (hbar * hbar);

  bool holds_everywhere = true;
  for (const auto& x : x_samples) {
    std::vector<double> full(pot.space.vars(), 0.0);
    for (int a = 0; a < pot.space.n; ++a) full[a] = x[a];
    double rhs = 2.0 * pot.V.eval(full).real() / (hbar * hbar);
    if (std::abs(lhs - rhs) > 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs))) {
      holds_everywhere = false;
      break;
    }
  }
  if (pot.V.is_zero()) return holds_everywhere;
  return !holds_everywhere;
}

}  // namespace wkx::wk
