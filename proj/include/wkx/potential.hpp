#pragma once

#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wkx/multipoly.hpp"

namespace wkx::wk {

using poly::CRational;
using poly::MultiPoly;
using poly::Rational;
using poly::VarSpace;

/// Even polynomial potential V(x) with precomputed gradient and Laplacian.
/// V must depend on the x variables only and be invariant under x -> -x.
struct PotentialSpec {
  VarSpace space{1};
  MultiPoly V{VarSpace(1)};
  std::vector<MultiPoly> grad;
  MultiPoly laplacian{VarSpace(1)};
  /// Set when V is homogeneous: V(lambda x) = lambda^{2N} V(x).
  std::optional<int> homogeneity_2N;

  int dim() const { return space.n; }

  static PotentialSpec from_poly(const MultiPoly& v) {
    const VarSpace& space = v.space();
    for (int a = 0; a < space.n; ++a)
      if (v.depends_on(space.p(a)))
        throw std::invalid_argument("potential depends on momentum variables");
    if (v.depends_on(space.t()))
      throw std::invalid_argument("potential depends on t");
    auto [even, odd] = v.parity_split(space.x_vars());
    if (!odd.is_zero())
      throw std::invalid_argument("potential must satisfy V(-x) = V(x)");

    PotentialSpec ps;
    ps.space = space;
    ps.V = v;
    ps.grad.reserve(space.n);
    ps.laplacian = MultiPoly::zero(space);
    for (int a = 0; a < space.n; ++a) {
      ps.grad.push_back(v.diff(space.x(a)));
      ps.laplacian += ps.grad.back().diff(space.x(a));
    }
    ps.homogeneity_2N = detect_homogeneity(v);
    return ps;
  }

  /// JSON schema: {"dim": n, "terms": [{"coeff": 0.5 | "1/2", "exponents": [e1..en]}]}
  /// Rational strings are preserved exactly.
  static PotentialSpec from_json(const nlohmann::json& j) {
    int n = j.at("dim").get<int>();
    VarSpace space(n);
    MultiPoly v = MultiPoly::zero(space);
    for (const auto& term : j.at("terms")) {
      Rational coeff;
      const auto& cj = term.at("coeff");
      if (cj.is_string())
        coeff = poly::parse_rational(cj.get<std::string>());
      else if (cj.is_number())
        coeff = Rational(cj.get<double>());
      else
        throw std::invalid_argument("potential coeff must be number or rational string");
      auto exps = term.at("exponents").get<std::vector<int>>();
      if (static_cast<int>(exps.size()) != n)
        throw std::invalid_argument("potential exponent list must have length dim");
      poly::ExpVec e(space.vars(), 0);
      for (int a = 0; a < n; ++a) e[a] = exps[a];
      v += MultiPoly::monomial(space, e, CRational(coeff));
    }
    return from_poly(v);
  }

  static PotentialSpec load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open potential file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);  // throws with byte position
    return from_json(j);
  }

 private:
  static std::optional<int> detect_homogeneity(const MultiPoly& v) {
    if (v.is_zero()) return std::nullopt;
    long deg = -1;
    for (const auto& [e, c] : v.terms()) {
      long d = 0;
      for (int a = 0; a < v.space().n; ++a) d += e[a];
      if (deg < 0) deg = d;
      if (d != deg) return std::nullopt;
    }
    if (deg <= 0 || deg % 2 != 0) return std::nullopt;
    return static_cast<int>(deg);
  }
};

/// V = (omega^2/2) sum_i x_i^2
inline PotentialSpec make_harmonic(int n, const Rational& omega) {
  VarSpace space(n);
  MultiPoly v = MultiPoly::zero(space);
  Rational c = omega * omega / 2;
  for (int a = 0; a < n; ++a) {
    poly::ExpVec e(space.vars(), 0);
    e[space.x(a)] = 2;
    v += MultiPoly::monomial(space, e, CRational(c));
  }
  return PotentialSpec::from_poly(v);
}

/// V = x^4 in one dimension
inline PotentialSpec make_quartic() {
  VarSpace space(1);
  poly::ExpVec e(space.vars(), 0);
  e[0] = 4;
  return PotentialSpec::from_poly(MultiPoly::monomial(space, e, CRational(1)));
}

/// V = (g^2/2) x^2 y^2, the two-dimensional channel potential
inline PotentialSpec make_channel_x2y2(const Rational& g) {
  VarSpace space(2);
  poly::ExpVec e(space.vars(), 0);
  e[0] = 2;
  e[1] = 2;
  return PotentialSpec::from_poly(
      MultiPoly::monomial(space, e, CRational(g * g / 2)));
}

}  // namespace wkx::wk
