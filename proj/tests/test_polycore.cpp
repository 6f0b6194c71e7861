#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "wkx/multipoly.hpp"
#include "wkx/sampling.hpp"

using wkx::poly::CRational;
using wkx::poly::MultiPoly;
using wkx::poly::Rational;
using wkx::poly::VarSpace;

namespace {

MultiPoly var(const VarSpace& s, int v) { return MultiPoly::variable(s, v); }

MultiPoly consti(const VarSpace& s, long v) {
  return MultiPoly::constant(s, CRational(v));
}

/// Random small polynomial for property checks: up to `max_terms` monomials,
/// exponents <= 3, small rational coefficients.
MultiPoly random_poly(std::mt19937_64& rng, const VarSpace& s, int max_terms = 5) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> expo(0, 3);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 4);
  MultiPoly f = MultiPoly::zero(s);
  int k = nterms(rng);
  for (int i = 0; i < k; ++i) {
    wkx::poly::ExpVec e(s.vars());
    for (auto& x : e) x = expo(rng);
    CRational c(Rational(num(rng), den(rng)), Rational(num(rng), den(rng)));
    f += MultiPoly::monomial(s, e, c);
  }
  return f;
}

}  // namespace

TEST_CASE("addition merges like terms and prunes zeros") {
  VarSpace s(1);  // vars: x1, p1, t
  MultiPoly x = var(s, s.x(0));
  MultiPoly p = var(s, s.p(0));
  MultiPoly t = var(s, s.t());

  CHECK((x + (-x)).is_zero());
  CHECK(CRational(2) * (x * p) + CRational(3) * (x * p) == CRational(5) * (x * p));
  CHECK(x * x + t + t == x * x + CRational(2) * t);
}

TEST_CASE("multiplication distributes with exact coefficients") {
  VarSpace s(1);
  MultiPoly x = var(s, s.x(0));
  MultiPoly p = var(s, s.p(0));
  MultiPoly t = var(s, s.t());

  CHECK((x + p) * (x - p) == x * x - p * p);
  MultiPoly i = MultiPoly::constant(s, CRational::i());
  CHECK(i * i == consti(s, -1));
  CHECK((t * x) * (t * x) == t * t * x * x);
}

TEST_CASE("dimension mismatch is rejected") {
  VarSpace s1(1), s2(2);
  MultiPoly a = var(s1, 0), b = var(s2, 0);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("partial derivatives") {
  VarSpace s(2);  // x1 x2 p1 p2 t
  MultiPoly x1 = var(s, s.x(0)), x2 = var(s, s.x(1));
  MultiPoly p1 = var(s, s.p(0));
  MultiPoly t = var(s, s.t());

  CHECK((x1 * x1 * x2).diff(s.x(0)) == CRational(2) * (x1 * x2));
  CHECK(consti(s, 7).diff(s.p(1)).is_zero());
  CHECK((t * t * p1).diff(s.t()) == CRational(2) * (t * p1));
}

TEST_CASE("t-antiderivative") {
  VarSpace s(2);
  MultiPoly x2 = var(s, s.x(1));
  MultiPoly p1 = var(s, s.p(0));
  MultiPoly x1 = var(s, s.x(0));
  MultiPoly t = var(s, s.t());

  CHECK(t.integrate_t() == CRational(Rational(1, 2)) * (t * t));
  CHECK((x1 * p1).integrate_t() == t * x1 * p1);
  CHECK((consti(s, 3) * t * t * x2).integrate_t() == t * t * t * x2);
}

TEST_CASE("evaluation") {
  VarSpace s(1);
  MultiPoly x = var(s, s.x(0));
  MultiPoly p = var(s, s.p(0));
  MultiPoly t = var(s, s.t());

  std::vector<double> pt{2.0, 3.0, 0.0};
  CHECK((x * x + p).eval(pt) == std::complex<double>(7.0, 0.0));

  MultiPoly it = MultiPoly::constant(s, CRational::i()) * t;
  std::vector<double> pt2{0.0, 0.0, 1.0};
  CHECK(it.eval(pt2) == std::complex<double>(0.0, 1.0));

  CHECK(MultiPoly::zero(s).eval(pt) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("parity filter") {
  VarSpace s(1);
  MultiPoly x = var(s, s.x(0));
  MultiPoly p = var(s, s.p(0));

  auto [even, odd] = (x * p + p * p).parity_split(s.p_vars());
  CHECK(even == p * p);
  CHECK(odd == x * p);

  MultiPoly e2 = x * x + p * p;
  auto [ee, eo] = e2.parity_split(s.xp_vars());
  CHECK(ee == e2);
  CHECK(eo.is_zero());

  MultiPoly po = p * p * p;
  auto [oe, oo] = po.parity_split(s.p_vars());
  CHECK(oe.is_zero());
  CHECK(oo == po);
}

TEST_CASE("ring axioms on random polynomials") {
  std::mt19937_64 rng(2024);
  VarSpace s(2);
  for (int iter = 0; iter < 40; ++iter) {
    MultiPoly a = random_poly(rng, s), b = random_poly(rng, s), c = random_poly(rng, s);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("differentiation and t-integration are mutually inverse") {
  std::mt19937_64 rng(7);
  VarSpace s(1);
  for (int iter = 0; iter < 40; ++iter) {
    MultiPoly a = random_poly(rng, s);
    CHECK(a.integrate_t().diff(s.t()) == a);
    // integrate(diff) recovers a when a has no t-independent part
    MultiPoly t_only = var(s, s.t()) * a;
    CHECK(t_only.diff(s.t()).integrate_t() == t_only);
  }
}

TEST_CASE("evaluation is a ring homomorphism to within rounding") {
  std::mt19937_64 rng(99);
  VarSpace s(2);
  auto points = wkx::sample_points(11, 8, s.vars());
  for (int iter = 0; iter < 20; ++iter) {
    MultiPoly a = random_poly(rng, s), b = random_poly(rng, s);
    MultiPoly ab = a * b;
    for (const auto& pt : points) {
      auto lhs = ab.eval(pt);
      auto rhs = a.eval(pt) * b.eval(pt);
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs) + std::abs(rhs)));
    }
  }
}

TEST_CASE("serialization round-trip is the identity") {
  std::mt19937_64 rng(5);
  VarSpace s(2);
  for (int iter = 0; iter < 40; ++iter) {
    MultiPoly a = random_poly(rng, s);
    CHECK(MultiPoly::parse(a.serialize(), s) == a);
  }
  CHECK(MultiPoly::parse("", s).is_zero());
}

TEST_CASE("serialization is canonical graded-lex") {
  VarSpace s(1);
  MultiPoly x = var(s, s.x(0));
  MultiPoly p = var(s, s.p(0));
  MultiPoly t = var(s, s.t());
  MultiPoly f = t * t * t + x * p + CRational(Rational(1, 2)) * x;
  CHECK(f.serialize() ==
        "1/2 0/1 1 0 0\n"
        "1/1 0/1 1 1 0\n"
        "1/1 0/1 0 0 3\n");
}
