#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "wkx/operator_forms.hpp"

using namespace wkx::wk;
using wkx::poly::CRational;
using wkx::poly::MultiPoly;
using wkx::poly::Rational;
using wkx::poly::VarSpace;

namespace {

PotentialSpec squared_x1(int n) {
  VarSpace s(n);
  MultiPoly x = MultiPoly::variable(s, s.x(0));
  return PotentialSpec::from_poly(x * x);
}

MultiPoly random_testfn(std::mt19937_64& rng, const VarSpace& s) {
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_int_distribution<long> num(-4, 4);
  MultiPoly f = MultiPoly::zero(s);
  for (int i = 0; i < 4; ++i) {
    wkx::poly::ExpVec e(s.vars());
    for (auto& x : e) x = expo(rng);
    f += MultiPoly::monomial(s, e, CRational(Rational(num(rng)), Rational(num(rng))));
  }
  return f;
}

}  // namespace

TEST_CASE("all operator forms are the same polynomial map") {
  std::mt19937_64 rng(31337);
  for (const auto& pot : {squared_x1(1), make_channel_x2y2(Rational(1)),
                          make_quartic(), make_harmonic(2, Rational(2))}) {
    for (const Rational& hbar : {Rational(1), Rational(3, 7)}) {
      for (int rep = 0; rep < 3; ++rep) {
        MultiPoly f = random_testfn(rng, pot.space);
        MultiPoly ref = apply_operator_form(pot, OperatorForm::Expanded, f, hbar);
        for (auto form : all_operator_forms()) {
          INFO(form_name(form));
          CHECK(apply_operator_form(pot, form, f, hbar) == ref);
        }
        // classical-energy weight variant of the gauged form
        CHECK(apply_operator_form(pot, OperatorForm::GaugedSource, f, hbar, true) == ref);
      }
    }
  }
}

TEST_CASE("zero potential, constant test function: every form gives zero") {
  PotentialSpec free = PotentialSpec::from_poly(MultiPoly::zero(VarSpace(1)));
  MultiPoly one = MultiPoly::constant(free.space, CRational(1));
  auto pts = wkx::sample_points(1, 16, free.space.vars());
  auto reports = form_equivalence_check(free, one, Rational(1), pts);
  for (const auto& r : reports) {
    CHECK(apply_operator_form(free, r.form, one, Rational(1)).is_zero());
    CHECK(r.max_abs_residual == 0.0);
  }
}

TEST_CASE("numeric agreement on seeded samples") {
  PotentialSpec pot = squared_x1(1);
  MultiPoly f = MultiPoly::variable(pot.space, pot.space.x(0)) *
                MultiPoly::variable(pot.space, pot.space.p(0));
  auto pts = wkx::sample_points(42, 64, pot.space.vars());
  auto reports = form_equivalence_check(pot, f, Rational(1), pts);
  REQUIRE(reports.size() == 8);
  for (const auto& r : reports) {
    CHECK(r.sample_count == 64);
    CHECK(r.max_abs_residual <= 1e-10);
  }
}

TEST_CASE("flux form reproduces the source equation at sample points") {
  PotentialSpec pot = make_channel_x2y2(Rational(1));
  std::mt19937_64 rng(7);
  MultiPoly f = random_testfn(rng, pot.space);
  MultiPoly flux = apply_operator_form(pot, OperatorForm::FluxDivergence, f, Rational(1, 2));
  MultiPoly gauged = apply_operator_form(pot, OperatorForm::GaugedSource, f, Rational(1, 2));
  auto pts = wkx::sample_points(9, 64, pot.space.vars());
  for (const auto& pt : pts)
    CHECK(std::abs(flux.eval(pt) - gauged.eval(pt)) <= 1e-10);
}

TEST_CASE("stationary plane wave is annihilated exactly") {
  std::vector<double> p{0.7, -0.3};
  CHECK(stationary_plane_wave_residual(p, 1.0) == std::complex<double>(0.0, 0.0));
  CHECK(stationary_plane_wave_residual(p, 0.25) == std::complex<double>(0.0, 0.0));

  std::vector<double> pz{0.0, 0.0};
  CHECK(stationary_plane_wave_residual(pz, 1.0) == std::complex<double>(0.0, 0.0));

  // negative control: the conjugate wave picks up -4 p^2
  double p2 = 0.7 * 0.7 + 0.3 * 0.3;
  auto r = fokker_planck_plane_wave(Rational(2), p);
  CHECK(r.real() == Catch::Approx(-4.0 * p2).epsilon(1e-14));
  CHECK(r.imag() == 0.0);
}

TEST_CASE("no stationary solution for nonzero potentials") {
  auto xs1 = wkx::sample_points(3, 32, 1);
  auto xs2 = wkx::sample_points(3, 32, 2);

  PotentialSpec free = PotentialSpec::from_poly(MultiPoly::zero(VarSpace(1)));
  std::vector<double> p0{0.0};
  CHECK(no_stationary_solution_check(free, 1.0, p0, xs1));

  std::vector<double> p1{0.6};
  CHECK(no_stationary_solution_check(squared_x1(1), 1.0, p1, xs1));
  CHECK(no_stationary_solution_check(squared_x1(1), 0.5, p0, xs1));

  std::vector<double> p2{0.6, -0.2};
  CHECK(no_stationary_solution_check(make_channel_x2y2(Rational(1)), 1.0, p2, xs2));
}
