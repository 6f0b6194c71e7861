#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "wkx/spectrum.hpp"

using namespace wkx::spectral;
using wkx::wk::make_channel_x2y2;
using wkx::wk::make_harmonic;
using wkx::wk::make_quartic;
using wkx::wk::PotentialSpec;
using wkx::poly::Rational;

TEST_CASE("harmonic oscillator is diagonal in its own basis") {
  double omega = 1.0;
  BasisSpec basis{40, omega, 1.0};
  Eigen::MatrixXd h = build_hamiltonian(make_harmonic(1, Rational(1)), basis);

  double offdiag = 0.0;
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j)
      if (i != j) offdiag = std::max(offdiag, std::abs(h(i, j)));
  CHECK(offdiag <= 1e-12 * h.cwiseAbs().maxCoeff());

  Spectrum s = diagonalize(h);
  for (int n = 0; n < 40; ++n)
    CHECK(s.eigenvalues[n] ==
          Catch::Approx(omega * (n + 0.5)).epsilon(1e-12));
}

TEST_CASE("free kinetic matrix is pentadiagonal per axis") {
  Eigen::MatrixXd t = kinetic_matrix(12, 1.0, 1.0);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      if (std::abs(i - j) == 0 || std::abs(i - j) == 2)
        CHECK(t(i, j) != 0.0);
      else
        CHECK(t(i, j) == 0.0);
    }
  // diagonal is (hbar omega/2)(j + 1/2)
  for (int j = 0; j < 12; ++j)
    CHECK(t(j, j) == Catch::Approx(0.5 * (j + 0.5)).epsilon(1e-14));
}

TEST_CASE("scaled harmonic spectrum with hbar and omega") {
  double omega = 1.5, hbar = 0.5;
  BasisSpec basis{30, omega, hbar};
  Spectrum s = diagonalize(build_hamiltonian(make_harmonic(1, Rational(3, 2)), basis));
  for (int n = 0; n < 15; ++n)
    CHECK(s.eigenvalues[n] == Catch::Approx(hbar * omega * (n + 0.5)).epsilon(1e-10));
}

TEST_CASE("isotropic two-dimensional oscillator shows shell degeneracies") {
  BasisSpec basis{16, 1.0, 1.0};
  Spectrum s = diagonalize(build_hamiltonian(make_harmonic(2, Rational(1)), basis));
  // E = n1 + n2 + 1 with degeneracy E
  std::map<int, int> counts;
  for (int i = 0; i < s.eigenvalues.size(); ++i) {
    double e = s.eigenvalues[i];
    if (e < 5.4) counts[static_cast<int>(std::lround(e))]++;
  }
  CHECK(counts[1] == 1);
  CHECK(counts[2] == 2);
  CHECK(counts[3] == 3);
  CHECK(counts[4] == 4);
  CHECK(counts[5] == 5);
}

TEST_CASE("quartic ground state matches the reference value") {
  PotentialSpec quartic = make_quartic();
  double omega = suggest_omega(quartic, 60, 1.0);
  Spectrum s60 = diagonalize(build_hamiltonian(quartic, {60, omega, 1.0}));
  CHECK(s60.eigenvalues[0] == Catch::Approx(0.667986).margin(2e-6));

  // convergence in M against an independent larger diagonalization
  Spectrum s120 = diagonalize(build_hamiltonian(quartic, {120, omega, 1.0}));
  CHECK(std::abs(s60.eigenvalues[0] - s120.eigenvalues[0]) <= 1e-9);
}

TEST_CASE("variational monotonicity in the basis size") {
  PotentialSpec quartic = make_quartic();
  double omega = suggest_omega(quartic, 40, 1.0);
  Spectrum small = diagonalize(build_hamiltonian(quartic, {40, omega, 1.0}));
  Spectrum big = diagonalize(build_hamiltonian(quartic, {60, omega, 1.0}));
  for (int n = 0; n < 40; ++n)
    CHECK(big.eigenvalues[n] <= small.eigenvalues[n] + 1e-10);
}

TEST_CASE("solve_spectrum reports convergence estimates and unit norms") {
  PotentialSpec quartic = make_quartic();
  BasisSpec basis{48, suggest_omega(quartic, 48, 1.0), 1.0};
  Spectrum s = solve_spectrum(quartic, basis);
  REQUIRE(static_cast<int>(s.convergence.size()) == s.eigenvalues.size());
  CHECK(s.convergence[0] <= 1e-10);
  CHECK(s.convergence[5] <= 1e-8);
  for (int col = 0; col < 10; ++col)
    CHECK(s.eigenvectors.col(col).squaredNorm() == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("harmonic trace matches the closed form") {
  double omega = 1.0, hbar = 1.0;
  BasisSpec basis{60, omega, hbar};
  Spectrum s = solve_spectrum(make_harmonic(1, Rational(1)), basis, false);
  std::vector<double> ts{0.5, 1.0, 2.0};
  auto z = z_exact(s, ts, 1e-9);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double exact = 1.0 / (2.0 * std::sinh(hbar * omega * ts[i] / 2.0));
    CHECK(z[i] == Catch::Approx(exact).epsilon(1e-12));
  }
  // ground-state dominance at large t
  auto zl = z_exact(s, {20.0}, 1e-6);
  CHECK(zl[0] == Catch::Approx(std::exp(-0.5 * 20.0)).epsilon(1e-8));
}

TEST_CASE("tail bound rejects too-small t for the basis") {
  BasisSpec basis{12, 1.0, 1.0};
  Spectrum s = solve_spectrum(make_harmonic(1, Rational(1)), basis, false);
  CHECK_THROWS_AS(z_exact(s, {0.01}, 1e-9), TailBoundExceeded);
}

TEST_CASE("quartic trace is basis-size and basis-frequency independent") {
  PotentialSpec quartic = make_quartic();
  std::vector<double> ts{1.0};
  double omega = suggest_omega(quartic, 80, 1.0);

  Spectrum s60 = solve_spectrum(quartic, {60, omega, 1.0}, false);
  Spectrum s80 = solve_spectrum(quartic, {80, omega, 1.0}, false);
  auto z60 = z_exact(s60, ts, 1e-7);
  auto z80 = z_exact(s80, ts, 1e-7);
  CHECK(std::abs(z60[0] / z80[0] - 1.0) <= 1e-8);

  Spectrum alt = solve_spectrum(quartic, {60, 1.5 * omega, 1.0}, false);
  auto zalt = z_exact(alt, ts, 1e-7);
  CHECK(std::abs(zalt[0] / z80[0] - 1.0) <= 1e-7);

  double dev = 0.0;
  auto z = z_exact_converged(quartic, {80, omega, 1.0}, ts, 1e-8, &dev);
  CHECK(dev <= 1e-8);
  CHECK(z[0] == Catch::Approx(z80[0]));
}

TEST_CASE("soft-confined channel potential has a discrete positive spectrum") {
  PotentialSpec channel = make_channel_x2y2(Rational(1));
  BasisSpec basis{20, suggest_omega(channel, 20, 1.0), 1.0};
  Spectrum s = solve_spectrum(channel, basis, false);
  CHECK(s.eigenvalues[0] > 0.0);
  for (int i = 1; i < s.eigenvalues.size(); ++i)
    CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
  CHECK(std::isfinite(s.eigenvalues[s.eigenvalues.size() - 1]));
}

TEST_CASE("spectrum exports to json") {
  BasisSpec basis{12, 1.0, 1.0};
  Spectrum s = solve_spectrum(make_harmonic(1, Rational(1)), basis);
  auto j = spectrum_to_json(s);
  CHECK(j["basis"]["size"] == 12);
  CHECK(j["eigenvalues"].size() == 12);
  CHECK(j["convergence"].size() == 12);
}
