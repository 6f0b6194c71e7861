#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "wkx/oscillator_basis.hpp"

namespace wkx::spectral {

struct TailBoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reference spectrum: ascending eigenvalues with eigenvectors in the tensor
/// oscillator basis (one column per state) and a per-level convergence
/// estimate from a smaller-basis comparison (empty when not computed).
struct Spectrum {
  BasisSpec basis;
  int dim = 1;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> convergence;
};

/// Full symmetric eigendecomposition. The input must be symmetric; ascending
/// eigenvalue order is guaranteed by the solver.
inline Spectrum diagonalize(const Eigen::MatrixXd& h) {
  double asym = (h - h.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * (1.0 + h.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("diagonalize: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (h + h.transpose()));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolver failed to converge");
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  return s;
}

/// Builds and diagonalizes the Hamiltonian; when `with_convergence` is set,
/// repeats at basis size M - M/4 and reports per-level eigenvalue shifts.
inline Spectrum solve_spectrum(const wk::PotentialSpec& pot, const BasisSpec& basis,
                               bool with_convergence = true) {
  Spectrum s = diagonalize(build_hamiltonian(pot, basis));
  s.basis = basis;
  s.dim = pot.space.n;
  if (with_convergence) {
    BasisSpec smaller = basis;
    smaller.size = std::max(2, basis.size - std::max(1, basis.size / 4));
    Spectrum ref = diagonalize(build_hamiltonian(pot, smaller));
    s.convergence.resize(s.eigenvalues.size(),
                         std::numeric_limits<double>::infinity());
    for (int i = 0; i < ref.eigenvalues.size() && i < s.eigenvalues.size(); ++i)
      s.convergence[i] = std::abs(s.eigenvalues[i] - ref.eigenvalues[i]);
  }
  return s;
}

/// Geometric tail estimate past the top computed level, using the mean
/// spacing of the highest levels. Spacings of confining even potentials grow
/// with energy, so a constant-spacing extrapolation bounds the true tail.
inline double spectrum_tail_bound(const Spectrum& s, double t) {
  const auto& e = s.eigenvalues;
  long n = e.size();
  if (n < 6) return std::numeric_limits<double>::infinity();
  double spacing = (e[n - 1] - e[n - 6]) / 5.0;
  if (!(spacing > 0)) return std::numeric_limits<double>::infinity();
  double r = std::exp(-t * spacing);
  return std::exp(-t * e[n - 1]) * r / (1.0 - r);
}

/// Z(t) = sum_n e^{-E_n t} over the computed levels. Throws when the
/// truncation tail estimate exceeds rel_tail_tol relative to the sum.
inline std::vector<double> z_exact(const Spectrum& s, const std::vector<double>& ts,
                                   double rel_tail_tol = 1e-9,
                                   std::vector<double>* tail_out = nullptr) {
  std::vector<double> z;
  z.reserve(ts.size());
  if (tail_out) tail_out->clear();
  for (double t : ts) {
    if (!(t > 0)) throw std::invalid_argument("z_exact: t must be positive");
    double acc = 0.0;
    for (long i = s.eigenvalues.size() - 1; i >= 0; --i)
      acc += std::exp(-t * s.eigenvalues[i]);  // ascending magnitude summation
    double tail = spectrum_tail_bound(s, t);
    if (tail_out) tail_out->push_back(tail);
    if (!(tail <= rel_tail_tol * acc))
      throw TailBoundExceeded("z_exact: truncation tail above tolerance at t=" +
                              std::to_string(t));
    z.push_back(acc);
  }
  return z;
}

/// Self-checked trace: recompute with a smaller basis and require relative
/// agreement before returning the large-basis values.
inline std::vector<double> z_exact_converged(const wk::PotentialSpec& pot,
                                             const BasisSpec& basis,
                                             const std::vector<double>& ts,
                                             double rel_tol,
                                             double* worst_dev = nullptr) {
  Spectrum big = solve_spectrum(pot, basis, false);
  BasisSpec smaller = basis;
  smaller.size = std::max(2, basis.size - std::max(1, basis.size / 4));
  Spectrum small = solve_spectrum(pot, smaller, false);
  auto zb = z_exact(big, ts, 1e-6);
  auto zs = z_exact(small, ts, 1e-4);
  double worst = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    worst = std::max(worst, std::abs(zb[i] / zs[i] - 1.0));
  if (worst_dev) *worst_dev = worst;
  if (worst > rel_tol)
    throw TailBoundExceeded("z_exact self-check: basis sizes disagree by " +
                            std::to_string(worst));
  return zb;
}

inline nlohmann::json spectrum_to_json(const Spectrum& s) {
  nlohmann::json j;
  j["basis"] = {{"size", s.basis.size},
                {"omega", s.basis.omega},
                {"hbar", s.basis.hbar},
                {"dim", s.dim}};
  j["eigenvalues"] = std::vector<double>(
      s.eigenvalues.data(), s.eigenvalues.data() + s.eigenvalues.size());
  j["convergence"] = s.convergence;
  return j;
}

}  // namespace wkx::spectral
