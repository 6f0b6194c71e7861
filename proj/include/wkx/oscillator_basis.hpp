#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "wkx/potential.hpp"

namespace wkx::spectral {

/// Tensor oscillator basis parameters: M functions per axis with frequency
/// omega as the length scale.
struct BasisSpec {
  int size = 40;       // per-axis basis size M
  double omega = 1.0;  // basis frequency
  double hbar = 1.0;

  void validate() const {
    if (size < 2) throw std::invalid_argument("basis size must be >= 2");
    if (!(omega > 0)) throw std::invalid_argument("basis frequency must be positive");
    if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  }
};

namespace detail {

/// Ladder-algebra matrices. Powers of the position operator are evaluated in
/// an enlarged basis and cropped, so every retained element is the exact
/// operator matrix element (up to float rounding), not a truncated product.
inline Eigen::MatrixXd ladder_position(int size, double hbar, double omega) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(size, size);
  for (int j = 0; j + 1 < size; ++j) {
    double v = std::sqrt(hbar * (j + 1) / (2.0 * omega));
    x(j, j + 1) = v;
    x(j + 1, j) = v;
  }
  return x;
}

inline Eigen::MatrixXd ladder_updown(int size) {  // a^dag - a
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(size, size);
  for (int j = 0; j + 1 < size; ++j) {
    double v = std::sqrt(j + 1.0);
    s(j + 1, j) = v;
    s(j, j + 1) = -v;
  }
  return s;
}

}  // namespace detail

/// Exact matrix of x^power on the M lowest oscillator states.
inline Eigen::MatrixXd position_power(int m_basis, int power, double hbar,
                                      double omega) {
  if (power == 0) return Eigen::MatrixXd::Identity(m_basis, m_basis);
  int big = m_basis + power;
  Eigen::MatrixXd x = detail::ladder_position(big, hbar, omega);
  Eigen::MatrixXd acc = x;
  for (int k = 1; k < power; ++k) acc = acc * x;
  return acc.topLeftCorner(m_basis, m_basis);
}

/// Exact matrix of p^2/2 on the M lowest oscillator states (pentadiagonal).
inline Eigen::MatrixXd kinetic_matrix(int m_basis, double hbar, double omega) {
  int big = m_basis + 2;
  Eigen::MatrixXd s = detail::ladder_updown(big);
  Eigen::MatrixXd s2 = s * s;  // p^2 = -(hbar omega / 2) (a^dag - a)^2
  return (-hbar * omega / 4.0) * s2.topLeftCorner(m_basis, m_basis);
}

/// Row-major multi-index over n axes of M states each.
struct TensorIndexer {
  int axes;
  int per_axis;
  long total;

  TensorIndexer(int n, int m)
      : axes(n), per_axis(m), total(1) {
    for (int a = 0; a < n; ++a) {
      total *= m;
      if (total > 1000000) throw std::invalid_argument("tensor basis too large");
    }
  }
  int component(long flat, int axis) const {
    long stride = 1;
    for (int a = axes - 1; a > axis; --a) stride *= per_axis;
    return static_cast<int>((flat / stride) % per_axis);
  }
};

/// Hamiltonian of -(hbar^2/2) lap + V in the tensor oscillator basis. Every
/// monomial of V enters through exact per-axis ladder matrices, so the only
/// error source of the reference spectrum is the basis truncation itself.
inline Eigen::MatrixXd build_hamiltonian(const wk::PotentialSpec& pot,
                                         const BasisSpec& basis) {
  basis.validate();
  const auto& s = pot.space;
  const int n = s.n;
  TensorIndexer idx(n, basis.size);
  if (idx.total > 4096)
    throw std::invalid_argument("tensor basis dimension above the dense-solver guard");

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(idx.total, idx.total);

  std::vector<long> stride(n, 1);
  for (int a = n - 2; a >= 0; --a) stride[a] = stride[a + 1] * basis.size;

  Eigen::MatrixXd t1 = kinetic_matrix(basis.size, basis.hbar, basis.omega);
  for (long row = 0; row < idx.total; ++row) {
    for (int a = 0; a < n; ++a) {
      int ra = idx.component(row, a);
      for (int ca = 0; ca < basis.size; ++ca) {
        if (t1(ra, ca) == 0.0) continue;
        long col = row + static_cast<long>(ca - ra) * stride[a];
        h(row, col) += t1(ra, ca);
      }
    }
  }

  std::vector<Eigen::MatrixXd> xpow_cache;
  for (const auto& [e, c] : pot.V.terms()) {
    if (!c.is_real())
      throw std::invalid_argument("potential coefficients must be real");
    double coeff = poly::to_double(c.re);
    std::vector<const Eigen::MatrixXd*> mats(n, nullptr);
    std::vector<Eigen::MatrixXd> local;
    local.reserve(n);
    for (int a = 0; a < n; ++a) {
      local.push_back(position_power(basis.size, e[s.x(a)], basis.hbar, basis.omega));
      mats[a] = &local.back();
    }
    for (long row = 0; row < idx.total; ++row)
      for (long col = 0; col < idx.total; ++col) {
        double v = coeff;
        for (int a = 0; a < n && v != 0.0; ++a)
          v *= (*mats[a])(idx.component(row, a), idx.component(col, a));
        if (v != 0.0) h(row, col) += v;
      }
  }

  return h;
}

/// Basis-frequency default: minimize the basis-trace of H over a log scan,
/// balancing kinetic against potential spread. Overridable by the caller.
inline double suggest_omega(const wk::PotentialSpec& pot, int m_basis, double hbar) {
  const auto& s = pot.space;
  double best_omega = 1.0, best_trace = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 160; ++k) {
    double omega = 0.05 * std::pow(400.0, k / 160.0);  // 0.05 .. 20
    double tr = 0.0;
    Eigen::MatrixXd t1 = kinetic_matrix(m_basis, hbar, omega);
    tr += s.n * t1.trace() * std::pow(static_cast<double>(m_basis), s.n - 1);
    for (const auto& [e, c] : pot.V.terms()) {
      double term = poly::to_double(c.re);
      for (int a = 0; a < s.n; ++a) {
        Eigen::MatrixXd xp = position_power(m_basis, e[s.x(a)], hbar, omega);
        term *= xp.trace();
      }
      tr += term;
    }
    if (tr < best_trace) {
      best_trace = tr;
      best_omega = omega;
    }
  }
  return best_omega;
}

}  // namespace wkx::spectral
