#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "wkx/spectrum.hpp"

namespace wkx::momentum {

using poly::CRational;
using poly::Rational;
using spectral::Spectrum;

/// The Fourier transform of a polynomial potential acts under the momentum
/// integral as a sum of derivative-of-delta terms: each monomial c x^alpha
/// becomes c (i hbar)^{|alpha|} d^alpha_{p'} applied to the delta kernel.
/// The stored coefficient absorbs i^{|alpha|}; the hbar power is kept as an
/// integer and always equals |alpha|.
struct DeltaDerivTerm {
  CRational coeff;
  int hbar_power = 0;
  std::vector<int> alpha;  // derivative multi-index over p'
};

struct DeltaDerivOperator {
  int dim = 0;
  std::vector<DeltaDerivTerm> terms;
};

inline DeltaDerivOperator fourier_potential(const wk::PotentialSpec& pot) {
  const auto& s = pot.space;
  DeltaDerivOperator op;
  op.dim = s.n;
  for (const auto& [e, c] : pot.V.terms()) {
    DeltaDerivTerm term;
    term.alpha.resize(s.n);
    int total = 0;
    for (int a = 0; a < s.n; ++a) {
      term.alpha[a] = e[s.x(a)];
      total += e[s.x(a)];
    }
    term.hbar_power = total;  // |alpha| by construction
    term.coeff = c * poly::i_power(total);
    op.terms.push_back(std::move(term));
  }
  return op;
}

/// Order in hbar carried by a single potential insertion in the perturbative
/// momentum-space solution: the minimal total degree of V's monomials.
inline int first_correction_order(const wk::PotentialSpec& pot) {
  if (pot.V.is_zero())
    throw std::invalid_argument("first_correction_order: zero potential");
  DeltaDerivOperator op = fourier_potential(pot);
  int best = op.terms.front().hbar_power;
  for (const auto& t : op.terms) best = std::min(best, t.hbar_power);
  return best;
}

/// Uniform tensor grid of momentum points in [-pmax, pmax]^n.
struct PGrid {
  int dim = 1;
  std::vector<double> axis;  // shared per-axis nodes
  double step = 0.0;

  static PGrid uniform(int n, double pmax, int count) {
    if (count < 2) throw std::invalid_argument("momentum grid needs >= 2 points");
    PGrid g;
    g.dim = n;
    g.axis.resize(count);
    g.step = 2.0 * pmax / (count - 1);
    for (int i = 0; i < count; ++i) g.axis[i] = -pmax + g.step * i;
    return g;
  }

  long total() const {
    long t = 1;
    for (int a = 0; a < dim; ++a) t *= static_cast<long>(axis.size());
    return t;
  }
  int component(long flat, int a) const {
    long stride = 1;
    for (int b = dim - 1; b > a; --b) stride *= static_cast<long>(axis.size());
    return static_cast<int>((flat / stride) % axis.size());
  }
  std::vector<double> point(long flat) const {
    std::vector<double> p(dim);
    for (int a = 0; a < dim; ++a) p[a] = axis[component(flat, a)];
    return p;
  }
};

/// Kernel matrix elements of the imaginary-time propagator between momentum
/// states, sampled on a grid for a list of times. Hermitian with a real
/// positive diagonal; the trace times the grid cell volume approximates the
/// partition function.
struct MomentumBlochMatrix {
  PGrid grid;
  std::vector<double> ts;
  std::vector<Eigen::MatrixXcd> a;  // one matrix per t
};

namespace detail {

/// Normalized oscillator eigenfunctions evaluated in the momentum
/// representation. They are Fourier eigenfunctions with eigenvalue (-i)^m,
/// so the m-th function is (-i)^m times the position-space profile with the
/// inverse width: value_m(q) = (hbar*Omega)^{-1/4} htilde_m(q/sqrt(hbar*Omega)).
inline std::vector<double> hermite_column(int m_max, double xi) {
  std::vector<double> h(m_max);
  double pi4 = std::pow(std::numbers::pi, -0.25);
  h[0] = pi4 * std::exp(-0.5 * xi * xi);
  if (m_max > 1) h[1] = std::sqrt(2.0) * xi * h[0];
  for (int m = 2; m < m_max; ++m)
    h[m] = std::sqrt(2.0 / m) * xi * h[m - 1] -
           std::sqrt((m - 1.0) / m) * h[m - 2];
  return h;
}

}  // namespace detail

inline MomentumBlochMatrix bloch_matrix_from_spectrum(const Spectrum& spec,
                                                      const PGrid& grid,
                                                      const std::vector<double>& ts,
                                                      double rel_tail_tol = 1e-6) {
  if (grid.dim != spec.dim)
    throw std::invalid_argument("grid dimension does not match the spectrum");
  const int n = spec.dim;
  const int m_per_axis = spec.basis.size;
  const double scale = std::sqrt(spec.basis.hbar * spec.basis.omega);
  const long levels = spec.eigenvalues.size();
  const long g_total = grid.total();

  // per-axis oscillator functions at the grid nodes
  std::vector<std::vector<double>> axis_psi(grid.axis.size());
  for (std::size_t i = 0; i < grid.axis.size(); ++i) {
    axis_psi[i] = detail::hermite_column(m_per_axis, grid.axis[i] / scale);
    for (double& v : axis_psi[i]) v /= std::sqrt(scale);
  }

  // momentum-space value of every tensor basis function at every grid point
  spectral::TensorIndexer bidx(n, m_per_axis);
  Eigen::MatrixXcd basis_at(bidx.total, g_total);
  for (long g = 0; g < g_total; ++g) {
    for (long m = 0; m < bidx.total; ++m) {
      double prod = 1.0;
      int mtot = 0;
      for (int a = 0; a < n; ++a) {
        int ma = bidx.component(m, a);
        prod *= axis_psi[grid.component(g, a)][ma];
        mtot += ma;
      }
      basis_at(m, g) = poly::i_power(-mtot).to_complex() * prod;  // (-i)^m phase
    }
  }

  // eigenstates on the grid
  Eigen::MatrixXcd phi(levels, g_total);
  for (long l = 0; l < levels; ++l)
    phi.row(l) = spec.eigenvectors.col(l).cast<std::complex<double>>().transpose() *
                 basis_at;

  MomentumBlochMatrix out;
  out.grid = grid;
  out.ts = ts;
  for (double t : ts) {
    if (!(t > 0)) throw std::invalid_argument("bloch matrix: t must be positive");
    double tail = spectral::spectrum_tail_bound(spec, t);
    double trace_scale = 0.0;
    for (long l = 0; l < levels; ++l) trace_scale += std::exp(-t * spec.eigenvalues[l]);
    if (!(tail <= rel_tail_tol * trace_scale))
      throw spectral::TailBoundExceeded("bloch matrix: tail bound above tolerance");

    Eigen::VectorXd w(levels);
    for (long l = 0; l < levels; ++l) w[l] = std::exp(-t * spec.eigenvalues[l]);

    // explicit upper triangle + conjugate mirror keeps hermiticity exact
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(g_total, g_total);
    for (long i = 0; i < g_total; ++i) {
      for (long j = i; j < g_total; ++j) {
        std::complex<double> acc(0.0, 0.0);
        for (long l = levels - 1; l >= 0; --l)
          acc += w[l] * std::conj(phi(l, i)) * phi(l, j);
        if (i == j) acc = std::complex<double>(acc.real(), 0.0);
        a(i, j) = acc;
        a(j, i) = std::conj(acc);
      }
    }
    out.a.push_back(std::move(a));
  }
  return out;
}

/// Trace sum over the diagonal times the grid cell volume.
inline double bloch_trace(const MomentumBlochMatrix& m, std::size_t t_index) {
  double cell = 1.0;
  for (int a = 0; a < m.grid.dim; ++a) cell *= m.grid.step;
  double acc = 0.0;
  for (long i = 0; i < m.a[t_index].rows(); ++i) acc += m.a[t_index](i, i).real();
  return acc * cell;
}

namespace detail {

/// Central finite-difference weights (offsets -2..2) by derivative order;
/// fourth-order accurate for orders 1 and 2.
inline const double* stencil_weights(int order) {
  static const double w0[5] = {0, 0, 1, 0, 0};
  static const double w1[5] = {1.0 / 12, -2.0 / 3, 0, 2.0 / 3, -1.0 / 12};
  static const double w2[5] = {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
  static const double w3[5] = {-0.5, 1.0, 0, -1.0, 0.5};
  static const double w4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
  switch (order) {
    case 0: return w0;
    case 1: return w1;
    case 2: return w2;
    case 3: return w3;
    case 4: return w4;
    default: throw std::invalid_argument("stencil order above 4 unsupported");
  }
}

}  // namespace detail

/// Residual of the diagonal momentum-space evolution equation
///   d/dt A(p,p;t) + (p^2/2) A(p,p;t) = -sum coeff hbar^k D^alpha_{p'} A|_{p'=p}
/// with d/dt by central differences across the stored t slices and momentum
/// derivatives by central stencils on the grid. Returns the maximum residual
/// over interior points relative to the overall equation scale.
inline double ode_residual_check(const MomentumBlochMatrix& m,
                                 const DeltaDerivOperator& op, double hbar) {
  const PGrid& grid = m.grid;
  const int n = grid.dim;
  const int count = static_cast<int>(grid.axis.size());
  if (m.ts.size() < 3)
    throw std::invalid_argument("ode residual: need at least three t slices");
  if (count < 5) throw std::invalid_argument("ode residual: grid too coarse for stencil");
  for (const auto& term : op.terms)
    for (int d : term.alpha)
      if (d > 4) throw std::invalid_argument("ode residual: stencil order above 4");

  double max_abs = 0.0, scale = 0.0;
  for (std::size_t mid = 1; mid + 1 < m.ts.size(); ++mid) {
    double dt_lo = m.ts[mid] - m.ts[mid - 1], dt_hi = m.ts[mid + 1] - m.ts[mid];
    if (std::abs(dt_lo - dt_hi) > 1e-12 * dt_hi)
      throw std::invalid_argument("ode residual: t slices must be uniform");
    const Eigen::MatrixXcd& a0 = m.a[mid - 1];
    const Eigen::MatrixXcd& a1 = m.a[mid];
    const Eigen::MatrixXcd& a2 = m.a[mid + 1];

    for (long i = 0; i < grid.total(); ++i) {
      bool interior = true;
      for (int ax = 0; ax < n; ++ax) {
        int c = grid.component(i, ax);
        if (c < 2 || c > count - 3) interior = false;
      }
      if (!interior) continue;

      auto p = grid.point(i);
      double p2 = 0.0;
      for (double v : p) p2 += v * v;
      std::complex<double> lhs_dt = (a2(i, i) - a0(i, i)) / (2.0 * dt_lo);
      std::complex<double> lhs_pot = 0.5 * p2 * a1(i, i);

      std::complex<double> rhs(0.0, 0.0);
      for (const auto& term : op.terms) {
        // tensor stencil around the diagonal in the second argument
        std::complex<double> deriv(0.0, 0.0);
        std::vector<int> off(n, -2);
        for (;;) {
          double w = 1.0;
          long j = i;
          for (int ax = 0; ax < n; ++ax) {
            w *= detail::stencil_weights(term.alpha[ax])[off[ax] + 2];
            long stride = 1;
            for (int b = n - 1; b > ax; --b) stride *= count;
            j += static_cast<long>(off[ax]) * stride;
          }
          if (w != 0.0) deriv += w * a1(i, j);
          int ax = 0;
          while (ax < n && ++off[ax] == 3) off[ax++] = -2;
          if (ax == n) break;
        }
        double hpow = std::pow(hbar, term.hbar_power);
        double hstep = 1.0;
        for (int ax = 0; ax < n; ++ax)
          hstep *= std::pow(grid.step, term.alpha[ax]);
        rhs -= term.coeff.to_complex() * hpow * deriv / hstep;
      }

      max_abs = std::max(max_abs, std::abs(lhs_dt + lhs_pot - rhs));
      // normalize by the size of the equation's pieces, not their sum, so a
      // near-cancelling free kernel is not compared against itself
      scale = std::max(scale, std::abs(lhs_dt) + std::abs(lhs_pot) + std::abs(rhs));
    }
  }
  if (scale == 0.0) return max_abs;
  return max_abs / scale;
}

}  // namespace wkx::momentum
