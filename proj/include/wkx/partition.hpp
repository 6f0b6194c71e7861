#pragma once

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "wkx/gaussian_moments.hpp"
#include "wkx/quadrature.hpp"
#include "wkx/wk_series.hpp"

namespace wkx::psint {

using wk::WKSeries;

/// Strictly increasing positive evaluation times.
struct TGrid {
  std::vector<double> ts;

  static TGrid linear(double tmin, double tmax, int count) {
    return build(tmin, tmax, count, false);
  }
  static TGrid logspace(double tmin, double tmax, int count) {
    return build(tmin, tmax, count, true);
  }
  static TGrid single(double t) { return build(t, t, 1, false); }

 private:
  static TGrid build(double tmin, double tmax, int count, bool log_scale) {
    if (!(tmin > 0)) throw std::invalid_argument("t grid must be positive");
    if (count < 1) throw std::invalid_argument("t grid needs at least one point");
    if (count > 1 && !(tmax > tmin))
      throw std::invalid_argument("t grid must be increasing");
    TGrid g;
    g.ts.reserve(count);
    for (int i = 0; i < count; ++i) {
      double u = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      g.ts.push_back(log_scale ? tmin * std::pow(tmax / tmin, u)
                               : tmin + (tmax - tmin) * u);
    }
    return g;
  }
};

/// Per-order partition-function contributions on a t grid:
///   Z_k(t) = (2 pi hbar)^{-n} * Integral dx (momentum moment of W_k)(x,t) e^{-tV}
/// and their hbar-weighted sum.
struct ZSeries {
  std::string potential_hash;
  std::string domain;
  double hbar = 1.0;
  int order = 0;
  TGrid grid;
  std::vector<std::vector<double>> zk;  // [k][t index]
  std::vector<double> zsum;             // [t index]
};

inline ZSeries assemble_Z(const WKSeries& series, double hbar, const TGrid& grid,
                          const SpatialDomain& domain) {
  if (!(hbar > 0)) throw std::invalid_argument("hbar must be positive");
  const auto& pot = series.potential;
  const int n = pot.space.n;
  const int K = series.order;
  const double measure = std::pow(2.0 * std::numbers::pi * hbar, -n);

  ZSeries z;
  z.potential_hash = poly::poly_hash(pot.V);
  z.domain = domain.describe();
  z.hbar = hbar;
  z.order = K;
  z.grid = grid;
  z.zk.assign(K + 1, std::vector<double>(grid.ts.size(), 0.0));
  z.zsum.assign(grid.ts.size(), 0.0);

  for (int k = 0; k <= K; ++k) {
    PhaseSpaceMoment mom = gaussian_p_moments(series.terms[k]);
    if (mom.num.is_zero()) continue;  // odd orders vanish identically
    for (std::size_t i = 0; i < grid.ts.size(); ++i) {
      double t = grid.ts[i];
      double pref = measure * std::pow(2.0 * std::numbers::pi / t, 0.5 * n) *
                    std::pow(t, -mom.t_denom_pow);
      z.zk[k][i] = pref * spatial_integral(mom.num, pot, t, domain);
    }
  }

  for (std::size_t i = 0; i < grid.ts.size(); ++i) {
    double acc = 0.0, hk = 1.0;
    for (int k = 0; k <= K; ++k) {
      acc += hk * z.zk[k][i];
      hk *= hbar;
    }
    z.zsum[i] = acc;
    // odd orders are killed by the momentum parity of W_k before any
    // quadrature runs; anything visible here is a defect, not noise
    for (int k = 1; k <= K; k += 2)
      if (std::abs(z.zk[k][i]) > 1e-10 * std::abs(z.zk[0][i]))
        throw std::logic_error("odd-order contribution did not vanish");
  }
  return z;
}

/// Classical phase-space term: the order-zero assembly.
inline std::vector<double> thomas_fermi(const wk::PotentialSpec& pot,
                                        const TGrid& grid, double hbar,
                                        const SpatialDomain& domain) {
  return assemble_Z(wk::wk_recursion(pot, 0), hbar, grid, domain).zsum;
}

inline std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV with a '#' metadata line; column layout t, Z0..ZK, Zsum [, Zexact].
inline void write_csv(std::ostream& os, const ZSeries& z,
                      const std::vector<double>* z_exact = nullptr) {
  os << "# potential=" << z.potential_hash << " hbar=" << format_g17(z.hbar)
     << " domain=" << z.domain << " order=" << z.order << "\n";
  os << "t";
  for (int k = 0; k <= z.order; ++k) os << ",Z" << k;
  os << ",Zsum";
  if (z_exact) os << ",Zexact";
  os << "\n";
  for (std::size_t i = 0; i < z.grid.ts.size(); ++i) {
    os << format_g17(z.grid.ts[i]);
    for (int k = 0; k <= z.order; ++k) os << "," << format_g17(z.zk[k][i]);
    os << "," << format_g17(z.zsum[i]);
    if (z_exact) os << "," << format_g17((*z_exact)[i]);
    os << "\n";
  }
}

}  // namespace wkx::psint
