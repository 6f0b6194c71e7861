#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "wkx/potential.hpp"

namespace wkx::psint {

using wk::PotentialSpec;

struct NonIntegrable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ToleranceNotReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Integration region for the spatial factor. Full space requires the weight
/// e^{-tV} to suppress every monomial of the integrand (verified by a ray
/// decay pre-check); channel potentials that are flat along an axis must be
/// boxed explicitly.
struct SpatialDomain {
  enum class Kind { FullSpace, Box };
  Kind kind = Kind::FullSpace;
  std::vector<double> half_widths;  // per axis, Box only
  double rel_tol = 1e-8;
  int max_depth = 40;
  bool prefer_closed_form = true;  // closed Gaussian path for quadratic V

  static SpatialDomain full_space(double tol = 1e-8) {
    SpatialDomain d;
    d.rel_tol = tol;
    return d;
  }
  static SpatialDomain box(std::vector<double> hw, double tol = 1e-8) {
    for (double w : hw)
      if (!(w > 0)) throw std::invalid_argument("box half-widths must be positive");
    SpatialDomain d;
    d.kind = Kind::Box;
    d.half_widths = std::move(hw);
    d.rel_tol = tol;
    return d;
  }

  std::string describe() const {
    if (kind == Kind::FullSpace) return "full-space";
    std::string s = "box[";
    for (std::size_t i = 0; i < half_widths.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(half_widths[i]);
    }
    return s + "]";
  }
};

namespace detail {

// Gauss-Kronrod 7-15 pair on [-1,1]; the zero-padded Gauss weights let one
// tensor sweep accumulate both rules.
inline constexpr int kGK = 15;
inline constexpr double kNodes[kGK] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kWeightsK[kGK] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kWeightsG[kGK] = {
    0.0, 0.129484966168870, 0.0, 0.279705391489277, 0.0,
    0.381830050505119, 0.0, 0.417959183673469, 0.0,
    0.381830050505119, 0.0, 0.279705391489277, 0.0,
    0.129484966168870, 0.0};

struct Cell {
  std::vector<double> lo, hi;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

struct CellOrder {
  bool operator()(const Cell& a, const Cell& b) const { return a.error < b.error; }
};

/// One Gauss-Kronrod tensor sweep over a cell; returns the Kronrod value and
/// |Kronrod - Gauss| as the error estimate.
template <class F>
void integrate_cell(const F& f, Cell& cell, int n) {
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  double sum_k = 0.0, sum_g = 0.0;
  double jac = 1.0;
  for (int a = 0; a < n; ++a) jac *= 0.5 * (cell.hi[a] - cell.lo[a]);
  while (true) {
    double wk = 1.0, wg = 1.0;
    for (int a = 0; a < n; ++a) {
      double u = kNodes[idx[a]];
      x[a] = 0.5 * (cell.lo[a] + cell.hi[a]) + 0.5 * (cell.hi[a] - cell.lo[a]) * u;
      wk *= kWeightsK[idx[a]];
      wg *= kWeightsG[idx[a]];
    }
    double v = f(x);
    sum_k += wk * v;
    if (wg != 0.0) sum_g += wg * v;
    int a = 0;
    while (a < n && ++idx[a] == kGK) idx[a++] = 0;
    if (a == n) break;
  }
  cell.value = jac * sum_k;
  cell.error = jac * std::abs(sum_k - sum_g);
}

/// Globally adaptive dyadic subdivision: always split the worst cell along
/// its widest axis until the summed error estimate meets the tolerance.
template <class F>
double adaptive_integrate(const F& f, const std::vector<double>& lo,
                          const std::vector<double>& hi, double rel_tol,
                          int max_depth) {
  const int n = static_cast<int>(lo.size());
  std::priority_queue<Cell, std::vector<Cell>, CellOrder> heap;
  Cell root{lo, hi, 0.0, 0.0, 0};
  integrate_cell(f, root, n);
  double total = root.value, total_err = root.error;
  heap.push(std::move(root));

  const std::size_t kMaxCells = 200000;
  std::size_t cells = 1;
  while (total_err > rel_tol * std::max(std::abs(total), 1e-300)) {
    if (heap.empty()) break;
    Cell worst = heap.top();
    heap.pop();
    if (worst.depth >= max_depth || cells >= kMaxCells)
      throw ToleranceNotReached("quadrature tolerance not reached (depth/cell budget)");
    int axis = 0;
    double wmax = 0.0;
    for (int a = 0; a < n; ++a)
      if (worst.hi[a] - worst.lo[a] > wmax) {
        wmax = worst.hi[a] - worst.lo[a];
        axis = a;
      }
    double mid = 0.5 * (worst.lo[axis] + worst.hi[axis]);
    total -= worst.value;
    total_err -= worst.error;
    for (int half = 0; half < 2; ++half) {
      Cell c;
      c.lo = worst.lo;
      c.hi = worst.hi;
      (half == 0 ? c.hi : c.lo)[axis] = mid;
      c.depth = worst.depth + 1;
      integrate_cell(f, c, n);
      total += c.value;
      total_err += c.error;
      heap.push(std::move(c));
      ++cells;
    }
  }
  return total;
}

inline const char* kBoxHint =
    " (weight does not decay along some ray; integrate on a finite region "
    "via a box domain, e.g. --box)";

/// Ray decay heuristic for full-space integrability: along every coordinate
/// axis and every diagonal direction, r^{deg} e^{-tV(r u)} must fall below
/// threshold and be non-increasing at large r. Sampling finitely many rays
/// can miss narrow off-axis channels; polynomial even potentials of interest
/// here are monotone along rays, for which the check is sound.
inline void decay_precheck(const poly::MultiPoly& f, const PotentialSpec& pot,
                           double t) {
  const auto& s = pot.space;
  const int n = s.n;
  std::vector<std::vector<double>> rays;
  for (int a = 0; a < n; ++a) {
    std::vector<double> u(n, 0.0);
    u[a] = 1.0;
    rays.push_back(u);
    u[a] = -1.0;
    rays.push_back(u);
  }
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<double> u(n);
    for (int a = 0; a < n; ++a) u[a] = ((mask >> a) & 1) ? -1.0 : 1.0;
    double norm = std::sqrt(static_cast<double>(n));
    for (auto& v : u) v /= norm;
    rays.push_back(u);
  }

  std::vector<long> degrees{0};
  for (const auto& [e, c] : f.terms()) {
    long d = 0;
    for (int a = 0; a < n; ++a) d += e[s.x(a)];
    degrees.push_back(d);
  }

  std::vector<double> pt(s.vars(), 0.0);
  pt[s.t()] = t;
  for (const auto& u : rays) {
    for (long deg : degrees) {
      double first = 0.0, prev = 0.0;
      bool ok = true;
      for (int k = 2; k <= 10; ++k) {  // r = 4 .. 1024
        double r = std::pow(2.0, k);
        for (int a = 0; a < n; ++a) pt[a] = r * u[a];
        double v = pot.V.eval(pt).real();
        double w = std::pow(r, static_cast<double>(deg)) * std::exp(-t * v);
        if (k == 2) first = w;
        if (k > 8 && w > prev) ok = false;  // must decay at the far end
        prev = w;
      }
      if (!ok || !(prev <= 1e-12 * (1.0 + first)))
        throw NonIntegrable("integrand does not decay in full space" +
                            std::string(kBoxHint));
    }
  }
}

/// V as (constant, quadratic form Q) with V = c + x^T Q x / 2, or nullopt if
/// V is not purely quadratic (plus constant).
inline std::optional<std::pair<double, Eigen::MatrixXd>> quadratic_form_of(
    const PotentialSpec& pot) {
  const auto& s = pot.space;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(s.n, s.n);
  double c0 = 0.0;
  for (const auto& [e, c] : pot.V.terms()) {
    if (!c.is_real()) return std::nullopt;
    long d = 0;
    int i = -1, j = -1;
    for (int a = 0; a < s.n; ++a) {
      d += e[s.x(a)];
      if (e[s.x(a)] >= 1 && i < 0) i = a;
      if (e[s.x(a)] >= 1) j = a;
    }
    if (d == 0) {
      c0 = poly::to_double(c.re);
      continue;
    }
    if (d != 2) return std::nullopt;
    double v = poly::to_double(c.re);
    if (i == j || e[s.x(i)] == 2) {
      q(i, i) += 2.0 * v;
    } else {
      q(i, j) += v;
      q(j, i) += v;
    }
  }
  return std::make_pair(c0, q);
}

/// Centered Gaussian moments E[x^beta] by the pairing recursion
/// E[x_i x^gamma] = sum_j Sigma_ij gamma_j E[x^{gamma - e_j}].
inline double gaussian_moment(const Eigen::MatrixXd& sigma, std::vector<int> beta,
                              std::map<std::vector<int>, double>& memo) {
  int i = -1;
  long total = 0;
  for (std::size_t a = 0; a < beta.size(); ++a) {
    total += beta[a];
    if (beta[a] > 0 && i < 0) i = static_cast<int>(a);
  }
  if (total % 2 != 0) return 0.0;
  if (total == 0) return 1.0;
  if (auto it = memo.find(beta); it != memo.end()) return it->second;

  std::vector<int> gamma = beta;
  gamma[i] -= 1;
  double acc = 0.0;
  for (std::size_t j = 0; j < beta.size(); ++j) {
    if (gamma[j] == 0) continue;
    std::vector<int> rest = gamma;
    rest[j] -= 1;
    acc += sigma(i, j) * gamma[j] * gaussian_moment(sigma, rest, memo);
  }
  memo[beta] = acc;
  return acc;
}

}  // namespace detail

/// Integral of f(x, t) e^{-t V(x)} over the spatial domain. f must be free of
/// momentum variables. Positive-definite quadratic potentials on full space
/// take the closed Gaussian path; everything else runs globally adaptive
/// Gauss-Kronrod quadrature to the domain's relative tolerance.
inline double spatial_integral(const poly::MultiPoly& f, const PotentialSpec& pot,
                               double t, const SpatialDomain& domain) {
  const auto& s = pot.space;
  if (f.space() != s) throw std::invalid_argument("spatial_integral: space mismatch");
  for (int a = 0; a < s.n; ++a)
    if (f.depends_on(s.p(a)))
      throw std::invalid_argument("spatial_integral: integrand depends on momenta");
  if (!(t > 0)) throw std::invalid_argument("spatial_integral: t must be positive");

  if (f.is_zero()) return 0.0;

  std::vector<double> lo(s.n), hi(s.n);
  if (domain.kind == SpatialDomain::Kind::Box) {
    if (static_cast<int>(domain.half_widths.size()) != s.n)
      throw std::invalid_argument("box half-widths dimension mismatch");
    for (int a = 0; a < s.n; ++a) {
      hi[a] = domain.half_widths[a];
      lo[a] = -hi[a];
    }
  } else {
    detail::decay_precheck(f, pot, t);

    if (domain.prefer_closed_form) {
      if (auto quad = detail::quadratic_form_of(pot)) {
        const auto& [c0, q] = *quad;
        Eigen::LLT<Eigen::MatrixXd> llt(t * q);
        if (llt.info() == Eigen::Success) {
          Eigen::MatrixXd sigma =
              llt.solve(Eigen::MatrixXd::Identity(s.n, s.n));
          double det_tq = 1.0;
          for (int a = 0; a < s.n; ++a) det_tq *= llt.matrixL()(a, a);
          det_tq *= det_tq;
          double norm = std::exp(-t * c0) *
                        std::sqrt(std::pow(2.0 * std::numbers::pi, s.n) / det_tq);
          std::map<std::vector<int>, double> memo;
          double acc = 0.0;
          for (const auto& [e, c] : f.terms()) {
            std::vector<int> beta(s.n);
            for (int a = 0; a < s.n; ++a) beta[a] = e[s.x(a)];
            acc += poly::to_double(c.re) * std::pow(t, e[s.t()]) *
                   detail::gaussian_moment(sigma, beta, memo);
          }
          return norm * acc;
        }
      }
    }

    // Bounding box from the ray decay: past the returned radius the weight is
    // below 1e-18 of its near-origin scale, so the truncation error is far
    // under the quadrature tolerance.
    long maxdeg = 0;
    for (const auto& [e, c] : f.terms()) {
      long d = 0;
      for (int a = 0; a < s.n; ++a) d += e[s.x(a)];
      maxdeg = std::max(maxdeg, d);
    }
    std::vector<double> pt(s.vars(), 0.0);
    pt[s.t()] = t;
    double radius = 1.0;
    for (;;) {
      bool small_everywhere = true;
      for (int mask = 0; mask < (1 << s.n) && small_everywhere; ++mask) {
        for (int a = 0; a < s.n; ++a)
          pt[a] = radius * (((mask >> a) & 1) ? -1.0 : 1.0) /
                  std::sqrt(static_cast<double>(s.n));
        double w = std::pow(radius, static_cast<double>(maxdeg)) *
                   std::exp(-t * pot.V.eval(pt).real());
        if (w > 1e-18) small_everywhere = false;
      }
      for (int a = 0; a < s.n && small_everywhere; ++a) {
        std::fill(pt.begin(), pt.begin() + s.n, 0.0);
        pt[a] = radius;
        double w = std::pow(radius, static_cast<double>(maxdeg)) *
                   std::exp(-t * pot.V.eval(pt).real());
        if (w > 1e-18) small_everywhere = false;
      }
      if (small_everywhere || radius > 65536.0) break;
      radius *= 2.0;
    }
    if (radius > 65536.0)
      throw NonIntegrable("could not bound the integrand in full space" +
                          std::string(detail::kBoxHint));
    for (int a = 0; a < s.n; ++a) {
      hi[a] = radius;
      lo[a] = -radius;
    }
  }

  std::vector<double> pt(s.vars(), 0.0);
  pt[s.t()] = t;
  auto integrand = [&](const std::vector<double>& x) {
    for (int a = 0; a < s.n; ++a) pt[a] = x[a];
    return f.eval(pt).real() * std::exp(-t * pot.V.eval(pt).real());
  };
  return detail::adaptive_integrate(integrand, lo, hi, domain.rel_tol,
                                    domain.max_depth);
}

}  // namespace wkx::psint
