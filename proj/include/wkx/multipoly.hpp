#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <numeric>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wkx/rational.hpp"

namespace wkx::poly {

/// Phase-space variable layout for n spatial degrees of freedom.
/// Variable order is fixed: x_1..x_n, p_1..p_n, t  (2n+1 variables total).
struct VarSpace {
  int n = 1;

  explicit VarSpace(int dim = 1) : n(dim) {
    if (n < 1) throw std::invalid_argument("VarSpace: dimension must be >= 1");
  }

  int vars() const { return 2 * n + 1; }
  int x(int i) const { return check_axis(i), i; }
  int p(int i) const { return check_axis(i), n + i; }
  int t() const { return 2 * n; }

  std::vector<int> x_vars() const { return range(0, n); }
  std::vector<int> p_vars() const { return range(n, 2 * n); }
  std::vector<int> xp_vars() const { return range(0, 2 * n); }

  std::string var_name(int v) const {
    if (v < n) return "x" + std::to_string(v + 1);
    if (v < 2 * n) return "p" + std::to_string(v - n + 1);
    return "t";
  }

  friend bool operator==(const VarSpace& a, const VarSpace& b) { return a.n == b.n; }
  friend bool operator!=(const VarSpace& a, const VarSpace& b) { return a.n != b.n; }

 private:
  void check_axis(int i) const {
    if (i < 0 || i >= n) throw std::out_of_range("VarSpace: axis out of range");
  }
  static std::vector<int> range(int lo, int hi) {
    std::vector<int> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
  }
};

using ExpVec = std::vector<int>;

/// Graded-lexicographic term order: lower total degree first, ties broken
/// lexicographically on the exponent vector. This is the canonical order for
/// serialization and golden files.
struct GradedLexLess {
  bool operator()(const ExpVec& a, const ExpVec& b) const {
    long da = std::accumulate(a.begin(), a.end(), 0L);
    long db = std::accumulate(b.begin(), b.end(), 0L);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
  }
};

/// Sparse multivariate polynomial over complex rationals.
/// Stored zero coefficients are never kept; values are immutable in spirit --
/// every operation returns a fresh polynomial.
class MultiPoly {
 public:
  using TermMap = std::map<ExpVec, CRational, GradedLexLess>;

  explicit MultiPoly(VarSpace space) : space_(space) {}

  static MultiPoly zero(VarSpace space) { return MultiPoly(space); }

  static MultiPoly constant(VarSpace space, CRational c) {
    MultiPoly r(space);
    if (!c.is_zero()) r.terms_[ExpVec(space.vars(), 0)] = std::move(c);
    return r;
  }

  static MultiPoly variable(VarSpace space, int var) {
    return monomial(space, unit_exp(space, var), CRational(1));
  }

  static MultiPoly monomial(VarSpace space, ExpVec e, CRational c) {
    if (static_cast<int>(e.size()) != space.vars())
      throw std::invalid_argument("monomial: exponent vector length mismatch");
    for (int v : e)
      if (v < 0) throw std::invalid_argument("monomial: negative exponent");
    MultiPoly r(space);
    if (!c.is_zero()) r.terms_[std::move(e)] = std::move(c);
    return r;
  }

  const VarSpace& space() const { return space_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  CRational coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? CRational() : it->second;
  }

  int degree(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
  }

  int total_degree() const {
    long d = 0;
    for (const auto& [e, c] : terms_)
      d = std::max(d, std::accumulate(e.begin(), e.end(), 0L));
    return static_cast<int>(d);
  }

  bool depends_on(int var) const {
    for (const auto& [e, c] : terms_)
      if (e[var] > 0) return true;
    return false;
  }

  MultiPoly& operator+=(const MultiPoly& o) {
    require_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& o) {
    require_same_space(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

  friend MultiPoly operator-(const MultiPoly& a) {
    MultiPoly r(a.space_);
    for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.require_same_space(b);
    MultiPoly r(a.space_);
    ExpVec e(a.space_.vars());
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (int v = 0; v < a.space_.vars(); ++v) e[v] = ea[v] + eb[v];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }

  friend MultiPoly operator*(const MultiPoly& a, const CRational& s) {
    MultiPoly r(a.space_);
    if (s.is_zero()) return r;
    for (const auto& [e, c] : a.terms_) r.terms_[e] = c * s;
    return r;
  }
  friend MultiPoly operator*(const CRational& s, const MultiPoly& a) { return a * s; }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    return a.space_ == b.space_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

  MultiPoly diff(int var) const {
    check_var(var);
    MultiPoly r(space_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      ExpVec d = e;
      d[var] -= 1;
      r.add_term(d, c * CRational(e[var]));
    }
    return r;
  }

  /// Antiderivative in t with zero constant of integration.
  MultiPoly integrate_t() const {
    MultiPoly r(space_);
    int tv = space_.t();
    for (const auto& [e, c] : terms_) {
      ExpVec d = e;
      d[tv] += 1;
      r.terms_[std::move(d)] = c / CRational(e[tv] + 1);
    }
    return r;
  }

  /// Term-wise evaluation at a real point (length 2n+1), coefficients
  /// converted to double only here. Per-variable power tables keep the
  /// summation order identical to the canonical term order.
  std::complex<double> eval(std::span<const double> point) const {
    if (static_cast<int>(point.size()) != space_.vars())
      throw std::invalid_argument("eval: point length mismatch");
    std::vector<std::vector<double>> pow_table(space_.vars());
    for (int v = 0; v < space_.vars(); ++v) {
      int maxd = degree(v);
      pow_table[v].resize(maxd + 1, 1.0);
      for (int k = 1; k <= maxd; ++k) pow_table[v][k] = pow_table[v][k - 1] * point[v];
    }
    std::complex<double> acc(0.0, 0.0);
    for (const auto& [e, c] : terms_) {
      double m = 1.0;
      for (int v = 0; v < space_.vars(); ++v) m *= pow_table[v][e[v]];
      acc += c.to_complex() * m;
    }
    return acc;
  }

  /// Splits by total parity of the exponents over the given variable subset:
  /// returns (even part, odd part); their sum is the original polynomial.
  std::pair<MultiPoly, MultiPoly> parity_split(const std::vector<int>& vars) const {
    MultiPoly even(space_), odd(space_);
    for (const auto& [e, c] : terms_) {
      long s = 0;
      for (int v : vars) {
        check_var(v);
        s += e[v];
      }
      (s % 2 == 0 ? even : odd).terms_[e] = c;
    }
    return {even, odd};
  }

  /// Canonical text form: one term per line,
  ///   re_num/re_den im_num/im_den e_1 e_2 ... e_{2n+1}
  /// in graded-lex order. The zero polynomial serializes to the empty string.
  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [e, c] : terms_) {
      os << rational_str(c.re) << ' ' << rational_str(c.im);
      for (int v : e) os << ' ' << v;
      os << '\n';
    }
    return os.str();
  }

  static MultiPoly parse(const std::string& text, VarSpace space) {
    MultiPoly r(space);
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      std::istringstream ls(line);
      std::string re_s, im_s;
      if (!(ls >> re_s >> im_s))
        throw std::invalid_argument("MultiPoly::parse: malformed line: " + line);
      ExpVec e(space.vars());
      for (int v = 0; v < space.vars(); ++v)
        if (!(ls >> e[v]))
          throw std::invalid_argument("MultiPoly::parse: missing exponent: " + line);
      int extra;
      if (ls >> extra)
        throw std::invalid_argument("MultiPoly::parse: too many exponents: " + line);
      r.add_term(e, CRational(parse_rational(re_s), parse_rational(im_s)));
    }
    return r;
  }

  std::string pretty() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << rational_str(c.re);
      if (c.im != 0) os << (c.im > 0 ? "+" : "") << rational_str(c.im) << "i";
      os << ")";
      for (int v = 0; v < space_.vars(); ++v)
        if (e[v] > 0) {
          os << "*" << space_.var_name(v);
          if (e[v] > 1) os << "^" << e[v];
        }
    }
    return os.str();
  }

 private:
  VarSpace space_;
  TermMap terms_;

  static ExpVec unit_exp(const VarSpace& space, int var) {
    if (var < 0 || var >= space.vars())
      throw std::out_of_range("variable index out of range");
    ExpVec e(space.vars(), 0);
    e[var] = 1;
    return e;
  }

  void check_var(int var) const {
    if (var < 0 || var >= space_.vars())
      throw std::out_of_range("variable index out of range");
  }

  void require_same_space(const MultiPoly& o) const {
    if (space_ != o.space_)
      throw std::invalid_argument("MultiPoly: dimension mismatch");
  }

  void add_term(const ExpVec& e, CRational c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, std::move(c));
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
};

/// FNV-1a hash of the canonical serialization; identifies a potential in
/// CSV/JSON metadata.
inline std::string poly_hash(const MultiPoly& f) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : f.serialize()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace wkx::poly
