#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace wkx::poly {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored reduced with positive denominator;
/// zero is canonically 0/1 (both maintained by the boost backend).
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(BigInt num, BigInt den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rational(num, den);
}

inline Rational rational_pow(const Rational& base, int exp) {
  if (exp < 0) {
    if (base == 0) throw std::invalid_argument("0^negative");
    return rational_pow(Rational(1) / base, -exp);
  }
  Rational out(1), b = base;
  while (exp > 0) {
    if (exp & 1) out *= b;
    b *= b;
    exp >>= 1;
  }
  return out;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Parses "a/b", plain integers, and decimal/scientific literals.
/// Decimal literals go through an exact binary double first, so "0.5" is 1/2
/// while "0.1" becomes the exact dyadic the double holds.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    return make_rational(num, den);
  }
  if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
      s.find('E') != std::string::npos) {
    return Rational(std::strtod(s.c_str(), nullptr));
  }
  return Rational(BigInt(s));
}

inline std::string rational_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Complex number with exact rational parts; carries the imaginary unit of
/// the evolution equation through all symbolic manipulation.
struct CRational {
  Rational re{};
  Rational im{};

  CRational() = default;
  CRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design
  CRational(long v) : re(v) {}                 // NOLINT
  CRational(int v) : re(v) {}                  // NOLINT
  CRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static CRational i() { return CRational(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  bool is_imaginary() const { return re == 0; }

  CRational conj() const { return CRational(re, -im); }

  CRational& operator+=(const CRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  CRational& operator-=(const CRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  CRational& operator*=(const CRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  CRational& operator/=(const CRational& o) {
    Rational n = o.re * o.re + o.im * o.im;
    if (n == 0) throw std::invalid_argument("division by zero");
    Rational r = (re * o.re + im * o.im) / n;
    Rational i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }

  friend CRational operator+(CRational a, const CRational& b) { return a += b; }
  friend CRational operator-(CRational a, const CRational& b) { return a -= b; }
  friend CRational operator*(CRational a, const CRational& b) { return a *= b; }
  friend CRational operator/(CRational a, const CRational& b) { return a /= b; }
  friend CRational operator-(CRational a) {
    a.re = -a.re;
    a.im = -a.im;
    return a;
  }
  friend bool operator==(const CRational& a, const CRational& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const CRational& a, const CRational& b) { return !(a == b); }

  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

/// i^k for integer k, used by Fourier phase bookkeeping.
inline CRational i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return CRational(1);
    case 1: return CRational::i();
    case 2: return CRational(-1);
    default: return -CRational::i();
  }
}

}  // namespace wkx::poly
