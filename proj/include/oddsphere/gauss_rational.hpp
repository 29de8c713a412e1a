#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <optional>
#include <ostream>
#include <string>

#include "oddsphere/error.hpp"

namespace oddsphere {

using Rational = mpq_class;

/// Exact complex rational p + q i.
struct GaussRational {
  Rational re{0};
  Rational im{0};

  GaussRational() = default;
  GaussRational(long v) : re(v) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  GaussRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  bool is_real() const { return sgn(im) == 0; }
  Rational norm() const { return re * re + im * im; }
  GaussRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {re.get_d(), im.get_d()}; }

  GaussRational& operator+=(const GaussRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  GaussRational& operator-=(const GaussRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  GaussRational& operator*=(const GaussRational& o) {
    Rational r = re * o.re - im * o.im;
    Rational i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
  }
  GaussRational& operator/=(const GaussRational& o) {
    Rational n = o.norm();
    if (sgn(n) == 0) throw InputError("division by zero Gaussian rational");
    *this *= o.conj();
    re /= n;
    im /= n;
    return *this;
  }
  GaussRational operator-() const { return {-re, -im}; }

  friend GaussRational operator+(GaussRational a, const GaussRational& b) { return a += b; }
  friend GaussRational operator-(GaussRational a, const GaussRational& b) { return a -= b; }
  friend GaussRational operator*(GaussRational a, const GaussRational& b) { return a *= b; }
  friend GaussRational operator/(GaussRational a, const GaussRational& b) { return a /= b; }
  friend bool operator==(const GaussRational& a, const GaussRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Exact conversion of a finite double to a rational (every double is dyadic).
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw InputError("non-finite coefficient cannot be made exact");
  Rational r(v);
  r.canonicalize();
  return r;
}

inline GaussRational exact_from_complex(std::complex<double> c) {
  return {rational_from_double(c.real()), rational_from_double(c.imag())};
}

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& r) { return r.get_str(); }

/// Parses "p", "p/q", or a finite decimal like "-1.25e-3" exactly.
inline std::optional<Rational> parse_rational(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text.find('/') != std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0) return std::nullopt;
    if (sgn(r.get_den()) == 0) return std::nullopt;
    r.canonicalize();
    return r;
  }
  std::size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') neg = text[pos++] == '-';
  mpz_class digits = 0;
  long exponent = 0;
  bool any = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits = digits * 10 + (text[pos++] - '0');
    any = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits = digits * 10 + (text[pos++] - '0');
      --exponent;
      any = true;
    }
  }
  if (!any) return std::nullopt;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      return std::nullopt;
    }
    if (used == 0) return std::nullopt;
    pos += used;
    exponent += e;
  }
  if (pos != text.size()) return std::nullopt;
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational r = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

inline bool is_perfect_square(const Rational& r) {
  return sgn(r) >= 0 && mpz_perfect_square_p(r.get_num_mpz_t()) != 0 &&
         mpz_perfect_square_p(r.get_den_mpz_t()) != 0;
}

/// Square root of a perfect-square rational.
inline Rational exact_sqrt(const Rational& r) {
  ensure(is_perfect_square(r), "exact_sqrt of a non-square rational");
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  return Rational(n, d);
}

inline std::ostream& operator<<(std::ostream& os, const GaussRational& z) {
  os << z.re.get_str();
  if (!z.is_real()) os << (sgn(z.im) < 0 ? "-" : "+") << Rational(abs(z.im)).get_str() << "i";
  return os;
}

/// Uniform access to the two coefficient fields a Polynomial can carry.
template <class C>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussRational> {
  static constexpr bool exact = true;
  static bool is_zero(const GaussRational& c) { return c.is_zero(); }
  static GaussRational conj(const GaussRational& c) { return c.conj(); }
  static std::complex<double> to_complex(const GaussRational& c) { return c.to_complex(); }
  static double abs(const GaussRational& c) { return std::abs(c.to_complex()); }
  static GaussRational from_int(long v) { return GaussRational(v); }
};

template <>
struct ScalarTraits<std::complex<double>> {
  static constexpr bool exact = false;
  static bool is_zero(const std::complex<double>& c) { return c == std::complex<double>(0.0); }
  static std::complex<double> conj(const std::complex<double>& c) { return std::conj(c); }
  static std::complex<double> to_complex(const std::complex<double>& c) { return c; }
  static double abs(const std::complex<double>& c) { return std::abs(c); }
  static std::complex<double> from_int(long v) { return {static_cast<double>(v), 0.0}; }
};

}  // namespace oddsphere
