#pragma once

// Coefficient backends. Every algorithm in the library is written against
// field_traits<F>; three fields are provided:
//   GaussianRational      exact Q(i), the default for algebraic invariants
//   std::complex<double>  floating point with a thresholded zero test
//   Cyclotomic            exact Q(zeta_M), see cyclotomic.hpp

#include "etaflow/error.hpp"

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdlib>
#include <string>
#include <string_view>

namespace etaflow {

enum class BackendKind { ExactGaussianRational, ComplexFloat, ExactCyclotomic };

/// Relative threshold for zero tests in the float backend.
/// Set once at start-up (the CLI's --tolerance); read-only afterwards.
inline double float_tolerance = 1e-9;

/// Parses "3", "-3/7", "0.25", "1.5e-3" into an exact rational.
inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto strip = [](std::string& x) {
    while (!x.empty() && std::isspace(static_cast<unsigned char>(x.front()))) x.erase(x.begin());
    while (!x.empty() && std::isspace(static_cast<unsigned char>(x.back()))) x.pop_back();
  };
  strip(s);
  if (s.empty()) fail(ErrorCode::ParseError, "empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpq_class num = parse_rational(s.substr(0, slash));
    mpq_class den = parse_rational(s.substr(slash + 1));
    if (den == 0) fail(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    mpq_class q = num / den;
    q.canonicalize();
    return q;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  mpz_class mantissa = 0;
  long scale = 0;
  bool any_digit = false;
  bool after_point = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mantissa = mantissa * 10 + (c - '0');
      if (after_point) --scale;
      any_digit = true;
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) fail(ErrorCode::ParseError, "not a number: '" + s + "'");
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') fail(ErrorCode::ParseError, "not a number: '" + s + "'");
    std::string exponent = s.substr(pos + 1);
    char* end = nullptr;
    long e = std::strtol(exponent.c_str(), &end, 10);
    if (exponent.empty() || *end != '\0') fail(ErrorCode::ParseError, "bad exponent in '" + s + "'");
    scale += e;
  }
  mpq_class q(mantissa);
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  if (scale < 0) q /= ten_pow;
  else q *= ten_pow;
  q.canonicalize();
  return negative ? mpq_class(-q) : q;
}

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

/// Exact element of Q(i).
struct GaussianRational {
  mpq_class re;
  mpq_class im;

  GaussianRational() : re(0), im(0) {}
  GaussianRational(long r) : re(r), im(0) {} // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
    mpq_class norm = b.re * b.re + b.im * b.im;
    if (norm == 0) fail(ErrorCode::IndistinguishableFromZero, "division by zero");
    return {(a.re * b.re + a.im * b.im) / norm, (a.im * b.re - a.re * b.im) / norm};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
  GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
  GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }
  GaussianRational& operator/=(const GaussianRational& b) { return *this = *this / b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

template <class F> struct field_traits;

template <> struct field_traits<GaussianRational> {
  static constexpr bool exact = true;
  static constexpr BackendKind kind = BackendKind::ExactGaussianRational;
  static GaussianRational zero() { return {}; }
  static GaussianRational one() { return {1}; }
  static GaussianRational imag_unit() { return {mpq_class(0), mpq_class(1)}; }
  static GaussianRational from_rational(const mpq_class& q) { return {q}; }
  static GaussianRational from_parts(const mpq_class& re, const mpq_class& im) { return {re, im}; }
  /// scale is ignored: the exact zero test never rounds.
  static bool is_zero(const GaussianRational& x, double /*scale*/ = 1.0) { return x.re == 0 && x.im == 0; }
  static GaussianRational conj(const GaussianRational& x) { return {x.re, -x.im}; }
  static double magnitude(const GaussianRational& x) {
    return std::hypot(x.re.get_d(), x.im.get_d());
  }
  /// Sign of a real element. Throws on a non-real input.
  static int real_sign(const GaussianRational& x, double /*scale*/ = 1.0) {
    require(x.im == 0, ErrorCode::NotHermitian, "expected a real value, got imaginary part " + x.im.get_str());
    return sgn(x.re);
  }
  static std::complex<double> to_complex(const GaussianRational& x) { return {x.re.get_d(), x.im.get_d()}; }
  static std::string to_string(const GaussianRational& x) {
    if (x.im == 0) return x.re.get_str();
    return "(" + x.re.get_str() + (x.im < 0 ? "" : "+") + x.im.get_str() + "i)";
  }
};

template <> struct field_traits<std::complex<double>> {
  using C = std::complex<double>;
  static constexpr bool exact = false;
  static constexpr BackendKind kind = BackendKind::ComplexFloat;
  static C zero() { return {0.0, 0.0}; }
  static C one() { return {1.0, 0.0}; }
  static C imag_unit() { return {0.0, 1.0}; }
  static C from_rational(const mpq_class& q) { return {q.get_d(), 0.0}; }
  static C from_parts(const mpq_class& re, const mpq_class& im) { return {re.get_d(), im.get_d()}; }
  static bool is_zero(const C& x, double scale = 1.0) {
    return std::abs(x) <= float_tolerance * std::max(scale, 1e-300);
  }
  static C conj(const C& x) { return std::conj(x); }
  static double magnitude(const C& x) { return std::abs(x); }
  static int real_sign(const C& x, double scale = 1.0) {
    if (is_zero(x, scale)) return 0;
    require(std::abs(x.imag()) <= float_tolerance * std::max(scale, std::abs(x)), ErrorCode::NotHermitian,
            "expected a real value");
    return x.real() > 0 ? 1 : -1;
  }
  static C to_complex(const C& x) { return x; }
  static std::string to_string(const C& x) {
    return "(" + std::to_string(x.real()) + (x.imag() < 0 ? "" : "+") + std::to_string(x.imag()) + "i)";
  }
};

/// The operations every backend field supports.
template <class F>
concept Field = requires(F a, F b) {
  { a + b } -> std::convertible_to<F>;
  { a - b } -> std::convertible_to<F>;
  { a * b } -> std::convertible_to<F>;
  { a / b } -> std::convertible_to<F>;
  { field_traits<F>::zero() } -> std::convertible_to<F>;
  { field_traits<F>::is_zero(a) } -> std::convertible_to<bool>;
  { field_traits<F>::conj(a) } -> std::convertible_to<F>;
};

template <class F> F conj(const F& x) { return field_traits<F>::conj(x); }
template <class F> bool is_zero(const F& x, double scale = 1.0) { return field_traits<F>::is_zero(x, scale); }
template <class F> F from_int(long v) { return field_traits<F>::from_rational(mpq_class(v)); }

} // namespace etaflow
