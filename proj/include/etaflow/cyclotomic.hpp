#pragma once

// Exact arithmetic in the cyclotomic field Q(zeta_M), zeta_M = exp(2 pi i / M).
// Elements carry their own order M and are promoted to lcm orders on mixing,
// so constants (order 1), i (order 4) and roots of unity combine freely.

#include "etaflow/scalar.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <mutex>
#include <numeric>
#include <vector>

namespace etaflow {

namespace detail {

using QPoly = std::vector<mpq_class>; // coefficient of x^k at index k

inline void trim(QPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline std::vector<mpz_class> divide_monic(std::vector<mpz_class> poly, const std::vector<mpz_class>& divisor) {
  std::vector<mpz_class> quotient(poly.size() - divisor.size() + 1, 0);
  for (std::size_t k = quotient.size(); k-- > 0;) {
    quotient[k] = poly[k + divisor.size() - 1];
    for (std::size_t j = 0; j < divisor.size(); ++j) poly[k + j] -= quotient[k] * divisor[j];
  }
  return quotient;
}

inline const std::vector<mpz_class>& cyclotomic_unlocked(int order, std::map<int, std::vector<mpz_class>>& cache) {
  if (auto it = cache.find(order); it != cache.end()) return it->second;
  // x^M - 1 divided by every Phi_d with d | M, d < M
  std::vector<mpz_class> poly(static_cast<std::size_t>(order) + 1, 0);
  poly[0] = -1;
  poly[static_cast<std::size_t>(order)] = 1;
  for (int d = 1; d < order; ++d)
    if (order % d == 0) poly = divide_monic(poly, cyclotomic_unlocked(d, cache));
  return cache.emplace(order, std::move(poly)).first->second;
}

/// Integer coefficients of the M-th cyclotomic polynomial.
inline const std::vector<mpz_class>& cyclotomic_polynomial(int order) {
  static std::mutex mutex;
  static std::map<int, std::vector<mpz_class>> cache;
  std::lock_guard lock(mutex);
  return cyclotomic_unlocked(order, cache);
}

inline std::size_t totient_degree(int order) { return cyclotomic_polynomial(order).size() - 1; }

/// Reduces an arbitrary polynomial in zeta modulo zeta^M = 1 and Phi_M.
inline QPoly reduce_cyclotomic(const QPoly& p, int order) {
  const auto& phi = cyclotomic_polynomial(order);
  const std::size_t degree = phi.size() - 1;
  QPoly folded(static_cast<std::size_t>(order), 0);
  for (std::size_t k = 0; k < p.size(); ++k) folded[k % static_cast<std::size_t>(order)] += p[k];
  for (std::size_t k = folded.size(); k-- > degree;) {
    if (folded[k] == 0) continue;
    mpq_class c = folded[k];
    for (std::size_t j = 0; j <= degree; ++j) folded[k - degree + j] -= c * phi[j];
  }
  folded.resize(degree, 0);
  return folded;
}

inline QPoly poly_mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// Division with remainder over Q.
inline std::pair<QPoly, QPoly> poly_divmod(QPoly a, QPoly b) {
  trim(a);
  trim(b);
  if (b.empty()) fail(ErrorCode::IndistinguishableFromZero, "polynomial division by zero");
  if (a.size() < b.size()) return {QPoly{}, a};
  QPoly q(a.size() - b.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    q[k] = a[k + b.size() - 1] / b.back();
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= q[k] * b[j];
  }
  trim(a);
  return {q, a};
}

inline QPoly poly_sub(const QPoly& a, const QPoly& b) {
  QPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
  trim(out);
  return out;
}

} // namespace detail

class Cyclotomic {
public:
  Cyclotomic() : order_(1), coeffs_{mpq_class(0)} {}
  Cyclotomic(long v) : order_(1), coeffs_{mpq_class(v)} {} // NOLINT(google-explicit-constructor)
  explicit Cyclotomic(const mpq_class& q) : order_(1), coeffs_{q} {}
  Cyclotomic(int order, detail::QPoly coeffs) : order_(order), coeffs_(detail::reduce_cyclotomic(coeffs, order)) {}

  /// zeta_M^k
  static Cyclotomic root_of_unity(long k, int order) {
    require(order >= 1, ErrorCode::InvalidArgument, "root of unity order must be positive");
    long e = ((k % order) + order) % order;
    detail::QPoly p(static_cast<std::size_t>(e) + 1, 0);
    p[static_cast<std::size_t>(e)] = 1;
    return {order, p};
  }

  int order() const { return order_; }
  const detail::QPoly& coefficients() const { return coeffs_; }

  Cyclotomic promoted(int order) const {
    if (order == order_) return *this;
    require(order % order_ == 0, ErrorCode::BackendMismatch, "cyclotomic orders are incompatible");
    int step = order / order_;
    detail::QPoly p(coeffs_.size() * static_cast<std::size_t>(step) + 1, 0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) p[k * static_cast<std::size_t>(step)] = coeffs_[k];
    return {order, p};
  }

  bool is_zero() const {
    for (const auto& c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  Cyclotomic conj() const {
    detail::QPoly p(static_cast<std::size_t>(order_), 0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      p[(static_cast<std::size_t>(order_) - k) % static_cast<std::size_t>(order_)] += coeffs_[k];
    return {order_, p};
  }

  Cyclotomic inverse() const {
    require(!is_zero(), ErrorCode::IndistinguishableFromZero, "inverse of zero in cyclotomic field");
    if (order_ <= 2) return Cyclotomic(mpq_class(1) / coeffs_[0]);
    // extended Euclid: find s with s * a = 1 mod Phi
    const auto& phi_z = detail::cyclotomic_polynomial(order_);
    detail::QPoly phi(phi_z.begin(), phi_z.end());
    detail::QPoly r0 = phi, r1 = coeffs_;
    detail::trim(r1);
    detail::QPoly s0{}, s1{mpq_class(1)};
    while (!r1.empty()) {
      auto [q, r] = detail::poly_divmod(r0, r1);
      detail::QPoly s2 = detail::poly_sub(s0, detail::poly_mul(q, s1));
      r0 = r1;
      r1 = r;
      s0 = s1;
      s1 = s2;
    }
    // r0 is a nonzero constant since Phi is irreducible
    mpq_class c = r0.at(0);
    for (auto& v : s0) v /= c;
    return {order_, s0};
  }

  /// Numerical value, used only for sign decisions and reporting.
  template <class Real> std::pair<Real, Real> evaluate() const {
    const Real two_pi = Real(2) * boost::math::constants::pi<Real>();
    Real re = 0, im = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      Real c = Real(coeffs_[k].get_num().get_str()) / Real(coeffs_[k].get_den().get_str());
      Real angle = two_pi * Real(static_cast<long>(k)) / Real(order_);
      re += c * cos(angle);
      im += c * sin(angle);
    }
    return {re, im};
  }

  friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b) {
    int m = std::lcm(a.order_, b.order_);
    auto x = a.promoted(m), y = b.promoted(m);
    detail::QPoly p(std::max(x.coeffs_.size(), y.coeffs_.size()), 0);
    for (std::size_t k = 0; k < x.coeffs_.size(); ++k) p[k] += x.coeffs_[k];
    for (std::size_t k = 0; k < y.coeffs_.size(); ++k) p[k] += y.coeffs_[k];
    return {m, p};
  }
  Cyclotomic operator-() const {
    auto p = coeffs_;
    for (auto& c : p) c = -c;
    return {order_, p};
  }
  friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }
  friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
    int m = std::lcm(a.order_, b.order_);
    auto x = a.promoted(m), y = b.promoted(m);
    return {m, detail::poly_mul(x.coeffs_, y.coeffs_)};
  }
  friend Cyclotomic operator/(const Cyclotomic& a, const Cyclotomic& b) { return a * b.inverse(); }
  Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
  Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
  Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }
  Cyclotomic& operator/=(const Cyclotomic& b) { return *this = *this / b; }
  friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) { return (a - b).is_zero(); }

private:
  int order_;
  detail::QPoly coeffs_;
};

template <> struct field_traits<Cyclotomic> {
  using Real = boost::multiprecision::cpp_bin_float_50;
  static constexpr bool exact = true;
  static constexpr BackendKind kind = BackendKind::ExactCyclotomic;
  static Cyclotomic zero() { return {}; }
  static Cyclotomic one() { return {1}; }
  static Cyclotomic imag_unit() { return Cyclotomic::root_of_unity(1, 4); }
  static Cyclotomic from_rational(const mpq_class& q) { return Cyclotomic(q); }
  static Cyclotomic from_parts(const mpq_class& re, const mpq_class& im) {
    return Cyclotomic(re) + Cyclotomic(im) * imag_unit();
  }
  static bool is_zero(const Cyclotomic& x, double /*scale*/ = 1.0) { return x.is_zero(); }
  static Cyclotomic conj(const Cyclotomic& x) { return x.conj(); }
  static double magnitude(const Cyclotomic& x) {
    auto [re, im] = x.evaluate<Real>();
    return static_cast<double>(sqrt(re * re + im * im));
  }
  /// The element is exactly nonzero here, so 50 digits decide the sign unless
  /// the value is astronomically close to zero, which is reported.
  static int real_sign(const Cyclotomic& x, double /*scale*/ = 1.0) {
    if (x.is_zero()) return 0;
    require(x == x.conj(), ErrorCode::NotHermitian, "expected a real cyclotomic value");
    auto [re, im] = x.evaluate<Real>();
    require(abs(re) > Real("1e-40"), ErrorCode::IndistinguishableFromZero,
            "cyclotomic value too close to zero for a sign decision");
    return re > 0 ? 1 : -1;
  }
  static std::complex<double> to_complex(const Cyclotomic& x) {
    auto [re, im] = x.evaluate<Real>();
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  static std::string to_string(const Cyclotomic& x) {
    auto c = to_complex(x);
    return "(" + std::to_string(c.real()) + (c.imag() < 0 ? "" : "+") + std::to_string(c.imag()) + "i)";
  }
};

} // namespace etaflow
