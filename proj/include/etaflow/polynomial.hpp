#pragma once

// Dense univariate polynomials over a backend field, characteristic
// polynomials, interpolation, and exact real-root counting over Q.

#include "etaflow/linalg.hpp"

#include <vector>

namespace etaflow {

/// Coefficient of x^k at index k; trailing zeros trimmed by normalize().
template <Field F> class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<F> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Poly constant(const F& v) { return Poly(std::vector<F>{v}); }
  static Poly monomial(const F& v, std::size_t k) {
    std::vector<F> c(k + 1, field_traits<F>::zero());
    c[k] = v;
    return Poly(std::move(c));
  }

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  const std::vector<F>& coeffs() const { return c_; }
  F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : field_traits<F>::zero(); }
  F leading() const { return c_.empty() ? field_traits<F>::zero() : c_.back(); }

  /// Index of the lowest nonzero coefficient; -1 for zero.
  long valuation() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!etaflow::is_zero(c_[k])) return static_cast<long>(k);
    return -1;
  }

  F operator()(const F& x) const {
    F acc = field_traits<F>::zero();
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<F> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * from_int<F>(static_cast<long>(k));
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<F> out(std::max(a.c_.size(), b.c_.size()), field_traits<F>::zero());
    for (std::size_t k = 0; k < a.c_.size(); ++k) out[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) out[k] += b.c_[k];
    return Poly(std::move(out));
  }
  Poly operator-() const {
    auto c = c_;
    for (auto& v : c) v = -v;
    return Poly(std::move(c));
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> out(a.c_.size() + b.c_.size() - 1, field_traits<F>::zero());
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    return Poly(std::move(out));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder.
  friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), ErrorCode::IndistinguishableFromZero, "polynomial division by zero");
    if (a.degree() < b.degree()) return {Poly{}, a};
    std::vector<F> rem = a.c_;
    std::vector<F> q(a.c_.size() - b.c_.size() + 1, field_traits<F>::zero());
    F lead_inv = field_traits<F>::one() / b.leading();
    for (std::size_t k = q.size(); k-- > 0;) {
      q[k] = rem[k + b.c_.size() - 1] * lead_inv;
      for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= q[k] * b.c_[j];
    }
    return {Poly(std::move(q)), Poly(std::move(rem))};
  }

private:
  void normalize() {
    while (!c_.empty() && etaflow::is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

template <Field F> Poly<F> poly_gcd(Poly<F> a, Poly<F> b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  if (a.is_zero()) return a;
  F inv = field_traits<F>::one() / a.leading();
  return a * Poly<F>::constant(inv);
}

/// det(x I - A) by the Faddeev-LeVerrier recurrence (exact over Q(i)).
template <Field F> Poly<F> characteristic_polynomial(const Mat<F>& a) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  std::vector<F> c(n + 1, field_traits<F>::zero());
  c[n] = field_traits<F>::one();
  Mat<F> m = zeros<F>(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m;
    for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
    Mat<F> am = a * m;
    F trace = field_traits<F>::zero();
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / from_int<F>(static_cast<long>(k));
  }
  return Poly<F>(std::move(c));
}

/// Lagrange interpolation through (xs[k], ys[k]) with distinct nodes.
template <Field F> Poly<F> interpolate(const std::vector<F>& xs, const std::vector<F>& ys) {
  require(xs.size() == ys.size(), ErrorCode::DimensionMismatch, "interpolation node count");
  Poly<F> result;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Poly<F> basis = Poly<F>::constant(field_traits<F>::one());
    F denom = field_traits<F>::one();
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (i == j) continue;
      basis = basis * Poly<F>(std::vector<F>{-xs[j], field_traits<F>::one()});
      denom *= xs[i] - xs[j];
    }
    result = result + basis * Poly<F>::constant(ys[i] / denom);
  }
  return result;
}

// ---- exact real roots over Q ----------------------------------------------

using QPolynomial = std::vector<mpq_class>;

namespace detail {

inline Poly<GaussianRational> to_gaussian(const QPolynomial& p) {
  std::vector<GaussianRational> c;
  c.reserve(p.size());
  for (const auto& v : p) c.emplace_back(v);
  return Poly<GaussianRational>(std::move(c));
}

inline int sign_at(const Poly<GaussianRational>& p, const mpq_class& x) { return sgn(p(GaussianRational(x)).re); }

inline int sign_at_infinity(const Poly<GaussianRational>& p, int direction) {
  if (p.is_zero()) return 0;
  int s = sgn(p.leading().re);
  return (direction < 0 && p.degree() % 2 == 1) ? -s : s;
}

} // namespace detail

/// Number of distinct real roots in (lo, hi]; infinite ends via std::nullopt.
inline std::size_t sturm_count(const QPolynomial& poly, std::optional<mpq_class> lo, std::optional<mpq_class> hi) {
  using P = Poly<GaussianRational>;
  P p = detail::to_gaussian(poly);
  if (p.degree() <= 0) return 0;
  std::vector<P> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    P r = divmod(chain[chain.size() - 2], chain.back()).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  auto variations = [&](const std::optional<mpq_class>& x, int direction) {
    int last = 0;
    std::size_t v = 0;
    for (const auto& q : chain) {
      int s = x ? detail::sign_at(q, *x) : detail::sign_at_infinity(q, direction);
      if (s == 0) continue;
      if (last != 0 && s != last) ++v;
      last = s;
    }
    return v;
  };
  std::size_t vlo = variations(lo, -1);
  std::size_t vhi = variations(hi, +1);
  return vlo >= vhi ? vlo - vhi : 0;
}

/// Square-free factors by Yun's algorithm: p = prod f_k^k, returned as pairs.
inline std::vector<std::pair<QPolynomial, std::size_t>> squarefree_factors(const QPolynomial& poly) {
  using P = Poly<GaussianRational>;
  std::vector<std::pair<QPolynomial, std::size_t>> out;
  P p = detail::to_gaussian(poly);
  if (p.degree() <= 0) return out;
  auto to_q = [](const P& q) {
    QPolynomial c;
    for (const auto& v : q.coeffs()) c.push_back(v.re);
    return c;
  };
  P a = poly_gcd(p, p.derivative());
  P b = divmod(p, a).first;
  P c = divmod(p.derivative(), a).first;
  P d = c - b.derivative();
  std::size_t k = 1;
  while (b.degree() > 0) {
    P g = poly_gcd(b, d);
    if (g.degree() > 0) out.emplace_back(to_q(g), k);
    P nb = divmod(b, g).first;
    c = divmod(d, g).first;
    b = nb;
    d = c - b.derivative();
    ++k;
  }
  return out;
}

struct RealRootCount {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  std::size_t total_degree = 0;
  bool all_real() const { return positive + negative + zero == total_degree; }
};

/// Real roots counted with multiplicity, split by sign.
inline RealRootCount count_real_roots(const QPolynomial& poly) {
  RealRootCount out;
  QPolynomial p = poly;
  while (!p.empty() && p.back() == 0) p.pop_back();
  if (p.size() <= 1) return out;
  out.total_degree = p.size() - 1;
  std::size_t low = 0;
  while (p[low] == 0) ++low;
  out.zero = low;
  QPolynomial rest(p.begin() + static_cast<std::ptrdiff_t>(low), p.end());
  for (const auto& [factor, mult] : squarefree_factors(rest)) {
    out.positive += mult * sturm_count(factor, mpq_class(0), std::nullopt);
    out.negative += mult * sturm_count(factor, std::nullopt, mpq_class(0));
  }
  return out;
}

/// Sign changes of the coefficient sequence (Descartes' bound, exact when
/// every root is real).
inline std::size_t descartes_sign_changes(const QPolynomial& p) {
  int last = 0;
  std::size_t changes = 0;
  for (const auto& c : p) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

} // namespace etaflow
