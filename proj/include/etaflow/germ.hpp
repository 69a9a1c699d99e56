#pragma once

// Truncated power series (germs of holomorphic functions at t = 0) and
// truncated Laurent series (meromorphic germs). Every value carries the
// exponent through which its coefficients are known; polynomial data is
// known exactly (order() == kExactOrder). The involution conjugates the
// coefficients and fixes t.

#include "etaflow/scalar.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace etaflow {

inline constexpr int kExactOrder = std::numeric_limits<int>::max() / 4;

inline int add_orders(int a, int b) {
  if (a >= kExactOrder || b >= kExactOrder) return kExactOrder;
  return a + b;
}

template <Field F> class LaurentGerm;

template <Field F> class Germ {
public:
  /// Exact zero.
  Germ() : order_(kExactOrder) {}
  Germ(std::vector<F> coeffs, int order) : c_(std::move(coeffs)), order_(order) {
    require(order >= -1, ErrorCode::InvalidArgument, "germ truncation order must be >= -1");
    normalize();
  }
  /// Polynomial data, known exactly.
  static Germ polynomial(std::vector<F> coeffs) { return Germ(std::move(coeffs), kExactOrder); }
  static Germ constant(const F& v, int order = kExactOrder) { return Germ(std::vector<F>{v}, order); }
  static Germ zero(int order = kExactOrder) { return Germ(std::vector<F>{}, order); }
  static Germ one(int order = kExactOrder) { return constant(field_traits<F>::one(), order); }
  static Germ monomial(const F& v, std::size_t k, int order = kExactOrder) {
    std::vector<F> c(k + 1, field_traits<F>::zero());
    c[k] = v;
    return Germ(std::move(c), order);
  }
  /// exp(a t) through t^order.
  static Germ exp_series(const F& a, int order) {
    require(order >= 0 && order < kExactOrder, ErrorCode::InvalidArgument, "exp_series needs a finite order");
    std::vector<F> c(static_cast<std::size_t>(order) + 1);
    c[0] = field_traits<F>::one();
    for (int n = 1; n <= order; ++n) c[static_cast<std::size_t>(n)] = c[static_cast<std::size_t>(n - 1)] * a / from_int<F>(n);
    return Germ(std::move(c), order);
  }

  int order() const { return order_; }
  bool is_exact() const { return order_ >= kExactOrder; }
  F coeff(std::size_t k) const { return k < c_.size() ? c_[k] : field_traits<F>::zero(); }
  /// Stored coefficients (implicit zeros beyond the end, up to order()).
  const std::vector<F>& coeffs() const { return c_; }

  double scale() const {
    double s = 0.0;
    for (const auto& v : c_) s = std::max(s, field_traits<F>::magnitude(v));
    return std::max(s, 1.0);
  }

  /// Index of the first nonzero coefficient; nullopt when the germ is zero
  /// through its truncation order (the "confidence order" is then order()).
  std::optional<int> valuation() const {
    const double s = scale();
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!etaflow::is_zero(c_[k], s)) return static_cast<int>(k);
    return std::nullopt;
  }
  bool is_zero() const { return !valuation().has_value(); }
  bool is_unit() const { return valuation() == 0; }

  Germ truncated(int order) const { return Germ(c_, std::min(order, order_)); }

  /// t^k * this
  Germ shifted_up(std::size_t k) const {
    std::vector<F> c(k, field_traits<F>::zero());
    c.insert(c.end(), c_.begin(), c_.end());
    return Germ(std::move(c), add_orders(order_, static_cast<int>(k)));
  }
  /// this / t^k; the first k coefficients must vanish.
  Germ shifted_down(std::size_t k) const {
    auto v = valuation();
    require(!v || *v >= static_cast<int>(k), ErrorCode::NotInvertibleOverO, "germ is not divisible by t^" + std::to_string(k));
    std::vector<F> c;
    if (c_.size() > k) c.assign(c_.begin() + static_cast<std::ptrdiff_t>(k), c_.end());
    int order = is_exact() ? kExactOrder : order_ - static_cast<int>(k);
    if (order < -1) order = -1;
    return Germ(std::move(c), order);
  }

  Germ conj() const {
    auto c = c_;
    for (auto& v : c) v = etaflow::conj(v);
    return Germ(std::move(c), order_);
  }

  /// Inverse of a unit (nonzero constant term).
  Germ unit_inverse() const {
    require(is_unit(), ErrorCode::NotInvertibleOverO, "germ is not a unit");
    require(!is_exact() || c_.size() == 1, ErrorCode::InvalidArgument,
            "inverse of a non-constant polynomial needs a truncation order; call truncated() first");
    const int n = order_;
    std::vector<F> w(static_cast<std::size_t>(n) + 1, field_traits<F>::zero());
    const F inv0 = field_traits<F>::one() / c_[0];
    w[0] = inv0;
    for (int k = 1; k <= n; ++k) {
      F acc = field_traits<F>::zero();
      for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j)
        acc += c_[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)];
      w[static_cast<std::size_t>(k)] = -acc * inv0;
    }
    return Germ(std::move(w), n);
  }

  friend Germ operator+(const Germ& a, const Germ& b) {
    std::vector<F> c(std::max(a.c_.size(), b.c_.size()), field_traits<F>::zero());
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Germ(std::move(c), std::min(a.order_, b.order_));
  }
  Germ operator-() const {
    auto c = c_;
    for (auto& v : c) v = -v;
    return Germ(std::move(c), order_);
  }
  friend Germ operator-(const Germ& a, const Germ& b) { return a + (-b); }
  /// Cauchy product truncated to the shorter operand.
  friend Germ operator*(const Germ& a, const Germ& b) {
    const int order = std::min(a.order_, b.order_);
    if (a.c_.empty() || b.c_.empty()) return Germ(std::vector<F>{}, order);
    std::size_t len = a.c_.size() + b.c_.size() - 1;
    if (order < kExactOrder) len = std::min(len, static_cast<std::size_t>(order) + 1);
    std::vector<F> c(len, field_traits<F>::zero());
    for (std::size_t i = 0; i < a.c_.size() && i < len; ++i)
      for (std::size_t j = 0; j < b.c_.size() && i + j < len; ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Germ(std::move(c), order);
  }
  friend Germ operator*(const F& s, const Germ& g) { return Germ::constant(s) * g; }
  Germ& operator+=(const Germ& b) { return *this = *this + b; }
  Germ& operator-=(const Germ& b) { return *this = *this - b; }
  Germ& operator*=(const Germ& b) { return *this = *this * b; }

  /// Coefficient equality through the common truncation order.
  friend bool operator==(const Germ& a, const Germ& b) { return (a - b).is_zero(); }

  /// Evaluates the truncated polynomial at x (reporting only).
  F evaluate(const F& x) const {
    F acc = field_traits<F>::zero();
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

private:
  void normalize() {
    if (order_ < kExactOrder && c_.size() > static_cast<std::size_t>(order_ + 1))
      c_.resize(static_cast<std::size_t>(order_ + 1));
    if constexpr (field_traits<F>::exact) {
      while (!c_.empty() && etaflow::is_zero(c_.back())) c_.pop_back();
    }
  }

  std::vector<F> c_;
  int order_;
};

/// Truncated Laurent series sum_{k >= low} c_k t^k, known through t^order().
template <Field F> class LaurentGerm {
public:
  LaurentGerm() : low_(0), order_(kExactOrder) {}
  LaurentGerm(int low, std::vector<F> coeffs, int order) : low_(low), c_(std::move(coeffs)), order_(order) { normalize(); }
  explicit LaurentGerm(const Germ<F>& g) : LaurentGerm(0, g.coeffs(), g.order()) {}

  static LaurentGerm monomial(const F& v, int exponent, int order = kExactOrder) {
    return LaurentGerm(exponent, std::vector<F>{v}, order);
  }

  bool is_zero() const { return c_.empty(); }
  /// Exponent of the leading term; nullopt for a germ that is zero through order().
  std::optional<int> valuation() const {
    if (c_.empty()) return std::nullopt;
    return low_;
  }
  int order() const { return order_; }
  /// Coefficient of t^k (zero outside the stored range).
  F coeff(int k) const {
    if (k < low_ || k - low_ >= static_cast<int>(c_.size())) return field_traits<F>::zero();
    return c_[static_cast<std::size_t>(k - low_)];
  }
  int low() const { return low_; }
  const std::vector<F>& coeffs() const { return c_; }

  LaurentGerm conj() const {
    auto c = c_;
    for (auto& v : c) v = etaflow::conj(v);
    return LaurentGerm(low_, std::move(c), order_);
  }

  LaurentGerm shifted(int k) const { return LaurentGerm(low_ + k, c_, add_orders(order_, k)); }

  /// Coefficient of t^-1.
  F residue() const {
    require(order_ >= -1, ErrorCode::TruncationInsufficient, "residue needs coefficients through t^-1");
    return coeff(-1);
  }

  /// The class modulo the holomorphic germs: all terms with negative exponent.
  LaurentGerm principal_part() const {
    require(order_ >= -1, ErrorCode::TruncationInsufficient, "principal part needs coefficients through t^-1");
    std::vector<F> c;
    for (int k = low_; k < 0 && k - low_ < static_cast<int>(c_.size()); ++k) c.push_back(c_[static_cast<std::size_t>(k - low_)]);
    return LaurentGerm(low_, std::move(c), kExactOrder);
  }

  LaurentGerm inverse() const {
    require(!c_.empty(), ErrorCode::IndistinguishableFromZero,
            "germ is indistinguishable from zero through order " + std::to_string(order_));
    require(order_ < kExactOrder || c_.size() == 1, ErrorCode::InvalidArgument,
            "inverse of a non-monomial exact series needs a truncation order");
    const int relative = order_ >= kExactOrder ? 0 : order_ - low_;
    Germ<F> unit(c_, relative);
    Germ<F> inv = unit.unit_inverse();
    const int new_order = order_ >= kExactOrder ? kExactOrder : -low_ + relative;
    return LaurentGerm(-low_, inv.coeffs(), new_order);
  }

  friend LaurentGerm operator+(const LaurentGerm& a, const LaurentGerm& b) {
    const int order = std::min(a.order_, b.order_);
    if (a.c_.empty() && b.c_.empty()) return LaurentGerm(0, {}, order);
    int low = std::min(a.c_.empty() ? b.low_ : a.low_, b.c_.empty() ? a.low_ : b.low_);
    int high = std::max(a.low_ + static_cast<int>(a.c_.size()), b.low_ + static_cast<int>(b.c_.size()));
    if (order < kExactOrder) high = std::min(high, order + 1);
    std::vector<F> c(static_cast<std::size_t>(std::max(high - low, 0)), field_traits<F>::zero());
    for (int k = low; k < high; ++k) c[static_cast<std::size_t>(k - low)] = a.coeff(k) + b.coeff(k);
    return LaurentGerm(low, std::move(c), order);
  }
  LaurentGerm operator-() const {
    auto c = c_;
    for (auto& v : c) v = -v;
    return LaurentGerm(low_, std::move(c), order_);
  }
  friend LaurentGerm operator-(const LaurentGerm& a, const LaurentGerm& b) { return a + (-b); }
  /// Product; the known range follows the relative precision of each factor.
  friend LaurentGerm operator*(const LaurentGerm& a, const LaurentGerm& b) {
    const int va = a.c_.empty() ? a.order_ + 1 : a.low_;
    const int vb = b.c_.empty() ? b.order_ + 1 : b.low_;
    const int order = std::min(add_orders(a.order_, vb), add_orders(b.order_, va));
    if (a.c_.empty() || b.c_.empty()) return LaurentGerm(0, {}, order);
    const int low = a.low_ + b.low_;
    std::size_t len = a.c_.size() + b.c_.size() - 1;
    if (order < kExactOrder) len = std::min(len, static_cast<std::size_t>(std::max(order - low + 1, 0)));
    std::vector<F> c(len, field_traits<F>::zero());
    for (std::size_t i = 0; i < a.c_.size() && i < len; ++i)
      for (std::size_t j = 0; j < b.c_.size() && i + j < len; ++j) c[i + j] += a.c_[i] * b.c_[j];
    return LaurentGerm(low, std::move(c), order);
  }
  friend bool operator==(const LaurentGerm& a, const LaurentGerm& b) { return (a - b).is_zero(); }

private:
  void normalize() {
    if (order_ < kExactOrder) {
      int keep = order_ - low_ + 1;
      if (keep < 0) keep = 0;
      if (c_.size() > static_cast<std::size_t>(keep)) c_.resize(static_cast<std::size_t>(keep));
    }
    double s = 1.0;
    for (const auto& v : c_) s = std::max(s, field_traits<F>::magnitude(v));
    std::size_t lead = 0;
    while (lead < c_.size() && etaflow::is_zero(c_[lead], s)) ++lead;
    if (lead == c_.size()) {
      c_.clear();
      low_ = 0;
      return;
    }
    if (lead) {
      c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
      low_ += static_cast<int>(lead);
    }
    if constexpr (field_traits<F>::exact) {
      while (!c_.empty() && etaflow::is_zero(c_.back())) c_.pop_back();
    }
  }

  int low_;
  std::vector<F> c_;
  int order_;
};

// ---- the operations exposed by the germ module -----------------------------

enum class SeriesOp { Add, Sub, Mul };

template <Field F> Germ<F> series_arith(const Germ<F>& a, const Germ<F>& b, SeriesOp op) {
  switch (op) {
  case SeriesOp::Add: return a + b;
  case SeriesOp::Sub: return a - b;
  case SeriesOp::Mul: return a * b;
  }
  return {};
}

template <Field F> LaurentGerm<F> series_invert(const LaurentGerm<F>& a) { return a.inverse(); }
template <Field F> LaurentGerm<F> series_invert(const Germ<F>& a) { return LaurentGerm<F>(a).inverse(); }

template <Field F> Germ<F> involution(const Germ<F>& a) { return a.conj(); }
template <Field F> LaurentGerm<F> involution(const LaurentGerm<F>& a) { return a.conj(); }

template <Field F> struct ResidueAndPrincipalPart {
  F residue;
  LaurentGerm<F> principal_part;
};

template <Field F> ResidueAndPrincipalPart<F> residue_and_principal_part(const LaurentGerm<F>& f) {
  return {f.residue(), f.principal_part()};
}

} // namespace etaflow
