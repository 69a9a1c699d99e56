#pragma once

// Torsion modules over Laurent polynomials Lambda = Q(i)[tau, tau^-1] with a
// Blanchfield-type pairing B = N / D, their localization at points xi of the
// unit circle, and the pushforward tau = xi e^{2 pi i t} to a linking form
// over O. Levine-Tristram signatures serve as the numeric cross-check.

#include "etaflow/cyclotomic.hpp"
#include "etaflow/localsys.hpp"
#include "etaflow/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <optional>
#include <vector>

namespace etaflow {

/// tau^low * poly(tau) with Gaussian-rational coefficients.
class LaurentPoly {
public:
  using Q = GaussianRational;
  LaurentPoly() = default;
  LaurentPoly(int low, Poly<Q> poly) : low_(low), poly_(std::move(poly)) { normalize(); }
  LaurentPoly(long v) : LaurentPoly(0, Poly<Q>::constant(from_int<Q>(v))) {} // NOLINT(google-explicit-constructor)

  static LaurentPoly monomial(const Q& c, int exponent) { return LaurentPoly(exponent, Poly<Q>::constant(c)); }
  static LaurentPoly tau(int exponent = 1) { return monomial(from_int<Q>(1), exponent); }

  bool is_zero() const { return poly_.is_zero(); }
  int low() const { return low_; }
  /// Highest exponent; low() - 1 for zero.
  int high() const { return low_ + static_cast<int>(poly_.degree()); }
  const Poly<Q>& poly() const { return poly_; }
  Q coeff(int k) const { return k < low_ ? Q{} : poly_.coeff(static_cast<std::size_t>(k - low_)); }

  /// tau -> tau^-1 together with complex conjugation of the coefficients.
  LaurentPoly bar() const {
    if (is_zero()) return {};
    std::vector<Q> c(poly_.coeffs().size());
    for (std::size_t k = 0; k < c.size(); ++k) c[c.size() - 1 - k] = conj(poly_.coeffs()[k]);
    return LaurentPoly(-high(), Poly<Q>(std::move(c)));
  }

  template <Field F> F evaluate(const F& x) const {
    F acc = field_traits<F>::zero(), power = field_traits<F>::one();
    for (const auto& c : poly_.coeffs()) {
      acc += lift<F>(c) * power;
      power *= x;
    }
    if (low_ == 0) return acc;
    F shift = field_traits<F>::one();
    const F base = low_ > 0 ? x : field_traits<F>::one() / x;
    for (int k = 0; k < std::abs(low_); ++k) shift *= base;
    return acc * shift;
  }

  /// Substitutes tau and tau^-1 given as germs.
  template <Field F> Germ<F> substitute(const Germ<F>& tau, const Germ<F>& tau_inv) const {
    Germ<F> acc, power = Germ<F>::one();
    for (const auto& c : poly_.coeffs()) {
      acc = acc + lift<F>(c) * power;
      power = power * tau;
    }
    const Germ<F>& base = low_ > 0 ? tau : tau_inv;
    for (int k = 0; k < std::abs(low_); ++k) acc = acc * base;
    return acc;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int low = std::min(a.low_, b.low_);
    return LaurentPoly(low, a.raised(a.low_ - low) + b.raised(b.low_ - low));
  }
  LaurentPoly operator-() const { return LaurentPoly(low_, -poly_); }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    return LaurentPoly(a.low_ + b.low_, a.poly_ * b.poly_);
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return (a - b).is_zero(); }

  template <Field F> static F lift(const Q& c) { return field_traits<F>::from_parts(c.re, c.im); }

private:
  Poly<Q> raised(int k) const { return poly_ * Poly<Q>::monomial(from_int<Q>(1), static_cast<std::size_t>(k)); }
  void normalize() {
    if (poly_.is_zero()) {
      low_ = 0;
      return;
    }
    const long v = poly_.valuation();
    if (v > 0) {
      std::vector<Q> c(poly_.coeffs().begin() + v, poly_.coeffs().end());
      poly_ = Poly<Q>(std::move(c));
      low_ += static_cast<int>(v);
    }
  }

  int low_ = 0;
  Poly<Q> poly_;
};

using LaurentMatrix = Matrix<LaurentPoly>;

namespace detail {

/// Polynomial matrix tau^{-L} A with L the lowest exponent present.
inline std::pair<int, Matrix<Poly<GaussianRational>>> clear_denominators(const LaurentMatrix& a) {
  int low = 0;
  bool any = false;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (!a(r, c).is_zero()) {
        low = any ? std::min(low, a(r, c).low()) : a(r, c).low();
        any = true;
      }
  Matrix<Poly<GaussianRational>> out(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const auto shifted = a(r, c) * LaurentPoly::tau(-low);
      if (!shifted.is_zero()) out(r, c) = shifted.poly() * Poly<GaussianRational>::monomial(from_int<GaussianRational>(1), static_cast<std::size_t>(shifted.low()));
    }
  return {low, out};
}

inline Mat<GaussianRational> evaluate_at(const Matrix<Poly<GaussianRational>>& m, const GaussianRational& x) {
  return m.template transform<GaussianRational>([&](const Poly<GaussianRational>& p) { return p(x); });
}

inline long max_degree(const Matrix<Poly<GaussianRational>>& m) {
  long d = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) d = std::max(d, m(r, c).degree());
  return d;
}

} // namespace detail

/// Determinant over Lambda, by interpolation of the polynomial part.
inline LaurentPoly laurent_determinant(const LaurentMatrix& a) {
  using Q = GaussianRational;
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
  const std::size_t n = a.rows();
  if (n == 0) return LaurentPoly(1);
  auto [low, poly] = detail::clear_denominators(a);
  const std::size_t points = static_cast<std::size_t>(detail::max_degree(poly)) * n + 1;
  std::vector<Q> xs, ys;
  for (std::size_t k = 0; k < points; ++k) {
    xs.push_back(from_int<Q>(static_cast<long>(k)));
    ys.push_back(determinant(detail::evaluate_at(poly, xs.back())));
  }
  return LaurentPoly(low * static_cast<int>(n), interpolate(xs, ys));
}

/// Rank over the fraction field of Lambda.
inline std::size_t laurent_rank(const LaurentMatrix& a) {
  using Q = GaussianRational;
  auto [low, poly] = detail::clear_denominators(a);
  const std::size_t points = std::min(a.rows(), a.cols()) * static_cast<std::size_t>(detail::max_degree(poly)) + 1;
  std::size_t best = 0;
  for (std::size_t k = 0; k < points; ++k) best = std::max(best, rank(detail::evaluate_at(poly, from_int<Q>(static_cast<long>(k) + 1))));
  return best;
}

/// Classical adjugate by cofactors.
inline LaurentMatrix laurent_adjugate(const LaurentMatrix& a) {
  const std::size_t n = a.rows();
  LaurentMatrix out(n, n);
  if (n == 1) {
    out(0, 0) = LaurentPoly(1);
    return out;
  }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      LaurentMatrix minor(n - 1, n - 1);
      for (std::size_t i = 0, mi = 0; i < n; ++i) {
        if (i == r) continue;
        for (std::size_t j = 0, mj = 0; j < n; ++j)
          if (j != c) minor(mi, mj++) = a(i, j);
        ++mi;
      }
      auto cof = laurent_determinant(minor);
      out(c, r) = (r + c) % 2 == 0 ? cof : -cof;
    }
  return out;
}

inline LaurentMatrix laurent_bar_transpose(const LaurentMatrix& a) {
  LaurentMatrix out(a.cols(), a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c).bar();
  return out;
}

/// Torsion Lambda-module coker A with the pairing B = N / D on it.
struct LambdaModule {
  LaurentMatrix presentation;
  std::optional<LaurentMatrix> pairing_numerator;
  LaurentPoly pairing_denominator = LaurentPoly(1);
  Parity parity = Parity::Hermitian;
  std::size_t size() const { return presentation.rows(); }
};

/// Checks the shape and the symmetry B^* = +-B of the pairing witness, with
/// ^* the conjugate transpose composed with tau -> tau^-1.
inline LambdaModule make_lambda_module(LaurentMatrix a, std::optional<LaurentMatrix> numerator = std::nullopt,
                                       LaurentPoly denominator = LaurentPoly(1), Parity parity = Parity::Hermitian) {
  require(a.rows() == a.cols(), ErrorCode::DimensionMismatch, "presentation matrix must be square");
  if (numerator) {
    require(numerator->rows() == a.rows() && numerator->cols() == a.rows(), ErrorCode::DimensionMismatch, "pairing witness shape");
    require(!denominator.is_zero(), ErrorCode::InvalidArgument, "pairing denominator is zero");
    // N^* D = +-N D^* as matrices over Lambda
    const LaurentMatrix lhs = laurent_bar_transpose(*numerator).map([&](const LaurentPoly& p) { return p * denominator; });
    const LaurentPoly d_bar = denominator.bar();
    const bool skew = parity == Parity::SkewHermitian;
    for (std::size_t r = 0; r < a.rows(); ++r)
      for (std::size_t c = 0; c < a.rows(); ++c) {
        LaurentPoly rhs = (*numerator)(r, c) * d_bar;
        require(lhs(r, c) == (skew ? -rhs : rhs), skew ? ErrorCode::NotSkewHermitian : ErrorCode::NotHermitian,
                "pairing witness is not compatible with the involution");
      }
  }
  return LambdaModule{std::move(a), std::move(numerator), std::move(denominator), parity};
}

using SeifertMatrix = std::vector<std::vector<long>>;

inline Mat<GaussianRational> seifert_to_matrix(const SeifertMatrix& v) {
  const std::size_t n = v.size();
  Mat<GaussianRational> out = zeros<GaussianRational>(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    require(v[r].size() == n, ErrorCode::DimensionMismatch, "Seifert matrix must be square");
    for (std::size_t c = 0; c < n; ++c) out(r, c) = from_int<GaussianRational>(v[r][c]);
  }
  return out;
}

/// A(tau) = tau V - V^T and B = (1 - tau) A^{-1} = (1 - tau) adj(A) / det A.
/// With this convention B^* = B, so the pairing is Hermitian.
inline LambdaModule alexander_module(const SeifertMatrix& v) {
  using Q = GaussianRational;
  const auto m = seifert_to_matrix(v);
  const std::size_t n = m.rows();
  const Q d = determinant(m - m.transposed());
  require(d == from_int<Q>(1) || d == from_int<Q>(-1), ErrorCode::NotASeifertMatrix, "det(V - V^T) must be +-1");
  LaurentMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      a(r, c) = LaurentPoly::monomial(m(r, c), 1) - LaurentPoly::monomial(m(c, r), 0);
  const LaurentPoly one_minus_tau = LaurentPoly(1) - LaurentPoly::tau();
  LaurentMatrix numerator = laurent_adjugate(a).map([&](const LaurentPoly& p) { return one_minus_tau * p; });
  LaurentPoly det = laurent_determinant(a);
  return make_lambda_module(std::move(a), std::move(numerator), std::move(det), Parity::Hermitian);
}

/// xi on the unit circle: exactly e^{2 pi i p / q}, or a float angle in radians.
struct LocalizationPoint {
  std::optional<std::pair<long, long>> root;
  double angle = 0.0;

  static LocalizationPoint root_of_unity(long p, long q) {
    require(q > 0, ErrorCode::InvalidLocalizationPoint, "root of unity needs q > 0");
    const long r = ((p % q) + q) % q;
    return {std::make_pair(r, q), 2 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(q)};
  }
  static LocalizationPoint from_angle(double a) {
    require(std::isfinite(a), ErrorCode::InvalidLocalizationPoint, "angle must be finite");
    return {std::nullopt, a};
  }
  bool exact() const { return root.has_value(); }
  std::complex<double> value() const { return std::polar(1.0, angle); }
  Cyclotomic cyclotomic() const {
    require(exact(), ErrorCode::InvalidLocalizationPoint, "an angle is not an exact root of unity");
    return Cyclotomic::root_of_unity(root->first, static_cast<int>(root->second));
  }
};

struct LocalPresentation {
  std::size_t dimension = 0;
  std::vector<int> exponents; // the (tau - xi)-primary part is sum Lambda / (tau - xi)^{k_j}
};

namespace detail {

template <Field F> LocalPresentation localize_with(const LambdaModule& m, const F& xi) {
  auto [low, poly] = clear_denominators(m.presentation);
  // tau = xi + u, exactly
  GermMatrix<F> local(poly.rows(), poly.cols(), Germ<F>::zero());
  const Germ<F> tau = Germ<F>::polynomial({xi, field_traits<F>::one()});
  for (std::size_t r = 0; r < poly.rows(); ++r)
    for (std::size_t c = 0; c < poly.cols(); ++c) {
      Germ<F> acc, power = Germ<F>::one();
      for (const auto& coef : poly(r, c).coeffs()) {
        acc = acc + LaurentPoly::lift<F>(coef) * power;
        power = power * tau;
      }
      local(r, c) = acc;
    }
  auto smith = certified_smith(local);
  LocalPresentation out;
  out.exponents = smith.torsion_exponents();
  for (int k : out.exponents) out.dimension += static_cast<std::size_t>(k);
  return out;
}

} // namespace detail

/// The xi-primary part of coker A, from a Smith form over the local ring at xi.
inline LocalPresentation localize_at(const LambdaModule& m, const LocalizationPoint& xi) {
  if (m.size() == 0) return {};
  if (xi.exact()) return detail::localize_with<Cyclotomic>(m, xi.cyclotomic());
  return detail::localize_with<std::complex<double>>(m, xi.value());
}

template <Field F> struct Pushforward {
  std::vector<int> exponents;          // torsion orders over O
  std::optional<TorsionForm<F>> form;  // present when the module carries a pairing
  SignatureProfile profile;            // of the Hermitian normalization
  int truncation = 0;
  std::size_t dimension() const {
    std::size_t s = 0;
    for (int k : exponents) s += static_cast<std::size_t>(k);
    return s;
  }
};

namespace detail {

template <Field F> Germ<F> laurent_to_germ(const LaurentGerm<F>& x) {
  require(x.is_zero() || x.low() >= 0, ErrorCode::InvalidArgument, "pairing witness has a pole beyond the torsion order");
  if (x.is_zero()) return Germ<F>::zero(std::max(x.order(), -1));
  std::vector<F> c(static_cast<std::size_t>(x.low()), field_traits<F>::zero());
  c.insert(c.end(), x.coeffs().begin(), x.coeffs().end());
  return Germ<F>(std::move(c), x.order());
}

/// tau(t) = xi e^{i rate t} and its inverse through order n.
template <Field F> Pushforward<F> pushforward_with(const LambdaModule& m, const F& xi, const F& rate, int n) {
  const Germ<F> e = Germ<F>::exp_series(rate * field_traits<F>::imag_unit(), n);
  const Germ<F> e_inv = Germ<F>::exp_series(-rate * field_traits<F>::imag_unit(), n);
  const Germ<F> tau = xi * e, tau_inv = conj(xi) * e_inv;
  auto sub = [&](const LaurentMatrix& a) {
    return a.template transform<Germ<F>>([&](const LaurentPoly& p) { return p.template substitute<F>(tau, tau_inv); });
  };
  GermMatrix<F> a = sub(m.presentation);
  auto smith = smith_over_O(a, n);
  require(smith.rank() >= laurent_rank(m.presentation), ErrorCode::TruncationInsufficient,
          "truncation " + std::to_string(n) + " is below the multiplicity at xi");
  Pushforward<F> out;
  out.truncation = n;
  out.exponents = smith.torsion_exponents();
  if (!m.pairing_numerator) return out;
  // {f_a, f_b} = conj(f_b)^T B f_a with f_a = U^{-1} e_a
  const GermMatrix<F> nf = sub(*m.pairing_numerator) * smith.u_inv;
  const Germ<F> det = m.pairing_denominator.template substitute<F>(tau, tau_inv);
  require(!det.is_zero(), ErrorCode::TruncationInsufficient, "pairing denominator vanishes through the truncation");
  const LaurentGerm<F> det_inv = LaurentGerm<F>(det).inverse();
  auto numerator = [&](std::size_t x, std::size_t y) {
    LaurentGerm<F> value = LaurentGerm<F>(conj_dot(smith.u_inv, y, nf, x)) * det_inv;
    return laurent_to_germ(value.shifted(smith.exponents[x]));
  };
  out.form = torsion_form_from_smith<F>(smith, m.parity, numerator);
  out.profile = signature_profile(normalized(*out.form));
  return out;
}

} // namespace detail

namespace detail {

/// All complex roots of det A (with multiplicity) by Durand-Kerner iteration
/// and Newton polishing in double precision.
inline std::vector<std::complex<double>> determinant_roots(const LaurentMatrix& a) {
  using C = std::complex<double>;
  const LaurentPoly det = laurent_determinant(a);
  std::vector<C> c;
  for (const auto& v : det.poly().coeffs()) c.push_back(field_traits<GaussianRational>::to_complex(v));
  if (c.size() < 2) return {};
  const std::size_t n = c.size() - 1;
  const C lead = c.back();
  for (auto& v : c) v /= lead;
  auto eval = [&](C z) {
    C acc = 0;
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
  };
  auto deriv = [&](C z) {
    C acc = 0;
    for (std::size_t k = c.size(); k-- > 1;) acc = acc * z + c[k] * static_cast<double>(k);
    return acc;
  };
  std::vector<C> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(C(0.4, 0.9), static_cast<double>(k));
  for (int it = 0; it < 500; ++it) {
    double move = 0;
    for (std::size_t k = 0; k < n; ++k) {
      C denom = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) denom *= z[k] - z[j];
      const C step = eval(z[k]) / denom;
      z[k] -= step;
      move = std::max(move, std::abs(step));
    }
    if (move < 1e-15) break;
  }
  for (auto& r : z)
    for (int it = 0; it < 5; ++it) {
      const C d = deriv(r);
      if (std::abs(d) < 1e-300) break;
      r -= eval(r) / d;
    }
  return z;
}

} // namespace detail

/// Angles in [0, 2 pi) of the unit-circle roots of det A; repeated roots appear once.
inline std::vector<double> circle_root_angles(const LambdaModule& m, double tolerance = 1e-7) {
  std::vector<double> out;
  for (auto r : detail::determinant_roots(m.presentation)) {
    if (std::abs(std::abs(r) - 1.0) > tolerance) continue;
    double a = std::arg(r);
    if (a < 0) a += 2 * std::numbers::pi;
    bool seen = false;
    for (double b : out) seen = seen || std::abs(std::polar(1.0, a) - std::polar(1.0, b)) < std::sqrt(tolerance);
    if (!seen) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Substitutes tau = xi e^{2 pi i t}, written in the variable s = 2 pi t / rate
/// (same profile, since the rescaling is positive). Exact roots of unity run
/// over the cyclotomic field with rate 1. Other points run in floating point
/// with the rate chosen so that every other root of det A lies at |s| >= 1,
/// which keeps the Taylor coefficients from growing. n = 0 doubles the
/// truncation from 16 until the multiplicity at xi is resolved.
template <Field F> Pushforward<F> pushforward_as(const LambdaModule& m, const LocalizationPoint& xi, int n = 0) {
  double rate = 1.0;
  if constexpr (!std::is_same_v<F, Cyclotomic>) {
    for (auto z : detail::determinant_roots(m.presentation)) {
      const double d = std::abs(std::log(z / xi.value()));
      if (d > 1e-6) rate = std::min(rate, d);
    }
  }
  auto run = [&](int k) {
    if constexpr (std::is_same_v<F, Cyclotomic>) return detail::pushforward_with<F>(m, xi.cyclotomic(), Cyclotomic(1), k);
    else return detail::pushforward_with<F>(m, xi.value(), F(rate), k);
  };
  if (n > 0) return run(n);
  return with_auto_truncation(16, 1024, run);
}

/// With B = (1 - tau) A^{-1} the Levine-Tristram jump across xi (after minus
/// before, counterclockwise) is -2 sum sigma_{2i-1} of the pushforward; the
/// sign is fixed by the trefoil, where the jump at e^{i pi/3} is -2.
constexpr long kJumpSign = -1;

inline long pushforward_jump(const SignatureProfile& p) { return kJumpSign * 2 * p.odd_sum(); }

/// Signature of (1 - omega) V + (1 - conj omega) V^T.
inline long levine_tristram(const SeifertMatrix& v, std::complex<double> omega) {
  using C = std::complex<double>;
  require(std::abs(omega - C(1.0)) > 1e-12, ErrorCode::InvalidLocalizationPoint, "Levine-Tristram signature needs omega != 1");
  const auto m = seifert_to_matrix(v);
  const std::size_t n = m.rows();
  Mat<C> h = zeros<C>(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      h(r, c) = (C(1.0) - omega) * field_traits<GaussianRational>::to_complex(m(r, c)) +
                (C(1.0) - std::conj(omega)) * field_traits<GaussianRational>::to_complex(m(c, r));
  return signature(h);
}

struct SignatureJump {
  long before = 0; // at xi e^{-i delta}
  long after = 0;  // at xi e^{+i delta}
  double delta = 0.0;
  long jump() const { return after - before; }
};

/// Levine-Tristram signatures just before and after xi along the circle,
/// with delta halved from 0.05 until two consecutive scales agree.
inline SignatureJump levine_tristram_jump(const SeifertMatrix& v, double angle) {
  std::optional<SignatureJump> last;
  for (double delta = 0.05; delta > 1e-9; delta /= 2) {
    SignatureJump j{levine_tristram(v, std::polar(1.0, angle - delta)), levine_tristram(v, std::polar(1.0, angle + delta)), delta};
    if (last && last->before == j.before && last->after == j.after) return j;
    last = j;
  }
  fail(ErrorCode::OracleUnstable, "Levine-Tristram signatures did not stabilize near xi");
}

/// Unit-circle roots of the Alexander polynomial that are roots of unity of
/// order at most max_order, as exact localization points.
inline std::vector<LocalizationPoint> roots_of_unity_on_circle(const LambdaModule& m, long max_order = 60) {
  const LaurentPoly det = laurent_determinant(m.presentation);
  std::vector<LocalizationPoint> out;
  for (long q = 1; q <= max_order; ++q)
    for (long p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      if (det.evaluate<Cyclotomic>(Cyclotomic::root_of_unity(p, static_cast<int>(q))).is_zero())
        out.push_back(LocalizationPoint::root_of_unity(p, q));
    }
  return out;
}

} // namespace etaflow
