#pragma once

// Cochain complexes of free O-modules built from deformations of unitary
// monodromy, their torsion cohomology via Smith forms over O, and the
// homological linking form {f, f'} = t^{-k} P(g, f') with delta g = t^k f.

#include "etaflow/family.hpp"
#include "etaflow/generators.hpp"
#include "etaflow/smith.hpp"

#include <optional>
#include <string>
#include <vector>

namespace etaflow {

/// Involution-conjugate transpose: (M^*)_{rc} = conj(M_{cr}) with t real.
template <Field F> GermMatrix<F> germ_adjoint(const GermMatrix<F>& m) {
  GermMatrix<F> out(m.cols(), m.rows(), Germ<F>::zero());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c).conj();
  return out;
}

template <Field F> bool germ_matrix_is_zero(const GermMatrix<F>& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!m(r, c).is_zero()) return false;
  return true;
}

template <Field F> GermMatrix<F> germ_constant(const Mat<F>& m) {
  return m.template transform<Germ<F>>([](const F& v) { return Germ<F>::constant(v); });
}

template <Field F> struct MonodromyDeformation {
  std::size_t rank = 0;
  std::vector<GermMatrix<F>> generators;
  int truncation = kExactOrder; // working order of the series data
  bool unitary = true;          // U^* U = I through the truncation
  std::vector<std::string> warnings;
};

/// Checks U^*(t) U(t) = I through the truncation for every generator; a
/// failure is recorded as a warning, not an error.
template <Field F> MonodromyDeformation<F> make_deformation(std::vector<GermMatrix<F>> generators, int truncation) {
  require(!generators.empty(), ErrorCode::InvalidArgument, "a deformation needs at least one generator");
  MonodromyDeformation<F> out;
  out.rank = generators.front().rows();
  out.truncation = truncation;
  for (std::size_t g = 0; g < generators.size(); ++g) {
    const auto& u = generators[g];
    require(u.rows() == out.rank && u.cols() == out.rank, ErrorCode::DimensionMismatch, "generator images must be m x m");
    GermMatrix<F> defect = germ_adjoint(u) * u - germ_identity<F>(out.rank);
    if (!germ_matrix_is_zero(defect)) {
      out.unitary = false;
      out.warnings.push_back("generator " + std::to_string(g) + " is not unitary; symmetry is reported, not enforced");
    }
  }
  out.generators = std::move(generators);
  return out;
}

template <Field F> struct GermComplex {
  std::vector<std::size_t> dims;             // rank of C^k
  std::vector<GermMatrix<F>> coboundaries;   // delta^k : C^k -> C^{k+1}, a dims[k+1] x dims[k] matrix
  /// Chain-level pairing of degrees (l - 1, l): P(g, f) = conj(f)^T P g.
  std::optional<GermMatrix<F>> duality;
  bool unitary = true;
};

template <Field F> GermComplex<F> make_complex(std::vector<std::size_t> dims, std::vector<GermMatrix<F>> coboundaries,
                                               std::optional<GermMatrix<F>> duality = std::nullopt) {
  require(coboundaries.size() + 1 == dims.size(), ErrorCode::NotAComplex, "need one coboundary per consecutive degree pair");
  for (std::size_t k = 0; k < coboundaries.size(); ++k)
    require(coboundaries[k].rows() == dims[k + 1] && coboundaries[k].cols() == dims[k], ErrorCode::DimensionMismatch,
            "coboundary " + std::to_string(k) + " has the wrong shape");
  for (std::size_t k = 0; k + 1 < coboundaries.size(); ++k)
    require(germ_matrix_is_zero(coboundaries[k + 1] * coboundaries[k]), ErrorCode::NotAComplex,
            "delta^" + std::to_string(k + 1) + " delta^" + std::to_string(k) + " != 0");
  return GermComplex<F>{std::move(dims), std::move(coboundaries), std::move(duality), true};
}

/// 0 -> O^m -> O^m -> 0 with delta = rho(tau) - I and the standard pairing.
template <Field F> GermComplex<F> circle_complex(const MonodromyDeformation<F>& rho) {
  require(rho.generators.size() == 1, ErrorCode::InvalidArgument, "the circle has one generator");
  const std::size_t m = rho.rank;
  auto c = make_complex<F>({m, m}, {rho.generators[0] - germ_identity<F>(m)}, germ_identity<F>(m));
  c.unitary = rho.unitary;
  return c;
}

struct DegreeCohomology {
  std::size_t free_rank = 0;
  std::vector<int> torsion; // k_j with T = sum O / t^{k_j}
  std::size_t torsion_dimension() const {
    std::size_t s = 0;
    for (int k : torsion) s += static_cast<std::size_t>(k);
    return s;
  }
};

template <Field F> struct TorsionCohomology {
  std::vector<DegreeCohomology> degrees;
  std::vector<SmithForm<F>> smith; // smith[k] decomposes delta^k
};

namespace detail {

template <Field F> int data_order(const GermMatrix<F>& m) {
  int order = kExactOrder;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) order = std::min(order, m(r, c).order());
  return order;
}

/// Rank over the fraction field of an exactly known polynomial matrix.
template <Field F> std::optional<std::size_t> polynomial_rank(const GermMatrix<F>& m) {
  std::size_t degree = 0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (!m(r, c).is_exact()) return std::nullopt;
      degree = std::max(degree, m(r, c).coeffs().size());
    }
  const std::size_t points = std::min(m.rows(), m.cols()) * degree + 1;
  std::size_t best = 0;
  for (std::size_t j = 0; j < points; ++j) {
    F t = from_int<F>(static_cast<long>(j));
    best = std::max(best, rank(m.template transform<F>([&](const Germ<F>& g) { return g.evaluate(t); })));
  }
  return best;
}

/// Smith form whose zero block is certified: exactly zero, or the resolved
/// pivots already account for the rank over the fraction field.
template <Field F> SmithForm<F> certified_smith(const GermMatrix<F>& m) {
  const int data = data_order(m);
  auto attempt = [&](int n) {
    auto s = smith_over_O(m, n);
    if (s.unresolved == 0 || s.residual_exact()) return s;
    if (auto r = polynomial_rank(m); r && *r == s.rank()) return s;
    fail(ErrorCode::TruncationInsufficient,
         "a Smith diagonal entry vanishes through order " + std::to_string(s.residual_order) + " but is not certified zero");
  };
  if (data < kExactOrder) return attempt(data);
  return with_auto_truncation(16, 1024, attempt);
}

} // namespace detail

template <Field F> TorsionCohomology<F> torsion_cohomology(const GermComplex<F>& c) {
  TorsionCohomology<F> out;
  for (const auto& d : c.coboundaries) out.smith.push_back(detail::certified_smith(d));
  for (std::size_t k = 0; k < c.dims.size(); ++k) {
    DegreeCohomology h;
    const std::size_t rank_out = k < out.smith.size() ? out.smith[k].rank() : 0;
    const std::size_t rank_in = k > 0 ? out.smith[k - 1].rank() : 0;
    h.free_rank = c.dims[k] - rank_out - rank_in;
    if (k > 0) h.torsion = out.smith[k - 1].torsion_exponents();
    out.degrees.push_back(h);
  }
  return out;
}

/// The (-1)^l-Hermitian linking form on T^l. Torsion generators are
/// f_a = U^{-1} e_a from the Smith form U delta^{l-1} V = S, with
/// delta(V e_a) = t^{k_a} f_a, so {f_a, f_b} = t^{-k_a} conj(f_b)^T P V e_a.
/// Non-unitary complexes skip the symmetry validation when allow_asymmetric is set.
template <Field F>
TorsionForm<F> homological_linking(const GermComplex<F>& c, std::size_t l, bool allow_asymmetric = false) {
  require(c.duality.has_value(), ErrorCode::InvalidArgument, "homological linking needs a duality witness");
  require(l >= 1 && l < c.dims.size(), ErrorCode::InvalidArgument, "linking degree out of range");
  const auto& p = *c.duality;
  require(p.rows() == c.dims[l] && p.cols() == c.dims[l - 1], ErrorCode::DimensionMismatch, "duality witness shape");
  auto smith = detail::certified_smith(c.coboundaries[l - 1]);
  const Parity parity = l % 2 == 0 ? Parity::Hermitian : Parity::SkewHermitian;
  GermMatrix<F> ph = p * smith.v;
  auto numerator = [&](std::size_t a, std::size_t b) { return conj_dot(smith.u_inv, b, ph, a); };
  try {
    return torsion_form_from_smith<F>(smith, parity, numerator);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Degenerate) fail(ErrorCode::DegenerateForm, "linking form is degenerate: " + std::string(e.what()));
    const bool symmetry = e.code() == ErrorCode::NotHermitian || e.code() == ErrorCode::NotSkewHermitian;
    if (!(symmetry && allow_asymmetric)) throw;
  }
  // assemble without the symmetry check
  auto raw = torsion_form_from_smith<F>(smith, parity, numerator, false);
  return raw;
}

/// Hermitian form of a (-1)^l-Hermitian one, multiplying skew forms by +i.
template <Field F> TorsionForm<F> normalized(const TorsionForm<F>& f) {
  return f.parity == Parity::Hermitian ? f : skew_to_hermitian(f);
}

/// The largest deviation from {f, f'} + (-1)^{l+1} conj{f', f} = 0 mod O,
/// measured on the scalar form (0 when the form has the expected symmetry).
template <Field F> double symmetry_defect(const TorsionForm<F>& f) {
  Mat<F> g = f.scalar_form;
  Mat<F> other = adjoint(g);
  if (f.parity == Parity::SkewHermitian) other = other.map([](const F& v) { return -v; });
  return max_magnitude<F>(g - other);
}

/// {f, f'} for cochains f, f' in degree l with t^k f a coboundary: solves
/// delta g = t^k f through the Smith form (adding `kernel_shift`, a cocycle in
/// degree l - 1, to g when given) and returns t^{-k} P(g, f').
template <Field F>
LaurentGerm<F> linking_pairing(const GermComplex<F>& c, std::size_t l, const std::vector<Germ<F>>& f,
                               const std::vector<Germ<F>>& f_prime, int k,
                               const std::vector<Germ<F>>& kernel_shift = {}) {
  require(c.duality.has_value() && l >= 1 && l < c.dims.size(), ErrorCode::InvalidArgument, "linking_pairing setup");
  const auto& delta = c.coboundaries[l - 1];
  auto smith = detail::certified_smith(delta);
  const std::size_t rows = delta.rows(), cols = delta.cols();
  require(f.size() == rows && f_prime.size() == rows, ErrorCode::DimensionMismatch, "cochain length");
  std::vector<Germ<F>> y(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Germ<F> acc;
    for (std::size_t q = 0; q < rows; ++q) acc = acc + smith.u(r, q) * f[q].shifted_up(static_cast<std::size_t>(k));
    y[r] = acc;
  }
  std::vector<Germ<F>> x(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (r < smith.rank()) {
      auto v = y[r].valuation();
      require(!v || *v >= smith.exponents[r], ErrorCode::NoSolution, "t^k f is not a coboundary");
      x[r] = y[r].shifted_down(static_cast<std::size_t>(smith.exponents[r]));
    } else {
      require(y[r].is_zero(), ErrorCode::NoSolution, "t^k f is not a coboundary");
    }
  }
  std::vector<Germ<F>> g(cols);
  for (std::size_t r = 0; r < cols; ++r) {
    Germ<F> acc;
    for (std::size_t q = 0; q < cols && q < smith.rank(); ++q) acc = acc + smith.v(r, q) * x[q];
    if (!kernel_shift.empty()) acc = acc + kernel_shift[r];
    g[r] = acc;
  }
  const auto& p = *c.duality;
  Germ<F> value;
  for (std::size_t r = 0; r < rows; ++r) {
    Germ<F> pg;
    for (std::size_t q = 0; q < cols; ++q) pg = pg + p(r, q) * g[q];
    value = value + f_prime[r].conj() * pg;
  }
  return LaurentGerm<F>(value).shifted(-k);
}

/// A random unitary deformation of rank m on the circle:
/// rho = W(t) diag(zeta_j e^{i c_j s}) W(t)^{-1}, with W(t) the Cayley
/// transform of t K for a random skew-Hermitian K, and zeta_j drawn from
/// unit-circle Gaussian rationals (1 with probability one half). Every
/// summand is torsion or acyclic, so no free part appears.
template <Field F> struct PlantedCircle {
  MonodromyDeformation<F> rho;
  std::vector<long> speeds;                  // c_j
  std::vector<bool> trivial;                 // zeta_j == 1
  std::vector<long> torsion_speeds() const { // c_j of the summands contributing torsion
    std::vector<long> out;
    for (std::size_t j = 0; j < speeds.size(); ++j)
      if (trivial[j] && speeds[j] != 0) out.push_back(speeds[j]);
    return out;
  }
};

template <Field F> PlantedCircle<F> random_circle_deformation(Rng& rng, std::size_t m, int truncation) {
  static const long units[][3] = {{-1, 0, 1}, {0, 1, 1}, {0, -1, 1}, {3, 4, 5}, {5, -12, 13}, {-8, 15, 17}};
  PlantedCircle<F> out;
  GermMatrix<F> diag(m, m, Germ<F>::zero());
  for (std::size_t j = 0; j < m; ++j) {
    const bool trivial = draw(rng, 0, 1) == 1;
    long c = draw(rng, -3, 3);
    // a trivial summand with c = 0 would leave a kernel that truncated data cannot certify
    if (trivial && c == 0) c = draw(rng, 0, 1) ? 1 : -1;
    F zeta = field_traits<F>::one();
    if (!trivial) {
      const auto& u = units[draw(rng, 0, 5)];
      zeta = field_traits<F>::from_parts(mpq_class(u[0], u[2]), mpq_class(u[1], u[2]));
    }
    diag(j, j) = c == 0 ? Germ<F>::constant(zeta) : zeta * Germ<F>::exp_series(from_int<F>(c) * field_traits<F>::imag_unit(), truncation);
    out.speeds.push_back(c);
    out.trivial.push_back(trivial);
  }
  // K = i H with H Hermitian
  Mat<F> k = zeros<F>(m, m);
  for (std::size_t r = 0; r < m; ++r) {
    k(r, r) = field_traits<F>::imag_unit() * from_int<F>(draw(rng, -2, 2));
    for (std::size_t c = r + 1; c < m; ++c) {
      k(r, c) = random_scalar<F>(rng, 2);
      k(c, r) = -conj(k(r, c));
    }
  }
  auto tk = germ_constant(k).map([](const Germ<F>& g) { return g.shifted_up(1); });
  auto id = germ_identity<F>(m);
  auto neumann = [&](const GermMatrix<F>& x) { // (I - x)^{-1} through the truncation
    GermMatrix<F> acc = id, power = id;
    for (int j = 1; j <= truncation; ++j) {
      power = power * x;
      acc = acc + power;
    }
    return acc.map([&](const Germ<F>& g) { return g.truncated(truncation); });
  };
  auto neg = [](const GermMatrix<F>& x) { return x.map([](const Germ<F>& g) { return -g; }); };
  GermMatrix<F> w = (id - tk) * neumann(neg(tk));     // (I - tK)(I + tK)^{-1}
  GermMatrix<F> w_inv = (id + tk) * neumann(tk);      // (I + tK)(I - tK)^{-1}
  out.rho = make_deformation<F>({w * diag * w_inv}, truncation);
  return out;
}

} // namespace etaflow
