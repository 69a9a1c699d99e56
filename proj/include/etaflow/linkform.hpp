#pragma once

// Torsion O-modules with (skew-)Hermitian linking forms, stored as the pair
// (J, G): J is the nilpotent action of t on T = C^n and G is the Gram matrix
// of the scalar form [x, y] = Res {x, y} = y^* G x (linear in the first slot,
// conjugate-linear in the second). The linking form itself is recovered as
// {x, y} = sum_k [J^k x, y] t^{-k-1}.

#include "etaflow/germ.hpp"
#include "etaflow/linalg.hpp"

#include <string>
#include <vector>

namespace etaflow {

enum class Parity { Hermitian, SkewHermitian };

inline std::string parity_name(Parity p) { return p == Parity::Hermitian ? "hermitian" : "skew-hermitian"; }

/// n_i^+, n_i^- and sigma_i for i = 1, 2, ...; entry k holds index i = k + 1.
struct SignatureProfile {
  std::vector<long> n_plus;
  std::vector<long> n_minus;
  std::vector<long> sigma;

  static SignatureProfile from_counts(std::vector<long> plus, std::vector<long> minus) {
    SignatureProfile p;
    const std::size_t len = std::max(plus.size(), minus.size());
    plus.resize(len, 0);
    minus.resize(len, 0);
    p.n_plus = std::move(plus);
    p.n_minus = std::move(minus);
    p.sigma.resize(len);
    for (std::size_t k = 0; k < len; ++k) p.sigma[k] = p.n_plus[k] - p.n_minus[k];
    p.trim();
    return p;
  }

  long plus(std::size_t i) const { return i >= 1 && i <= n_plus.size() ? n_plus[i - 1] : 0; }
  long minus(std::size_t i) const { return i >= 1 && i <= n_minus.size() ? n_minus[i - 1] : 0; }
  long sig(std::size_t i) const { return plus(i) - minus(i); }

  /// Smallest i0 such that every entry with index > i0 vanishes.
  std::size_t stabilization_index() const { return n_plus.size(); }

  /// sum_i sigma_i
  long jump_plus() const {
    long s = 0;
    for (auto v : sigma) s += v;
    return s;
  }
  /// sum_i (-1)^i sigma_i
  long jump_minus() const {
    long s = 0;
    for (std::size_t k = 0; k < sigma.size(); ++k) s += ((k + 1) % 2 == 0 ? 1 : -1) * sigma[k];
    return s;
  }
  long odd_sum() const {
    long s = 0;
    for (std::size_t k = 0; k < sigma.size(); k += 2) s += sigma[k];
    return s;
  }
  long even_sum() const {
    long s = 0;
    for (std::size_t k = 1; k < sigma.size(); k += 2) s += sigma[k];
    return s;
  }
  /// sum_i i (n_i^+ + n_i^-), the complex dimension of T.
  long weighted_dimension() const {
    long s = 0;
    for (std::size_t k = 0; k < n_plus.size(); ++k) s += static_cast<long>(k + 1) * (n_plus[k] + n_minus[k]);
    return s;
  }

  friend SignatureProfile operator+(const SignatureProfile& a, const SignatureProfile& b) {
    const std::size_t len = std::max(a.n_plus.size(), b.n_plus.size());
    std::vector<long> plus(len), minus(len);
    for (std::size_t i = 1; i <= len; ++i) {
      plus[i - 1] = a.plus(i) + b.plus(i);
      minus[i - 1] = a.minus(i) + b.minus(i);
    }
    return from_counts(plus, minus);
  }
  friend bool operator==(const SignatureProfile& a, const SignatureProfile& b) {
    return a.n_plus == b.n_plus && a.n_minus == b.n_minus;
  }

  std::string to_string() const {
    std::string s = "sigma=(";
    for (std::size_t k = 0; k < sigma.size(); ++k) s += (k ? "," : "") + std::to_string(sigma[k]);
    s += ") n+=(";
    for (std::size_t k = 0; k < n_plus.size(); ++k) s += (k ? "," : "") + std::to_string(n_plus[k]);
    s += ") n-=(";
    for (std::size_t k = 0; k < n_minus.size(); ++k) s += (k ? "," : "") + std::to_string(n_minus[k]);
    return s + ")";
  }

private:
  void trim() {
    while (!n_plus.empty() && n_plus.back() == 0 && n_minus.back() == 0) {
      n_plus.pop_back();
      n_minus.pop_back();
      sigma.pop_back();
    }
  }
};

template <Field F> struct TorsionForm {
  std::size_t dim = 0;
  Mat<F> t_action;    // J
  Mat<F> scalar_form; // G
  Parity parity = Parity::Hermitian;
};

template <Field F> Mat<F> matrix_power(const Mat<F>& m, std::size_t k) {
  Mat<F> out = identity<F>(m.rows());
  for (std::size_t i = 0; i < k; ++i) out = out * m;
  return out;
}

/// Smallest k with J^k = 0 (0 for the zero-dimensional module).
template <Field F> std::size_t nilpotency_index(const Mat<F>& j) {
  const std::size_t n = j.rows();
  Mat<F> power = identity<F>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    if (is_zero_matrix(power, std::max(max_magnitude(j), 1.0))) return k;
    power = power * j;
  }
  fail(ErrorCode::NotNilpotent, "t-action is not nilpotent");
}

template <Field F> TorsionForm<F> make_torsion_form(Mat<F> j, Mat<F> g, Parity parity) {
  require(j.rows() == j.cols() && g.rows() == g.cols() && j.rows() == g.rows(), ErrorCode::DimensionMismatch,
          "J and G must be square matrices of equal size");
  const std::size_t n = j.rows();
  (void)nilpotency_index(j);
  if (parity == Parity::Hermitian)
    require(approx_equal(g, adjoint(g)), ErrorCode::NotHermitian, "scalar form is not Hermitian");
  else
    require(approx_equal(g, adjoint(g).map([](const F& v) { return -v; })), ErrorCode::NotSkewHermitian,
            "scalar form is not skew-Hermitian");
  require(rank(g) == n, ErrorCode::Degenerate, "scalar form is degenerate");
  require(approx_equal<F>(g * j, adjoint(j) * g), ErrorCode::NotSelfAdjoint, "t is not self-adjoint: GJ != J^*G");
  return TorsionForm<F>{n, std::move(j), std::move(g), parity};
}

/// {x, y} as a principal part: sum_k [J^k x, y] t^{-k-1}.
template <Field F> LaurentGerm<F> eval_linking(const TorsionForm<F>& f, const Vec<F>& x, const Vec<F>& y) {
  require(x.size() == f.dim && y.size() == f.dim, ErrorCode::DimensionMismatch, "vector length must equal dim T");
  const std::size_t n = f.dim;
  if (n == 0) return LaurentGerm<F>();
  // coefficients of t^{-n} ... t^{-1}
  std::vector<F> c(n, field_traits<F>::zero());
  Vec<F> jx = x;
  for (std::size_t k = 0; k < n; ++k) {
    Vec<F> gx = mat_vec(f.scalar_form, jx);
    F value = field_traits<F>::zero();
    for (std::size_t r = 0; r < n; ++r) value += conj(y[r]) * gx[r];
    c[n - 1 - k] = value;
    jx = mat_vec(f.t_action, jx);
  }
  return LaurentGerm<F>(-static_cast<int>(n), std::move(c), kExactOrder);
}

/// O / t^i O with {x, x} = c t^{-i}; basis x, tx, ..., t^{i-1}x.
template <Field F> TorsionForm<F> block_form(std::size_t i, const F& c) {
  require(i >= 1, ErrorCode::InvalidArgument, "block order must be >= 1");
  require(!is_zero(c) && c == conj(c), ErrorCode::InvalidArgument, "block coefficient must be a nonzero real");
  Mat<F> j = zeros<F>(i, i), g = zeros<F>(i, i);
  for (std::size_t a = 0; a + 1 < i; ++a) j(a + 1, a) = field_traits<F>::one();
  for (std::size_t a = 0; a < i; ++a) g(i - 1 - a, a) = c;
  return TorsionForm<F>{i, j, g, Parity::Hermitian};
}

template <Field F> TorsionForm<F> direct_sum(const TorsionForm<F>& a, const TorsionForm<F>& b) {
  require(a.parity == b.parity, ErrorCode::ParityMismatch, "direct sum of forms with different parity");
  const F z = field_traits<F>::zero();
  return TorsionForm<F>{a.dim + b.dim, block_diagonal(a.t_action, b.t_action, z),
                        block_diagonal(a.scalar_form, b.scalar_form, z), a.parity};
}

template <Field F> TorsionForm<F> skew_to_hermitian(const TorsionForm<F>& f) {
  require(f.parity == Parity::SkewHermitian, ErrorCode::AlreadyHermitian, "form is already Hermitian");
  const F i = field_traits<F>::imag_unit();
  return TorsionForm<F>{f.dim, f.t_action, f.scalar_form.map([&](const F& v) { return i * v; }), Parity::Hermitian};
}

/// Transports the form along an O-module automorphism P (P J = J P, P invertible):
/// the new scalar form is [x, y]' = [P x, P y].
template <Field F> TorsionForm<F> congruence(const TorsionForm<F>& f, const Mat<F>& p) {
  require(p.rows() == f.dim && p.cols() == f.dim, ErrorCode::DimensionMismatch, "congruence matrix shape");
  require(approx_equal<F>(p * f.t_action, f.t_action * p), ErrorCode::NotInvertibleOverO,
          "change of basis does not commute with the module structure");
  require(rank(p) == f.dim, ErrorCode::NotInvertibleOverO, "change of basis is not invertible");
  return TorsionForm<F>{f.dim, f.t_action, adjoint(p) * f.scalar_form * p, f.parity};
}

/// The action of a germ u(t) = sum u_k t^k on T, i.e. sum u_k J^k.
template <Field F> Mat<F> action_of(const TorsionForm<F>& f, const Germ<F>& u) {
  Mat<F> out = zeros<F>(f.dim, f.dim);
  Mat<F> power = identity<F>(f.dim);
  for (std::size_t k = 0; k < f.dim; ++k) {
    require(static_cast<int>(k) <= u.order() || is_zero_matrix(power), ErrorCode::TruncationInsufficient,
            "germ truncation is too short for this module");
    out = out + u.coeff(k) * power;
    power = power * f.t_action;
  }
  return out;
}

/// Rewrites the form in new complex coordinates x = S x' (any invertible S).
template <Field F> TorsionForm<F> change_coordinates(const TorsionForm<F>& f, const Mat<F>& s) {
  auto s_inv = inverse(s);
  require(s_inv.has_value(), ErrorCode::InvalidArgument, "coordinate change is singular");
  return TorsionForm<F>{f.dim, *s_inv * f.t_action * s, adjoint(s) * f.scalar_form * s, f.parity};
}

// ---- the spectral sequences of quadratic forms -----------------------------

enum class ProfileRoute { V, W, Both };

namespace detail {

template <Field F> struct KernelTower {
  std::vector<Mat<F>> t;      // t[i] = basis of T_i = ker J^i, i = 0..N+1
  std::vector<Mat<F>> power;  // power[i] = J^i
};

template <Field F> KernelTower<F> kernel_tower(const TorsionForm<F>& f) {
  const std::size_t top = nilpotency_index(f.t_action);
  KernelTower<F> tower;
  Mat<F> power = identity<F>(f.dim);
  for (std::size_t i = 0; i <= top + 1; ++i) {
    tower.power.push_back(power);
    tower.t.push_back(nullspace(power));
    power = power * f.t_action;
  }
  return tower;
}

template <Field F> Inertia nondegenerate_inertia(const Mat<F>& g, const Mat<F>& lhs_basis, const Mat<F>& rhs_basis) {
  // Gram matrix with entry (b, a) = rhs_b^* G lhs_a
  Mat<F> gram_matrix = adjoint(rhs_basis) * g * lhs_basis;
  Inertia in = inertia(gram_matrix);
  require(in.zero == 0, ErrorCode::RoutesDisagree, "quotient form is degenerate");
  return in;
}

} // namespace detail

/// V route: T_i = ker J^i, V_i = T_i / J T_{i+1}, forms
/// l_i(x, y) = [J^{i-1} x, y]. Verifies ker l_i = V_{i-1} at every step.
template <Field F> SignatureProfile profile_v_route(const TorsionForm<F>& f) {
  require(f.parity == Parity::Hermitian, ErrorCode::SkewInput, "apply skew_to_hermitian before extracting signatures");
  auto tower = detail::kernel_tower(f);
  const std::size_t top = tower.t.size() - 2;
  std::vector<long> plus, minus;
  for (std::size_t i = 1; i <= top; ++i) {
    const Mat<F>& ti = tower.t[i];
    Mat<F> jt_next = column_basis(f.t_action * tower.t[i + 1]);
    Mat<F> previous = subspace_sum(tower.t[i - 1], jt_next); // preimage of V_{i-1} in T_i
    Mat<F> shifted = tower.power[i - 1] * ti;
    // kernel of l_i on T_i
    Mat<F> gram_matrix = adjoint(ti) * f.scalar_form * shifted;
    Mat<F> kernel = column_basis(ti * nullspace(gram_matrix));
    require(subspace_equal(kernel, previous), ErrorCode::RoutesDisagree, "annihilator of l_i differs from V_{i-1}");
    Mat<F> complement = complement_in(ti, previous);
    Inertia in = detail::nondegenerate_inertia(f.scalar_form, tower.power[i - 1] * complement, complement);
    plus.push_back(static_cast<long>(in.positive));
    minus.push_back(static_cast<long>(in.negative));
  }
  return SignatureProfile::from_counts(plus, minus);
}

/// The decreasing filtration W_i = J^{i-1} T_i with lambda_i(x, y) = [a, y],
/// J^{i-1} a = x. Verifies that the annihilator of lambda_i is W_{i+1}.
template <Field F> SignatureProfile profile_w_route(const TorsionForm<F>& f) {
  require(f.parity == Parity::Hermitian, ErrorCode::SkewInput, "apply skew_to_hermitian before extracting signatures");
  auto tower = detail::kernel_tower(f);
  const std::size_t top = tower.t.size() - 2;
  auto w_space = [&](std::size_t i) { return column_basis(tower.power[i - 1] * tower.t[i]); };
  std::vector<long> plus, minus;
  Mat<F> wi = w_space(1);
  for (std::size_t i = 1; i <= top; ++i) {
    Mat<F> w_next = w_space(i + 1);
    Mat<F> image_map = tower.power[i - 1] * tower.t[i];
    // lift every basis vector of W_i to T_i
    std::vector<Vec<F>> lifts;
    for (std::size_t c = 0; c < wi.cols(); ++c) {
      auto coords = solve(image_map, wi.column(c));
      require(coords.has_value(), ErrorCode::RoutesDisagree, "W_i element has no preimage in T_i");
      lifts.push_back(mat_vec(tower.t[i], *coords));
    }
    Mat<F> lift = Mat<F>::from_columns(lifts, f.dim, field_traits<F>::zero());
    Mat<F> lambda = adjoint(wi) * f.scalar_form * lift;
    require(is_hermitian(lambda), ErrorCode::RoutesDisagree, "lambda_i is not Hermitian");
    Mat<F> annihilator = column_basis(wi * nullspace(lambda));
    require(subspace_equal(annihilator, w_next), ErrorCode::RoutesDisagree, "annihilator of lambda_i differs from W_{i+1}");
    Mat<F> complement = complement_in(wi, w_next);
    std::vector<Vec<F>> complement_lifts;
    for (std::size_t c = 0; c < complement.cols(); ++c) {
      auto coords = solve(image_map, complement.column(c));
      complement_lifts.push_back(mat_vec(tower.t[i], *coords));
    }
    Mat<F> comp_lift = Mat<F>::from_columns(complement_lifts, f.dim, field_traits<F>::zero());
    Inertia in = detail::nondegenerate_inertia(f.scalar_form, comp_lift, complement);
    plus.push_back(static_cast<long>(in.positive));
    minus.push_back(static_cast<long>(in.negative));
    wi = w_next;
  }
  return SignatureProfile::from_counts(plus, minus);
}

template <Field F> SignatureProfile signature_profile(const TorsionForm<F>& f, ProfileRoute route = ProfileRoute::Both) {
  switch (route) {
  case ProfileRoute::V: return profile_v_route(f);
  case ProfileRoute::W: return profile_w_route(f);
  case ProfileRoute::Both: {
    auto v = profile_v_route(f);
    auto w = profile_w_route(f);
    require(v == w, ErrorCode::RoutesDisagree, "V-route " + v.to_string() + " vs W-route " + w.to_string());
    return v;
  }
  }
  return {};
}

/// True iff T = A (+) B as O-modules and the linking form vanishes on A x A and B x B.
template <Field F> bool is_hyperbolic_witness(const TorsionForm<F>& f, const Mat<F>& a, const Mat<F>& b) {
  if (a.rows() != f.dim || b.rows() != f.dim) return false;
  if (rank(a) != a.cols() || rank(b) != b.cols()) return false;
  if (a.cols() + b.cols() != f.dim || rank(hconcat(a, b)) != f.dim) return false;
  if (!subspace_contains(a, f.t_action * a) || !subspace_contains(b, f.t_action * b)) return false;
  auto vanishes_on = [&](const Mat<F>& s) {
    for (std::size_t x = 0; x < s.cols(); ++x)
      for (std::size_t y = 0; y < s.cols(); ++y)
        if (!eval_linking(f, s.column(x), s.column(y)).is_zero()) return false;
    return true;
  };
  return vanishes_on(a) && vanishes_on(b);
}

} // namespace etaflow
