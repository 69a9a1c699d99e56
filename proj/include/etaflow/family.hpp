#pragma once

// Polynomial families D(t) = D_0 + t D_1 + ... + t^d D_d of Hermitian matrices:
// the kernel sequence W_1 > W_2 > ... with its forms lambda_i, the Newton
// polygon of det(x - D(t)), an exact signature oracle, the jump formulas and
// the analytic linking form on Cl(im D)/im D.

#include "etaflow/linkform.hpp"
#include "etaflow/polynomial.hpp"
#include "etaflow/smith.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace etaflow {

template <Field F> struct HermitianFamily {
  std::size_t dim = 0;
  std::vector<Mat<F>> coefficients; // D_0 ... D_d
  /// For non-polynomial families: the Taylor data is only known through t^d.
  bool truncated = false;

  std::size_t degree() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  /// D_k, zero beyond the degree of a polynomial family.
  Mat<F> coeff(std::size_t k) const {
    if (k < coefficients.size()) return coefficients[k];
    require(!truncated, ErrorCode::TruncationInsufficient,
            "coefficient D_" + std::to_string(k) + " is beyond the supplied Taylor order " + std::to_string(degree()));
    return zeros<F>(dim, dim);
  }
  Mat<F> at(const F& t) const {
    Mat<F> out = zeros<F>(dim, dim);
    for (std::size_t k = coefficients.size(); k-- > 0;) out = t * out + coefficients[k];
    return out;
  }
};

template <Field F> HermitianFamily<F> make_family(std::vector<Mat<F>> coefficients, bool truncated = false) {
  require(!coefficients.empty(), ErrorCode::InvalidArgument, "a family needs at least D_0");
  const std::size_t n = coefficients.front().rows();
  for (const auto& d : coefficients) {
    require(d.rows() == n && d.cols() == n, ErrorCode::DimensionMismatch, "family coefficients must all be n x n");
    require(approx_equal(d, adjoint(d)), ErrorCode::NotHermitian, "family coefficient is not Hermitian");
  }
  while (!truncated && coefficients.size() > 1 && is_zero_matrix(coefficients.back())) coefficients.pop_back();
  return HermitianFamily<F>{n, std::move(coefficients), truncated};
}

/// D(-t): D_k -> (-1)^k D_k.
template <Field F> HermitianFamily<F> time_reversed(const HermitianFamily<F>& f) {
  auto out = f;
  for (std::size_t k = 1; k < out.coefficients.size(); k += 2)
    out.coefficients[k] = out.coefficients[k].map([](const F& v) { return -v; });
  return out;
}

/// D(c t): D_k -> c^k D_k.
template <Field F> HermitianFamily<F> rescaled(const HermitianFamily<F>& f, const F& c) {
  auto out = f;
  F power = field_traits<F>::one();
  for (auto& d : out.coefficients) {
    d = power * d;
    power *= c;
  }
  return out;
}

/// Sigma = intersection of ker D_k.
template <Field F> Mat<F> common_kernel(const HermitianFamily<F>& f) {
  Mat<F> stacked = zeros<F>(0, f.dim);
  for (const auto& d : f.coefficients) stacked = vconcat(stacked, d);
  return nullspace(stacked);
}

/// Rank of D(t) for generic t: the maximum over n d + 1 integer points, which
/// is certified because every minor has degree at most n d.
template <Field F> std::size_t generic_rank(const HermitianFamily<F>& f) {
  const std::size_t points = f.dim * f.degree() + 1;
  std::size_t best = 0;
  for (std::size_t j = 0; j < points && best < f.dim; ++j)
    best = std::max(best, rank(f.at(from_int<F>(static_cast<long>(j)))));
  return best;
}

// ---- the kernel sequence ---------------------------------------------------

/// Block lower-triangular Toeplitz matrix of the first i equations:
/// sum_{j <= k} D_{k-j} beta_j = 0 for k = 0 .. i-1.
template <Field F> Mat<F> toeplitz_system(const HermitianFamily<F>& f, std::size_t i) {
  const std::size_t n = f.dim;
  Mat<F> m = zeros<F>(i * n, i * n);
  for (std::size_t k = 0; k < i; ++k)
    for (std::size_t j = 0; j <= k; ++j) m.set_block(k * n, j * n, f.coeff(k - j));
  return m;
}

/// W_i: the beta_0 such that the first i equations admit a completion.
template <Field F> Mat<F> kernel_stage(const HermitianFamily<F>& f, std::size_t i) {
  Mat<F> null = nullspace(toeplitz_system(f, i));
  return column_basis(null.block(0, 0, f.dim, null.cols()));
}

/// Some completion (beta_0, ..., beta_{i-1}) of beta_0 in W_i, stacked.
template <Field F> Vec<F> complete_stage(const HermitianFamily<F>& f, std::size_t i, const Vec<F>& beta0) {
  const std::size_t n = f.dim;
  Mat<F> m = toeplitz_system(f, i);
  Vec<F> out = beta0;
  if (i > 1) {
    Mat<F> rest = m.block(0, n, i * n, (i - 1) * n);
    Vec<F> rhs = mat_vec(m.block(0, 0, i * n, n), beta0);
    for (auto& v : rhs) v = -v;
    auto sol = solve(rest, rhs);
    require(sol.has_value(), ErrorCode::NoSolution, "beta_0 is not in W_" + std::to_string(i));
    out.insert(out.end(), sol->begin(), sol->end());
  } else {
    require(is_zero_matrix(Mat<F>::from_columns({mat_vec(m, beta0)}, n, field_traits<F>::zero()),
                           std::max(max_magnitude(m), 1.0)),
            ErrorCode::NoSolution, "beta_0 is not in ker D_0");
  }
  return out;
}

/// Completions of beta_0 = 0, i.e. the freedom in complete_stage.
template <Field F> Mat<F> completion_freedom(const HermitianFamily<F>& f, std::size_t i) {
  const std::size_t n = f.dim;
  if (i <= 1) return zeros<F>(0, 0);
  Mat<F> m = toeplitz_system(f, i);
  return nullspace(m.block(0, n, i * n, (i - 1) * n));
}

/// lambda_i(beta_0, beta'_0) = (beta_0, D_i beta'_0 + D_{i-1} beta'_1 + ... + D_1 beta'_{i-1}),
/// where completion_prime stacks beta'_0 ... beta'_{i-1}.
template <Field F> F lambda_pairing(const HermitianFamily<F>& f, std::size_t i, const Vec<F>& beta0,
                                     const Vec<F>& completion_prime) {
  const std::size_t n = f.dim;
  require(completion_prime.size() == i * n && beta0.size() == n, ErrorCode::DimensionMismatch, "lambda_pairing shape");
  Vec<F> acc(n, field_traits<F>::zero());
  for (std::size_t j = 0; j < i; ++j) {
    Vec<F> part(completion_prime.begin() + static_cast<std::ptrdiff_t>(j * n),
                completion_prime.begin() + static_cast<std::ptrdiff_t>((j + 1) * n));
    Vec<F> image = mat_vec(f.coeff(i - j), part);
    for (std::size_t r = 0; r < n; ++r) acc[r] += image[r];
  }
  F out = field_traits<F>::zero();
  for (std::size_t r = 0; r < n; ++r) out += conj(beta0[r]) * acc[r];
  return out;
}

template <Field F> struct KernelSequence {
  Mat<F> common_kernel;          // Sigma
  Mat<F> stable_kernel;          // beta_0 of formal kernel vectors of D(t); contains Sigma
  std::size_t generic_rank = 0;
  std::vector<Mat<F>> stages;    // stages[i-1] = W_i as a subspace of C^n (contains stable_kernel)
  std::vector<Mat<F>> forms;     // forms[i-1](a, b) = lambda_i(w_a, w_b) on the basis of W_i
  SignatureProfile profile;
};

/// Runs the block-Toeplitz systems until W_{i+1} equals the stable kernel. For a
/// polynomial family that is the subspace of dimension n - generic rank; for a
/// truncated family it is 0, and running past the Taylor data raises
/// TruncationInsufficient.
template <Field F> KernelSequence<F> kernel_sequence(const HermitianFamily<F>& f) {
  KernelSequence<F> out;
  const std::size_t n = f.dim;
  out.common_kernel = column_basis(common_kernel(f));
  // a common kernel read off partial Taylor data is not certified, so a
  // truncated family has to reach W_{i+1} = 0 within its data
  out.generic_rank = f.truncated ? n : generic_rank(f);
  const std::size_t target = n - out.generic_rank;
  const std::size_t max_stage = n * std::max<std::size_t>(f.degree(), 1) + 2;

  std::vector<long> plus, minus;
  Mat<F> wi = kernel_stage(f, 1);
  for (std::size_t i = 1; wi.cols() > target; ++i) {
    require(i <= max_stage, ErrorCode::RoutesDisagree, "kernel sequence failed to stabilize");
    Mat<F> w_next = kernel_stage(f, i + 1);
    std::vector<Vec<F>> completions;
    for (std::size_t c = 0; c < wi.cols(); ++c) completions.push_back(complete_stage(f, i, wi.column(c)));
    const std::size_t k = wi.cols();
    Mat<F> lambda = zeros<F>(k, k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = 0; b < k; ++b) lambda(a, b) = lambda_pairing(f, i, wi.column(a), completions[b]);
    require(is_hermitian(lambda), ErrorCode::RoutesDisagree, "lambda_" + std::to_string(i) + " is not Hermitian");
    Mat<F> annihilator = column_basis(wi * nullspace(lambda));
    require(subspace_equal(annihilator, w_next), ErrorCode::RoutesDisagree,
            "annihilator of lambda_" + std::to_string(i) + " differs from W_" + std::to_string(i + 1));
    // restrict to a complement of W_{i+1}: coordinates of the complement in the W_i basis
    Mat<F> complement = complement_in(wi, w_next);
    std::vector<Vec<F>> coord_cols;
    for (std::size_t c = 0; c < complement.cols(); ++c) coord_cols.push_back(*solve(wi, complement.column(c)));
    Mat<F> coords = Mat<F>::from_columns(coord_cols, k, field_traits<F>::zero());
    Inertia in = inertia(adjoint(coords) * lambda * coords);
    require(in.zero == 0, ErrorCode::RoutesDisagree, "lambda_i is degenerate on W_i / W_{i+1}");
    plus.push_back(static_cast<long>(in.positive));
    minus.push_back(static_cast<long>(in.negative));
    out.stages.push_back(wi);
    out.forms.push_back(lambda);
    wi = w_next;
  }
  out.stable_kernel = wi;
  out.stages.push_back(wi);
  out.profile = SignatureProfile::from_counts(plus, minus);
  return out;
}

/// Compression of D_1 to a complement of Sigma in ker D_0, and its signature.
template <Field F> struct FirstForm {
  Mat<F> form;
  long signature = 0;
};

template <Field F> FirstForm<F> first_form(const HermitianFamily<F>& f) {
  Mat<F> k0 = nullspace(f.coeff(0));
  Mat<F> comp = complement_in(k0, column_basis(common_kernel(f)));
  Mat<F> form = adjoint(comp) * f.coeff(1) * comp;
  return {form, signature(form)};
}

// ---- the signature oracle ----------------------------------------------------

template <Field F> long signature_at(const HermitianFamily<F>& f, const mpq_class& t0) {
  static_assert(field_traits<F>::exact, "the signature oracle needs an exact backend");
  return signature(f.at(field_traits<F>::from_rational(t0)));
}

struct OracleJumps {
  long plus = 0;
  long minus = 0;
  int accepted_at = 0; // k of the accepted scale 10^{-k}
};

/// sig D(+-10^{-k}) - sig D(0) for k = 1, 2, ...; accepted after two consecutive agreements.
template <Field F> OracleJumps oracle_jumps(const HermitianFamily<F>& f, int max_k = 12) {
  const long eta0 = signature_at(f, mpq_class(0));
  std::optional<std::pair<long, long>> previous;
  for (int k = 1; k <= max_k; ++k) {
    mpq_class t0(1);
    for (int j = 0; j < k; ++j) t0 /= 10;
    std::pair<long, long> now{signature_at(f, t0) - eta0, signature_at(f, mpq_class(-t0)) - eta0};
    if (previous && *previous == now) return {now.first, now.second, k};
    previous = now;
  }
  fail(ErrorCode::OracleUnstable, "signature oracle did not stabilize on the schedule 10^-1 ... 10^-" + std::to_string(max_k));
}

struct JumpReport {
  long eta0 = 0;
  long jump_plus = 0;
  long jump_minus = 0;
  long flow = 0;
  SignatureProfile profile;
  bool oracle_checked = false;
  bool oracle_agreement = false;
  OracleJumps oracle;
};

template <Field F> JumpReport jumps(const HermitianFamily<F>& f, bool run_oracle = true) {
  JumpReport r;
  r.eta0 = signature(f.coeff(0));
  r.profile = kernel_sequence(f).profile;
  r.jump_plus = r.profile.jump_plus();
  r.jump_minus = r.profile.jump_minus();
  r.flow = 2 * r.profile.odd_sum();
  if constexpr (field_traits<F>::exact) {
    if (run_oracle) {
      r.oracle = oracle_jumps(f);
      r.oracle_checked = true;
      r.oracle_agreement = r.oracle.plus == r.jump_plus && r.oracle.minus == r.jump_minus;
    }
  }
  return r;
}

// ---- eigenvalue branches from the Newton polygon ----------------------------

struct Branch {
  int order = 0;
  int sign = 0;
  friend bool operator==(const Branch&, const Branch&) = default;
  friend auto operator<=>(const Branch&, const Branch&) = default;
};

struct BranchProfile {
  std::vector<Branch> vanishing; // sorted by (order, sign)
  std::size_t identically_zero = 0;
  std::size_t nonzero_positive = 0;
  std::size_t nonzero_negative = 0;

  std::size_t total() const { return vanishing.size() + identically_zero + nonzero_positive + nonzero_negative; }
  SignatureProfile to_profile() const {
    std::vector<long> plus, minus;
    for (const auto& b : vanishing) {
      const auto i = static_cast<std::size_t>(b.order);
      if (plus.size() < i) {
        plus.resize(i, 0);
        minus.resize(i, 0);
      }
      (b.sign > 0 ? plus : minus)[i - 1] += 1;
    }
    return SignatureProfile::from_counts(plus, minus);
  }
};

/// Coefficients c_j(t) of det(x I - D(t)) = sum_j c_j(t) x^j, as polynomials in t.
inline std::vector<Poly<GaussianRational>> characteristic_coefficients(const HermitianFamily<GaussianRational>& f) {
  using Q = GaussianRational;
  const std::size_t n = f.dim;
  const std::size_t points = n * f.degree() + 1;
  std::vector<Q> nodes;
  std::vector<std::vector<Q>> values(n + 1);
  for (std::size_t j = 0; j < points; ++j) {
    Q t = from_int<Q>(static_cast<long>(j));
    nodes.push_back(t);
    auto p = characteristic_polynomial(f.at(t));
    for (std::size_t k = 0; k <= n; ++k) values[k].push_back(p.coeff(k));
  }
  std::vector<Poly<Q>> out;
  for (std::size_t k = 0; k <= n; ++k) out.push_back(interpolate(nodes, values[k]));
  return out;
}

/// Orders and leading signs of the eigenvalue branches mu(t) of D(t) with
/// mu(0) = 0, read off the Newton polygon of det(x I - D(t)) in (x, t).
inline BranchProfile branch_profile(const HermitianFamily<GaussianRational>& f) {
  require(!f.truncated, ErrorCode::InvalidArgument, "branch_profile needs a polynomial family");
  const std::size_t n = f.dim;
  auto c = characteristic_coefficients(f);
  auto real_coeff = [](const GaussianRational& v) {
    require(v.im == 0, ErrorCode::NonRealLeadingCoefficient, "characteristic polynomial has non-real coefficients");
    return v.re;
  };
  BranchProfile out;
  std::size_t j0 = 0;
  while (j0 <= n && c[j0].is_zero()) ++j0;
  out.identically_zero = j0;
  std::size_t j1 = j0;
  while (c[j1].valuation() != 0) ++j1;
  // branches with mu(0) != 0: roots of det(x - D_0) / x^{j1}
  QPolynomial at_zero;
  for (std::size_t j = j1; j <= n; ++j) at_zero.push_back(real_coeff(c[j].coeff(0)));
  auto nonzero = count_real_roots(at_zero);
  require(nonzero.all_real(), ErrorCode::NonRealLeadingCoefficient, "D_0 has non-real eigenvalues");
  out.nonzero_positive = nonzero.positive;
  out.nonzero_negative = nonzero.negative;

  // lower convex hull of (j, ord c_j) from j0 to j1
  std::size_t current = j0;
  while (current < j1) {
    const long vc = c[current].valuation();
    // the edge leaving `current` has minimal slope; it ends at the farthest point on it
    std::size_t next = current;
    mpq_class best;
    for (std::size_t j = current + 1; j <= j1; ++j) {
      if (c[j].is_zero()) continue;
      mpq_class slope(c[j].valuation() - vc, static_cast<long>(j - current));
      slope.canonicalize();
      if (next == current || slope <= best) {
        best = slope;
        next = j;
      }
    }
    require(best.get_den() == 1, ErrorCode::NonRealLeadingCoefficient,
            "Newton polygon edge has non-integer slope " + best.get_str());
    const long order = -best.get_num().get_si();
    QPolynomial edge;
    for (std::size_t j = current; j <= next; ++j) {
      if (c[j].is_zero()) {
        edge.push_back(0);
        continue;
      }
      const long v = c[j].valuation();
      // on the edge: v_j = v_c - order (j - current)
      if (v == vc - order * static_cast<long>(j - current))
        edge.push_back(real_coeff(c[j].coeff(static_cast<std::size_t>(v))));
      else
        edge.push_back(0);
    }
    auto roots = count_real_roots(edge);
    require(roots.all_real() && roots.zero == 0, ErrorCode::NonRealLeadingCoefficient,
            "edge polynomial of order " + std::to_string(order) + " has non-real roots");
    for (std::size_t k = 0; k < roots.positive; ++k) out.vanishing.push_back({static_cast<int>(order), +1});
    for (std::size_t k = 0; k < roots.negative; ++k) out.vanishing.push_back({static_cast<int>(order), -1});
    current = next;
  }
  std::sort(out.vanishing.begin(), out.vanishing.end());
  return out;
}

// ---- the analytic linking form ---------------------------------------------

template <Field F> GermMatrix<F> family_as_germs(const HermitianFamily<F>& f) {
  const std::size_t n = f.dim;
  const int order = f.truncated ? static_cast<int>(f.degree()) : kExactOrder;
  GermMatrix<F> out(n, n, Germ<F>::zero(order));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<F> coeffs;
      for (const auto& d : f.coefficients) coeffs.push_back(d(r, c));
      out(r, c) = Germ<F>(coeffs, order);
    }
  return out;
}

/// Torsion form on Cl(im D)/im D from a Smith decomposition U D V = S.
/// With f_a = U^{-1} e_a and h_a = V e_a one has t^{k_a} f_a = D h_a, and
/// {f_a, f_b} = <D^{-1} f_a, f_b> = t^{-k_a} conj(f_b)^T h_a mod O.
/// The complex basis is t^p f_a (0 <= p < k_a); J shifts p.
template <Field F> TorsionForm<F> torsion_form_from_smith(const SmithForm<F>& s, Parity parity,
                                                           const std::function<Germ<F>(std::size_t, std::size_t)>& pairing_numerator,
                                                           bool validate = true) {
  std::vector<std::size_t> gens;
  std::vector<int> exps;
  for (std::size_t a = 0; a < s.exponents.size(); ++a)
    if (s.exponents[a] > 0) {
      gens.push_back(a);
      exps.push_back(s.exponents[a]);
    }
  std::vector<std::size_t> offset(gens.size() + 1, 0);
  for (std::size_t g = 0; g < gens.size(); ++g) offset[g + 1] = offset[g] + static_cast<std::size_t>(exps[g]);
  const std::size_t dim = offset.back();
  Mat<F> j = zeros<F>(dim, dim), g = zeros<F>(dim, dim);
  for (std::size_t x = 0; x < gens.size(); ++x)
    for (int p = 0; p + 1 < exps[x]; ++p) j(offset[x] + static_cast<std::size_t>(p) + 1, offset[x] + static_cast<std::size_t>(p)) = field_traits<F>::one();
  for (std::size_t x = 0; x < gens.size(); ++x)
    for (std::size_t y = 0; y < gens.size(); ++y) {
      // {f_x, f_y} = t^{-k_x} num(t); coefficient of t^{-1-p-q} is num_{k_x - 1 - p - q}
      Germ<F> num = pairing_numerator(gens[x], gens[y]);
      for (int p = 0; p < exps[x]; ++p)
        for (int q = 0; q < exps[y]; ++q) {
          const int idx = exps[x] - 1 - p - q;
          if (idx < 0) continue;
          require(idx <= num.order(), ErrorCode::TruncationInsufficient, "linking pairing needs more Taylor coefficients");
          g(offset[y] + static_cast<std::size_t>(q), offset[x] + static_cast<std::size_t>(p)) = num.coeff(static_cast<std::size_t>(idx));
        }
    }
  if (!validate) return TorsionForm<F>{dim, j, g, parity};
  return make_torsion_form(j, g, parity);
}

template <Field F> Germ<F> conj_dot(const GermMatrix<F>& left, std::size_t lcol, const GermMatrix<F>& right, std::size_t rcol) {
  Germ<F> acc;
  for (std::size_t r = 0; r < left.rows(); ++r) acc = acc + left(r, lcol).conj() * right(r, rcol);
  return acc;
}

/// The linking form of the family, built from a Smith decomposition of D(t)
/// over O (independently of the kernel sequence). Truncation doubles until the
/// decomposition resolves the generic rank and every needed coefficient is known.
template <Field F> TorsionForm<F> analytic_linking_form(const HermitianFamily<F>& f) {
  const auto germs = family_as_germs(f);
  const std::size_t r = f.truncated ? f.dim : generic_rank(f);
  auto build = [&](int n) {
    auto s = smith_over_O(germs, n);
    require(s.rank() >= r, ErrorCode::TruncationInsufficient, "Smith form did not resolve the generic rank");
    return torsion_form_from_smith<F>(s, Parity::Hermitian, [&](std::size_t a, std::size_t b) {
      return conj_dot(s.u_inv, b, s.v, a);
    });
  };
  if (f.truncated) return build(static_cast<int>(f.degree()));
  const int start = std::max<int>(8, static_cast<int>(2 * f.dim * std::max<std::size_t>(f.degree(), 1)));
  return with_auto_truncation(start, 1024, build);
}

} // namespace etaflow
