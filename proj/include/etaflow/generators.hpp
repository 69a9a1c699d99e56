#pragma once

// Random linking forms with known signature profiles. All draws go through
// rng() % k so that a seed produces the same objects on every platform.

#include "etaflow/linkform.hpp"

#include <random>

namespace etaflow {

using Rng = std::mt19937_64;

inline long draw(Rng& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

template <Field F> F random_scalar(Rng& rng, long bound = 3) {
  return field_traits<F>::from_parts(mpq_class(draw(rng, -bound, bound)), mpq_class(draw(rng, -bound, bound)));
}

template <Field F> Mat<F> random_matrix(Rng& rng, std::size_t r, std::size_t c, long bound = 3) {
  Mat<F> m = zeros<F>(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = random_scalar<F>(rng, bound);
  return m;
}

template <Field F> Mat<F> random_invertible(Rng& rng, std::size_t n, long bound = 2) {
  for (;;) {
    Mat<F> m = random_matrix<F>(rng, n, n, bound);
    if (rank(m) == n) return m;
  }
}

/// A random invertible matrix commuting with J, i.e. an O-module automorphism.
template <Field F> Mat<F> random_automorphism(Rng& rng, const Mat<F>& j, long bound = 2) {
  const std::size_t n = j.rows();
  // P J - J P = 0 as a linear system in the n^2 entries of P (row-major)
  Mat<F> system = zeros<F>(n * n, n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t eq = r * n + c;
      for (std::size_t k = 0; k < n; ++k) {
        system(eq, r * n + k) += j(k, c);
        system(eq, k * n + c) -= j(r, k);
      }
    }
  Mat<F> basis = nullspace(system);
  for (;;) {
    Vec<F> entries(n * n, field_traits<F>::zero());
    for (std::size_t b = 0; b < basis.cols(); ++b) {
      F coeff = random_scalar<F>(rng, bound);
      for (std::size_t e = 0; e < n * n; ++e) entries[e] += coeff * basis(e, b);
    }
    Mat<F> p = zeros<F>(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) p(r, c) = entries[r * n + c];
    if (rank(p) == n) return p;
  }
}

struct BlockSpec {
  std::size_t order;
  long sign;
};

/// A random Hermitian form together with the profile it was built from.
template <Field F> struct PlantedForm {
  TorsionForm<F> form;
  SignatureProfile profile;
  std::vector<BlockSpec> blocks;
};

template <Field F> TorsionForm<F> form_from_blocks(const std::vector<BlockSpec>& blocks, std::vector<long> magnitudes = {}) {
  TorsionForm<F> out{0, zeros<F>(0, 0), zeros<F>(0, 0), Parity::Hermitian};
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    long m = k < magnitudes.size() ? magnitudes[k] : 1;
    out = direct_sum(out, block_form<F>(blocks[k].order, from_int<F>(blocks[k].sign * m)));
  }
  return out;
}

template <Field F> SignatureProfile profile_of_blocks(const std::vector<BlockSpec>& blocks) {
  std::vector<long> plus, minus;
  for (const auto& b : blocks) {
    if (plus.size() < b.order) {
      plus.resize(b.order, 0);
      minus.resize(b.order, 0);
    }
    (b.sign > 0 ? plus : minus)[b.order - 1] += 1;
  }
  return SignatureProfile::from_counts(plus, minus);
}

/// Block sum with random orders in [1, max_order], then a random O-automorphism
/// and a random change of complex coordinates.
template <Field F> PlantedForm<F> random_planted_form(Rng& rng, std::size_t max_dim, std::size_t max_order) {
  std::vector<BlockSpec> blocks;
  std::vector<long> magnitudes;
  std::size_t dim = 0;
  const std::size_t target = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_dim)));
  while (dim < target) {
    std::size_t order = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(std::min(max_order, target - dim))));
    blocks.push_back({order, draw(rng, 0, 1) ? 1L : -1L});
    magnitudes.push_back(draw(rng, 1, 3));
    dim += order;
  }
  auto base = form_from_blocks<F>(blocks, magnitudes);
  auto twisted = congruence(base, random_automorphism(rng, base.t_action));
  auto moved = change_coordinates(twisted, random_invertible<F>(rng, dim));
  return {moved, profile_of_blocks<F>(blocks), blocks};
}

/// Hyperbolic plane on O/t^i + O/t^i with {a, b} = u t^{-i} and isotropic summands.
template <Field F> TorsionForm<F> hyperbolic_form(std::size_t i, const Germ<F>& u) {
  require(i >= 1, ErrorCode::InvalidArgument, "hyperbolic order must be >= 1");
  const std::size_t n = 2 * i;
  Mat<F> j = zeros<F>(n, n), g = zeros<F>(n, n);
  for (std::size_t p = 0; p + 1 < i; ++p) {
    j(p + 1, p) = field_traits<F>::one();
    j(i + p + 1, i + p) = field_traits<F>::one();
  }
  // [t^p a, t^q b] = coefficient of t^{-1} in u t^{p+q-i} = u_{i-1-p-q}
  for (std::size_t p = 0; p < i; ++p)
    for (std::size_t q = 0; p + q < i; ++q) {
      F c = u.coeff(static_cast<int>(i - 1 - p - q));
      g(i + q, p) = c;       // [t^p a, t^q b]
      g(p, i + q) = conj(c); // [t^q b, t^p a]
    }
  return make_torsion_form(j, g, Parity::Hermitian);
}

/// A metabolic form with a Lagrangian of half dimension: even-order blocks
/// (Lagrangian t^{i/2} O x) and pairs block(i, c) + block(i, -c) (Lagrangian
/// spanned by x + y).
template <Field F> struct MetabolicForm {
  TorsionForm<F> form;
  Mat<F> lagrangian;
};

template <Field F> MetabolicForm<F> random_metabolic_form(Rng& rng, std::size_t pieces, std::size_t max_order) {
  TorsionForm<F> out{0, zeros<F>(0, 0), zeros<F>(0, 0), Parity::Hermitian};
  std::vector<Vec<F>> lag;
  auto pad = [&](std::size_t offset) {
    for (auto& v : lag) v.resize(offset, field_traits<F>::zero());
  };
  for (std::size_t k = 0; k < pieces; ++k) {
    const std::size_t offset = out.dim;
    if (draw(rng, 0, 1)) {
      std::size_t i = 2 * static_cast<std::size_t>(draw(rng, 1, std::max<long>(1, static_cast<long>(max_order / 2))));
      out = direct_sum(out, block_form<F>(i, from_int<F>(draw(rng, 0, 1) ? 2 : -3)));
      pad(out.dim);
      for (std::size_t p = i / 2; p < i; ++p) {
        Vec<F> v(out.dim, field_traits<F>::zero());
        v[offset + p] = field_traits<F>::one();
        lag.push_back(v);
      }
    } else {
      std::size_t i = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_order)));
      F c = from_int<F>(draw(rng, 1, 3));
      out = direct_sum(direct_sum(out, block_form<F>(i, c)), block_form<F>(i, -c));
      pad(out.dim);
      for (std::size_t p = 0; p < i; ++p) {
        Vec<F> v(out.dim, field_traits<F>::zero());
        v[offset + p] = field_traits<F>::one();
        v[offset + i + p] = field_traits<F>::one();
        lag.push_back(v);
      }
    }
  }
  pad(out.dim);
  Mat<F> s = random_invertible<F>(rng, out.dim);
  auto moved = change_coordinates(out, s);
  // coordinates transform as x' = S^{-1} x
  Mat<F> lagrangian = *inverse(s) * Mat<F>::from_columns(lag, out.dim, field_traits<F>::zero());
  return {moved, lagrangian};
}

} // namespace etaflow
