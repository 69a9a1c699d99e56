#pragma once

// Linear algebra over a backend field: row reduction, nullspaces, subspace
// bookkeeping and the inertia of Hermitian forms. Subspaces are represented
// by basis matrices whose columns are linearly independent.

#include "etaflow/matrix.hpp"
#include "etaflow/scalar.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace etaflow {

template <Field F> using Vec = std::vector<F>;
template <Field F> using Mat = Matrix<F>;

template <Field F> Mat<F> zeros(std::size_t r, std::size_t c) { return Mat<F>(r, c, field_traits<F>::zero()); }
template <Field F> Mat<F> identity(std::size_t n) {
  return Mat<F>::identity(n, field_traits<F>::zero(), field_traits<F>::one());
}

template <Field F> Mat<F> adjoint(const Mat<F>& m) {
  Mat<F> out(m.cols(), m.rows(), field_traits<F>::zero());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = conj(m(r, c));
  return out;
}

template <Field F> double max_magnitude(const Mat<F>& m) {
  double s = 0.0;
  for (const auto& x : m.data()) s = std::max(s, field_traits<F>::magnitude(x));
  return s;
}

template <Field F> bool is_zero_matrix(const Mat<F>& m, double scale = 1.0) {
  for (const auto& x : m.data())
    if (!is_zero(x, scale)) return false;
  return true;
}

template <Field F> bool approx_equal(const Mat<F>& a, const Mat<F>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  double scale = std::max({max_magnitude(a), max_magnitude(b), 1.0});
  return is_zero_matrix<F>(a - b, scale);
}

template <Field F> Vec<F> mat_vec(const Mat<F>& m, const Vec<F>& v) {
  require(m.cols() == v.size(), ErrorCode::DimensionMismatch, "matrix-vector shape");
  Vec<F> out(m.rows(), field_traits<F>::zero());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out[r] += m(r, c) * v[c];
  return out;
}

/// Reduced row echelon form. The float backend pivots on the largest entry.
template <Field F> struct RowEchelon {
  Mat<F> reduced;
  std::vector<std::size_t> pivot_columns;
  std::size_t rank() const { return pivot_columns.size(); }
};

template <Field F> RowEchelon<F> row_reduce(Mat<F> m) {
  const double scale = std::max(max_magnitude(m), 1.0);
  RowEchelon<F> out;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = m.rows();
    if constexpr (field_traits<F>::exact) {
      for (std::size_t r = row; r < m.rows(); ++r)
        if (!is_zero(m(r, col))) {
          pivot = r;
          break;
        }
    } else {
      double best = 0.0;
      for (std::size_t r = row; r < m.rows(); ++r) {
        double mag = field_traits<F>::magnitude(m(r, col));
        if (mag > best && !is_zero(m(r, col), scale)) {
          best = mag;
          pivot = r;
        }
      }
    }
    if (pivot == m.rows()) continue;
    m.swap_rows(row, pivot);
    F inv = field_traits<F>::one() / m(row, col);
    for (std::size_t c = col; c < m.cols(); ++c) m(row, c) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || is_zero(m(r, col))) continue;
      F factor = m(r, col);
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
    }
    out.pivot_columns.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

template <Field F> std::size_t rank(const Mat<F>& m) { return row_reduce(m).rank(); }

/// Basis (as columns) of {x : m x = 0}.
template <Field F> Mat<F> nullspace(const Mat<F>& m) {
  auto ech = row_reduce(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto c : ech.pivot_columns) is_pivot[c] = true;
  std::vector<Vec<F>> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec<F> v(n, field_traits<F>::zero());
    v[free] = field_traits<F>::one();
    for (std::size_t k = 0; k < ech.pivot_columns.size(); ++k) v[ech.pivot_columns[k]] = -ech.reduced(k, free);
    basis.push_back(std::move(v));
  }
  return Mat<F>::from_columns(basis, n, field_traits<F>::zero());
}

/// Independent columns spanning the same space as the columns of m.
template <Field F> Mat<F> column_basis(const Mat<F>& m) {
  auto ech = row_reduce(m);
  std::vector<Vec<F>> cols;
  for (auto c : ech.pivot_columns) cols.push_back(m.column(c));
  return Mat<F>::from_columns(cols, m.rows(), field_traits<F>::zero());
}

/// Some x with m x = b, if one exists.
template <Field F> std::optional<Vec<F>> solve(const Mat<F>& m, const Vec<F>& b) {
  require(m.rows() == b.size(), ErrorCode::DimensionMismatch, "solve shape");
  Mat<F> aug = hconcat(m, Mat<F>::from_columns({b}, b.size(), field_traits<F>::zero()));
  auto ech = row_reduce(aug);
  if (!ech.pivot_columns.empty() && ech.pivot_columns.back() == m.cols()) return std::nullopt;
  Vec<F> x(m.cols(), field_traits<F>::zero());
  for (std::size_t k = 0; k < ech.pivot_columns.size(); ++k) x[ech.pivot_columns[k]] = ech.reduced(k, m.cols());
  return x;
}

template <Field F> std::optional<Mat<F>> inverse(const Mat<F>& m) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  auto ech = row_reduce(hconcat(m, identity<F>(n)));
  if (ech.rank() < n || (n > 0 && ech.pivot_columns[n - 1] != n - 1)) return std::nullopt;
  return ech.reduced.block(0, n, n, n);
}

template <Field F> F determinant(Mat<F> m) {
  require(m.rows() == m.cols(), ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  F det = field_traits<F>::one();
  const std::size_t n = m.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = col; r < n; ++r)
      if (!is_zero(m(r, col))) {
        pivot = r;
        break;
      }
    if (pivot == n) return field_traits<F>::zero();
    if (pivot != col) {
      m.swap_rows(pivot, col);
      det = -det;
    }
    det *= m(col, col);
    F inv = field_traits<F>::one() / m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (is_zero(m(r, col))) continue;
      F factor = m(r, col) * inv;
      for (std::size_t c = col; c < n; ++c) m(r, c) -= factor * m(col, c);
    }
  }
  return det;
}

// ---- subspaces -------------------------------------------------------------

/// Sum of two subspaces of the same ambient space.
template <Field F> Mat<F> subspace_sum(const Mat<F>& a, const Mat<F>& b) { return column_basis(hconcat(a, b)); }

/// Intersection of two subspaces given by basis columns.
template <Field F> Mat<F> subspace_intersection(const Mat<F>& a, const Mat<F>& b) {
  const std::size_t n = std::max(a.rows(), b.rows());
  if (a.cols() == 0 || b.cols() == 0) return zeros<F>(n, 0);
  // a x = b y  <=>  [a, -b] (x; y) = 0
  Mat<F> neg_b = b.map([](const F& v) { return -v; });
  Mat<F> null = nullspace(hconcat(a, neg_b));
  Mat<F> top = null.block(0, 0, a.cols(), null.cols());
  return column_basis(a * top);
}

template <Field F> bool subspace_contains(const Mat<F>& big, const Mat<F>& small) {
  if (small.cols() == 0) return true;
  return rank(hconcat(big, small)) == rank(big);
}

template <Field F> bool subspace_equal(const Mat<F>& a, const Mat<F>& b) {
  return rank(a) == rank(b) && subspace_contains(a, b) && subspace_contains(b, a);
}

/// Columns extending a basis of sub to a basis of whole (sub must lie in whole).
template <Field F> Mat<F> complement_in(const Mat<F>& whole, const Mat<F>& sub) {
  const std::size_t n = whole.rows();
  Mat<F> combined = hconcat(sub.cols() ? sub : zeros<F>(n, 0), whole);
  auto ech = row_reduce(combined);
  std::vector<Vec<F>> cols;
  for (auto c : ech.pivot_columns)
    if (c >= sub.cols()) cols.push_back(combined.column(c));
  return Mat<F>::from_columns(cols, n, field_traits<F>::zero());
}

/// Gram matrix of the form [u, v] = v^* G u on the columns of basis:
/// entry (a, b) = [basis_b, basis_a], i.e. basis^* G basis.
template <Field F> Mat<F> gram(const Mat<F>& g, const Mat<F>& basis) { return adjoint(basis) * g * basis; }

// ---- inertia ---------------------------------------------------------------

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
  long signature() const { return static_cast<long>(positive) - static_cast<long>(negative); }
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

template <Field F> bool is_hermitian(const Mat<F>& h) {
  return h.rows() == h.cols() && approx_equal(h, adjoint(h));
}

/// Inertia of a Hermitian matrix by congruence (symmetric pivoting). In the
/// exact backends every step is exact.
template <Field F> Inertia inertia(Mat<F> h) {
  require(h.rows() == h.cols(), ErrorCode::DimensionMismatch, "inertia of non-square matrix");
  require(is_hermitian(h), ErrorCode::NotHermitian, "inertia of non-Hermitian matrix");
  const double scale = std::max(max_magnitude(h), 1.0);
  std::size_t n = h.rows();
  Inertia out;
  std::vector<std::size_t> active(n);
  for (std::size_t k = 0; k < n; ++k) active[k] = k;
  while (!active.empty()) {
    // choose the pivot: nonzero diagonal, largest magnitude in the float case
    std::size_t best = active.size();
    double best_mag = 0.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
      const F& d = h(active[a], active[a]);
      if (is_zero(d, scale)) continue;
      double mag = field_traits<F>::magnitude(d);
      if (best == active.size() || (!field_traits<F>::exact && mag > best_mag)) {
        best = a;
        best_mag = mag;
      }
      if (field_traits<F>::exact) break;
    }
    if (best == active.size()) {
      // all diagonals vanish: find an off-diagonal entry
      std::size_t j = n, k = n;
      for (std::size_t a = 0; a < active.size() && j == n; ++a)
        for (std::size_t b = 0; b < active.size(); ++b)
          if (a != b && !is_zero(h(active[a], active[b]), scale)) {
            j = active[a];
            k = active[b];
            break;
          }
      if (j == n) {
        out.zero += active.size();
        break;
      }
      // row_j += c row_k, col_j += conj(c) col_k with c = h_jk, so the new
      // (j,j) entry is 2 |h_jk|^2
      F c = h(j, k);
      for (std::size_t col = 0; col < n; ++col) h(j, col) += c * h(k, col);
      for (std::size_t row = 0; row < n; ++row) h(row, j) += conj(c) * h(row, k);
      continue;
    }
    std::size_t p = active[best];
    F d = h(p, p);
    int s = field_traits<F>::real_sign(d, scale);
    if (s > 0) ++out.positive;
    else if (s < 0) ++out.negative;
    else ++out.zero;
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best));
    F inv = field_traits<F>::one() / d;
    for (auto r : active) {
      if (is_zero(h(r, p))) continue;
      F factor = h(r, p) * inv;
      for (auto c : active) h(r, c) -= factor * h(p, c);
      h(r, p) = field_traits<F>::zero();
    }
    for (auto r : active) h(p, r) = field_traits<F>::zero();
  }
  return out;
}

template <Field F> long signature(const Mat<F>& h) { return inertia(h).signature(); }

} // namespace etaflow
