#pragma once

// Smith normal form over the truncated power series ring O: U D V = S with
// S = diag(t^{k_1}, ..., t^{k_r}, 0, ...), k_1 <= k_2 <= ... and U, V
// invertible over O. Precision is tracked entrywise through Germ orders.

#include "etaflow/germ.hpp"
#include "etaflow/matrix.hpp"

#include <functional>
#include <vector>

namespace etaflow {

template <Field F> using GermMatrix = Matrix<Germ<F>>;

template <Field F> GermMatrix<F> germ_identity(std::size_t n) {
  return GermMatrix<F>::identity(n, Germ<F>::zero(), Germ<F>::one());
}

template <Field F> struct SmithForm {
  std::vector<int> exponents; // k_a of the nonzero pivots, nondecreasing
  GermMatrix<F> u;            // row transformation
  GermMatrix<F> u_inv;
  GermMatrix<F> v;            // column transformation
  /// Diagonal positions that are zero through the working truncation.
  std::size_t unresolved = 0;
  /// Smallest truncation order among the entries left in the zero block;
  /// kExactOrder when that block is exactly zero.
  int residual_order = kExactOrder;

  std::size_t rank() const { return exponents.size(); }
  bool residual_exact() const { return residual_order >= kExactOrder; }
  std::vector<int> torsion_exponents() const {
    std::vector<int> out;
    for (int k : exponents)
      if (k > 0) out.push_back(k);
    return out;
  }
};

/// Smith form of d after truncating every entry at `truncation`.
/// Pivot rule: minimal valuation, ties broken by lowest row, then lowest column.
template <Field F> SmithForm<F> smith_over_O(const GermMatrix<F>& d, int truncation) {
  const std::size_t m = d.rows(), n = d.cols();
  // exact zeros stay exact so that a vanishing residual block can be certified
  auto cut = [&](const Germ<F>& g) { return g.is_exact() && g.coeffs().empty() ? g : g.truncated(truncation); };
  GermMatrix<F> a = d.map(cut);
  SmithForm<F> out;
  out.u = germ_identity<F>(m).map([&](const Germ<F>& g) { return g.truncated(truncation); });
  out.u_inv = out.u;
  out.v = germ_identity<F>(n).map([&](const Germ<F>& g) { return g.truncated(truncation); });

  const std::size_t diag = std::min(m, n);
  std::size_t step = 0;
  for (; step < diag; ++step) {
    // pivot search
    std::size_t pr = m, pc = n;
    int best = kExactOrder;
    for (std::size_t r = step; r < m; ++r)
      for (std::size_t c = step; c < n; ++c) {
        auto val = a(r, c).valuation();
        if (val && *val < best) {
          best = *val;
          pr = r;
          pc = c;
        }
      }
    if (pr == m) break;
    if (pr != step) {
      a.swap_rows(pr, step);
      out.u.swap_rows(pr, step);
      out.u_inv.swap_cols(pr, step);
    }
    if (pc != step) {
      a.swap_cols(pc, step);
      out.v.swap_cols(pc, step);
    }
    const std::size_t k = static_cast<std::size_t>(best);
    // normalize the pivot to t^k
    Germ<F> unit = a(step, step).shifted_down(k);
    Germ<F> unit_inv = unit.unit_inverse();
    for (std::size_t c = step; c < n; ++c) a(step, c) = unit_inv * a(step, c);
    for (std::size_t c = 0; c < m; ++c) {
      out.u(step, c) = unit_inv * out.u(step, c);
      out.u_inv(c, step) = out.u_inv(c, step) * unit;
    }
    const int pivot_order = a(step, step).order();
    // clear the pivot column
    for (std::size_t r = step + 1; r < m; ++r) {
      if (a(r, step).is_zero()) continue;
      Germ<F> factor = a(r, step).shifted_down(k);
      for (std::size_t c = step; c < n; ++c) a(r, c) = a(r, c) - factor * a(step, c);
      for (std::size_t c = 0; c < m; ++c) {
        out.u(r, c) = out.u(r, c) - factor * out.u(step, c);
        out.u_inv(c, step) = out.u_inv(c, step) + out.u_inv(c, r) * factor;
      }
    }
    // clear the pivot row
    for (std::size_t c = step + 1; c < n; ++c) {
      if (a(step, c).is_zero()) continue;
      Germ<F> factor = a(step, c).shifted_down(k);
      for (std::size_t r = step; r < m; ++r) a(r, c) = a(r, c) - a(r, step) * factor;
      for (std::size_t r = 0; r < n; ++r) out.v(r, c) = out.v(r, c) - out.v(r, step) * factor;
    }
    for (std::size_t r = step + 1; r < m; ++r) a(r, step) = Germ<F>::zero(a(r, step).order());
    for (std::size_t c = step + 1; c < n; ++c) a(step, c) = Germ<F>::zero(a(step, c).order());
    a(step, step) = Germ<F>::monomial(field_traits<F>::one(), k, pivot_order);
    out.exponents.push_back(best);
  }
  out.unresolved = diag - step;
  for (std::size_t r = step; r < m; ++r)
    for (std::size_t c = step; c < n; ++c) out.residual_order = std::min(out.residual_order, a(r, c).order());
  return out;
}

/// Runs fn(N) for N = start, 2 start, ... until it stops throwing
/// TruncationInsufficient; gives up beyond max_truncation.
template <class Fn> auto with_auto_truncation(int start, int max_truncation, Fn&& fn) -> decltype(fn(start)) {
  for (int n = std::max(start, 1);; n *= 2) {
    try {
      return fn(n);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::TruncationInsufficient || n * 2 > max_truncation) throw;
    }
  }
}

/// Smith form with truncation doubling until the number of resolved pivots
/// reaches the known generic rank.
template <Field F>
SmithForm<F> smith_certified(const GermMatrix<F>& d, std::size_t generic_rank, int start = 8, int max_truncation = 1024) {
  return with_auto_truncation(start, max_truncation, [&](int n) {
    auto s = smith_over_O(d, n);
    require(s.rank() >= generic_rank, ErrorCode::TruncationInsufficient,
            "Smith form resolved " + std::to_string(s.rank()) + " pivots at truncation " + std::to_string(n) +
                ", generic rank is " + std::to_string(generic_rank));
    return s;
  });
}

} // namespace etaflow
