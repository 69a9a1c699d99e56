#pragma once

// Seeded corpora of Hermitian families. Planted instances are congruences
// U(t)^* Lambda(t) U(t) of diagonal families with known branch orders; the
// other kinds are random draws whose answers come from the signature oracle.

#include "etaflow/family.hpp"
#include "etaflow/generators.hpp"

#include <optional>
#include <sstream>
#include <string>

namespace etaflow {

struct CorpusSpec {
  std::size_t max_dim = 6;
  std::size_t max_degree = 3;
  std::size_t max_order = 3;       // planted branch orders are drawn from [1, max_order]
  bool planted_constant = true;    // U constant, Lambda of degree <= max_degree
  bool planted_linear = true;      // U(t) = U_0 + t U_1
  bool random_kernel = true;       // random coefficients around an engineered kernel
  bool rank_deficient = true;      // D = M(t)^* C(t) M(t) with M of fewer rows
  bool empty = false;
};

/// "default", "orders1", "planted", "random", "empty", or comma-separated
/// overrides such as "default,n=4,d=2".
inline CorpusSpec parse_corpus_spec(const std::string& text) {
  CorpusSpec spec;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item == "default") continue;
    if (item == "empty") {
      spec.empty = true;
    } else if (item == "orders1") {
      spec.max_order = 1;
      spec.random_kernel = spec.rank_deficient = false;
    } else if (item == "planted") {
      spec.random_kernel = spec.rank_deficient = false;
    } else if (item == "random") {
      spec.planted_constant = spec.planted_linear = false;
    } else if (auto eq = item.find('='); eq != std::string::npos) {
      const std::string key = item.substr(0, eq);
      long value = 0;
      try {
        value = std::stol(item.substr(eq + 1));
      } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "corpus spec: bad number in '" + item + "'");
      }
      require(value >= 1, ErrorCode::ParseError, "corpus spec: '" + item + "' must be positive");
      if (key == "n") spec.max_dim = static_cast<std::size_t>(value);
      else if (key == "d") spec.max_degree = static_cast<std::size_t>(value);
      else if (key == "order") spec.max_order = static_cast<std::size_t>(value);
      else fail(ErrorCode::ParseError, "corpus spec: unknown key '" + key + "'");
    } else {
      fail(ErrorCode::ParseError, "corpus spec: unknown item '" + item + "'");
    }
  }
  require(spec.max_dim <= 8 && spec.max_degree <= 4, ErrorCode::InvalidArgument, "corpus bounds are n <= 8, d <= 4");
  spec.max_order = std::min(spec.max_order, spec.max_degree);
  return spec;
}

struct CorpusFamily {
  HermitianFamily<GaussianRational> family;
  std::string kind;
  std::optional<SignatureProfile> planted; // known answer, when constructed
};

namespace detail {

using Q = GaussianRational;
using QPolyMatrix = std::vector<Mat<Q>>; // coefficient matrices

inline QPolyMatrix poly_mul(const QPolyMatrix& a, const QPolyMatrix& b) {
  QPolyMatrix out(a.size() + b.size() - 1, zeros<Q>(a.front().rows(), b.front().cols()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = out[i + j] + a[i] * b[j];
  return out;
}

inline QPolyMatrix poly_adjoint(const QPolyMatrix& a) {
  QPolyMatrix out;
  for (const auto& m : a) out.push_back(adjoint(m));
  return out;
}

inline Mat<Q> random_hermitian(Rng& rng, std::size_t n, long bound) {
  Mat<Q> m = zeros<Q>(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    m(r, r) = from_int<Q>(draw(rng, -bound, bound));
    for (std::size_t c = r + 1; c < n; ++c) {
      m(r, c) = random_scalar<Q>(rng, bound);
      m(c, r) = conj(m(r, c));
    }
  }
  return m;
}

struct DiagonalPlan {
  QPolyMatrix lambda;
  SignatureProfile profile;
};

/// diag(+-t^i (1 + a t), nonzero constants, zeros) of degree <= max_degree.
inline DiagonalPlan diagonal_plan(Rng& rng, std::size_t n, std::size_t max_degree, std::size_t max_order) {
  DiagonalPlan plan;
  plan.lambda.assign(max_degree + 1, zeros<Q>(n, n));
  std::vector<BlockSpec> blocks;
  for (std::size_t k = 0; k < n; ++k) {
    const long kind = draw(rng, 0, 9);
    const long sign = draw(rng, 0, 1) ? 1 : -1;
    if (kind == 0) continue; // identically zero entry
    if (kind <= 2 || max_order == 0) {
      plan.lambda[0](k, k) = from_int<Q>(sign * draw(rng, 1, 3));
      continue;
    }
    const std::size_t i = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(max_order)));
    plan.lambda[i](k, k) = from_int<Q>(sign);
    if (i < max_degree) plan.lambda[i + 1](k, k) = from_int<Q>(sign * draw(rng, -2, 2));
    blocks.push_back({i, sign});
  }
  plan.profile = profile_of_blocks<Q>(blocks);
  return plan;
}

inline HermitianFamily<Q> to_family(const QPolyMatrix& coeffs) { return make_family<Q>(coeffs); }

} // namespace detail

/// Deterministic per (spec, seed): instance k draws from its own stream.
inline std::vector<CorpusFamily> generate_corpus(const CorpusSpec& spec, std::uint64_t seed, std::size_t count) {
  using detail::Q;
  std::vector<CorpusFamily> out;
  if (spec.empty) return out;
  std::vector<int> kinds;
  if (spec.planted_constant) kinds.push_back(0);
  if (spec.planted_linear && spec.max_degree >= 3) kinds.push_back(1);
  if (spec.random_kernel) kinds.push_back(2);
  if (spec.rank_deficient && spec.max_degree >= 3) kinds.push_back(3);
  if (kinds.empty()) kinds.push_back(0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    Rng rng(seed * 1000003ULL + idx);
    const std::size_t n = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(spec.max_dim)));
    const std::size_t d = static_cast<std::size_t>(draw(rng, 1, static_cast<long>(spec.max_degree)));
    const int kind = kinds[idx % kinds.size()];
    CorpusFamily item;
    switch (kind) {
    case 0: {
      auto plan = detail::diagonal_plan(rng, n, d, std::min(spec.max_order, d));
      Mat<Q> u = random_invertible<Q>(rng, n, 1);
      detail::QPolyMatrix coeffs;
      for (const auto& l : plan.lambda) coeffs.push_back(adjoint(u) * l * u);
      item = {detail::to_family(coeffs), "planted-constant", plan.profile};
      break;
    }
    case 1: {
      // Lambda of degree max_degree - 2, U(t) = U_0 + t U_1
      const std::size_t ld = spec.max_degree - 2;
      auto plan = detail::diagonal_plan(rng, n, ld, std::min(spec.max_order, ld));
      detail::QPolyMatrix u{random_invertible<Q>(rng, n, 1), random_matrix<Q>(rng, n, n, 1)};
      auto coeffs = detail::poly_mul(detail::poly_mul(detail::poly_adjoint(u), plan.lambda), u);
      item = {detail::to_family(coeffs), "planted-linear", plan.profile};
      break;
    }
    case 2: {
      // D_0 with a kernel of chosen size, a common kernel of chosen size, random higher terms
      const std::size_t common = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(n) / 3));
      const std::size_t live = n - common;
      const std::size_t kernel0 = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(live)));
      Mat<Q> r = random_invertible<Q>(rng, n, 1);
      detail::QPolyMatrix coeffs;
      for (std::size_t k = 0; k <= d; ++k) {
        Mat<Q> block = zeros<Q>(n, n);
        Mat<Q> h = detail::random_hermitian(rng, live, 2);
        if (k == 0) {
          h = zeros<Q>(live, live);
          for (std::size_t j = 0; j < live - kernel0; ++j) h(j, j) = from_int<Q>(draw(rng, 0, 1) ? 1 : -2);
        } else if (k >= 2 && draw(rng, 0, 1)) {
          h = zeros<Q>(live, live);
        }
        block.set_block(0, 0, h);
        coeffs.push_back(adjoint(r) * block * r);
      }
      item = {detail::to_family(coeffs), "random-kernel", std::nullopt};
      break;
    }
    default: {
      // M(t)^* C(t) M(t): generic rank < n with a rotating kernel
      const std::size_t rows = static_cast<std::size_t>(draw(rng, 1, std::max<long>(1, static_cast<long>(n) - 1)));
      detail::QPolyMatrix m{random_matrix<Q>(rng, rows, n, 1), random_matrix<Q>(rng, rows, n, 1)};
      detail::QPolyMatrix c(2, zeros<Q>(rows, rows));
      for (std::size_t j = 0; j < rows; ++j) {
        const long sign = draw(rng, 0, 1) ? 1 : -1;
        (draw(rng, 0, 1) ? c[0] : c[1])(j, j) = from_int<Q>(sign);
      }
      auto coeffs = detail::poly_mul(detail::poly_mul(detail::poly_adjoint(m), c), m);
      item = {detail::to_family(coeffs), "rank-deficient", std::nullopt};
      break;
    }
    }
    out.push_back(std::move(item));
  }
  return out;
}

} // namespace etaflow
