#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace etaflow;
using Q = GaussianRational;

namespace {

Mat<Q> diagonal(std::vector<long> d) {
  Mat<Q> m = zeros<Q>(d.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) m(k, k) = from_int<Q>(d[k]);
  return m;
}

} // namespace

TEST(Oracle, InertiaOfKnownMatrices) {
  auto c = oracle::inertia(diagonal({1, -2, 3, 0}));
  EXPECT_EQ(c.positive, 2);
  EXPECT_EQ(c.negative, 1);
  // [[0, i], [-i, 0]] has eigenvalues +-1
  Mat<Q> h = zeros<Q>(2, 2);
  h(0, 1) = Q{0, 1};
  h(1, 0) = Q{0, -1};
  c = oracle::inertia(h);
  EXPECT_EQ(c.positive, 1);
  EXPECT_EQ(c.negative, 1);
}

TEST(Oracle, JumpsOfADiagonalFamily) {
  // diag(t, t^2, -t^3): sig D(0+) = 1, sig D(0-) = 1, sig D(0) = 0
  auto z = zeros<Q>(3, 3);
  auto o = oracle::family_jumps({z, diagonal({1, 0, 0}), diagonal({0, 1, 0}), diagonal({0, 0, -1})});
  EXPECT_EQ(o.eta0, 0);
  EXPECT_EQ(o.plus, 1);
  EXPECT_EQ(o.minus, 1);
  // [[1, t], [t, 0]]: eigenvalues 1 and -t^2 near 0
  Mat<Q> d1 = zeros<Q>(2, 2);
  d1(0, 1) = d1(1, 0) = Q(1);
  auto p = oracle::family_jumps({diagonal({1, 0}), d1});
  EXPECT_EQ(p.eta0, 1);
  EXPECT_EQ(p.plus, -1);
  EXPECT_EQ(p.minus, -1);
}

TEST(Oracle, TrefoilSignatures) {
  const std::vector<std::vector<long>> trefoil{{-1, 1}, {0, -1}};
  EXPECT_EQ(oracle::levine_tristram(trefoil, oracle::circle_point(mpq_class(1, 2))), 0);
  EXPECT_EQ(oracle::levine_tristram(trefoil, oracle::circle_point(mpq_class(3))), -2);
  EXPECT_EQ(oracle::circle_point(mpq_class(1)), (Q{0, 1}));
}

TEST(Oracle, GermDeterminant) {
  GermMatrix<Q> m(2, 2, Germ<Q>::zero());
  m(0, 0) = Germ<Q>::polynomial({Q(1), Q(1)});
  m(0, 1) = Germ<Q>::one();
  m(1, 0) = Germ<Q>::one();
  m(1, 1) = Germ<Q>::one();
  EXPECT_EQ(oracle::germ_determinant<Q>(m).valuation(), 1);
}
