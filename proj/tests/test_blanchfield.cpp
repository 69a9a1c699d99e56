#include "etaflow/blanchfield.hpp"

#include <gtest/gtest.h>

using namespace etaflow;
using Q = GaussianRational;

namespace {

const SeifertMatrix kTrefoil{{-1, 1}, {0, -1}};
const SeifertMatrix kFigureEight{{1, 1}, {0, -1}};

LaurentPoly poly(std::vector<long> c, int low = 0) {
  std::vector<Q> q;
  for (long v : c) q.push_back(from_int<Q>(v));
  return LaurentPoly(low, Poly<Q>(std::move(q)));
}

/// Equality up to a unit +-tau^k of Lambda.
bool associated(const LaurentPoly& a, const LaurentPoly& b) {
  for (int sign : {1, -1}) {
    auto shifted = b * LaurentPoly::tau(a.low() - b.low());
    if (a == (sign > 0 ? shifted : -shifted)) return true;
  }
  return false;
}

/// Multiplicity of xi as a root, from successive derivatives.
std::size_t derivative_multiplicity(const LaurentPoly& p, const Cyclotomic& xi) {
  auto d = p.poly();
  std::size_t k = 0;
  while (!d.is_zero()) {
    std::vector<Cyclotomic> c;
    for (const auto& v : d.coeffs()) c.push_back(LaurentPoly::lift<Cyclotomic>(v));
    if (!Poly<Cyclotomic>(c)(xi).is_zero()) break;
    d = d.derivative();
    ++k;
  }
  return k;
}

} // namespace

TEST(LaurentPoly, Arithmetic) {
  auto a = poly({1, -1}, -1); // tau^-1 - 1
  EXPECT_EQ(a.low(), -1);
  EXPECT_EQ(a.high(), 0);
  EXPECT_EQ(a.bar(), poly({-1, 1})); // tau - 1
  EXPECT_EQ(a * LaurentPoly::tau(), poly({1, -1}));
  EXPECT_EQ(poly({0, 0, 3}).low(), 2);
  EXPECT_EQ(a.evaluate<Q>(from_int<Q>(2)), Q(mpq_class(-1, 2)));
}

TEST(Alexander, TrefoilDeterminant) {
  auto m = alexander_module(kTrefoil);
  EXPECT_TRUE(associated(laurent_determinant(m.presentation), poly({1, -1, 1})));
}

TEST(Alexander, FigureEightDeterminant) {
  auto m = alexander_module(kFigureEight);
  EXPECT_TRUE(associated(laurent_determinant(m.presentation), poly({1, -3, 1})));
}

TEST(Alexander, UnknotIsTrivial) {
  auto m = alexander_module({});
  EXPECT_EQ(m.size(), 0u);
  EXPECT_EQ(localize_at(m, LocalizationPoint::root_of_unity(1, 6)).dimension, 0u);
}

TEST(Alexander, RejectsNonSeifertMatrices) {
  try {
    alexander_module({{1, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotASeifertMatrix);
  }
}

TEST(Alexander, PairingIsHermitian) {
  auto m = alexander_module(kTrefoil);
  EXPECT_EQ(m.parity, Parity::Hermitian);
  // a skew witness with the same data is rejected
  EXPECT_THROW(make_lambda_module(m.presentation, m.pairing_numerator, m.pairing_denominator, Parity::SkewHermitian), Error);
}

TEST(Localize, Trefoil) {
  auto m = alexander_module(kTrefoil);
  EXPECT_EQ(localize_at(m, LocalizationPoint::root_of_unity(1, 6)).dimension, 1u);
  EXPECT_EQ(localize_at(m, LocalizationPoint::root_of_unity(5, 6)).dimension, 1u);
  EXPECT_EQ(localize_at(m, LocalizationPoint::root_of_unity(1, 2)).dimension, 0u);
  EXPECT_EQ(localize_at(m, LocalizationPoint::from_angle(0.3)).dimension, 0u);
  EXPECT_EQ(localize_at(m, LocalizationPoint::from_angle(std::numbers::pi / 3)).dimension, 1u);
}

TEST(Localize, RepeatedRoot) {
  // trefoil # trefoil: det = (tau^2 - tau + 1)^2 up to units
  SeifertMatrix v{{-1, 1, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 1}, {0, 0, 0, -1}};
  auto m = alexander_module(v);
  const auto xi = LocalizationPoint::root_of_unity(1, 6);
  auto local = localize_at(m, xi);
  EXPECT_EQ(local.dimension, 2u);
  EXPECT_EQ(local.dimension, derivative_multiplicity(laurent_determinant(m.presentation), xi.cyclotomic()));
  auto push = pushforward_as<Cyclotomic>(m, xi);
  EXPECT_EQ(push.dimension(), 2u);
  EXPECT_EQ(push.profile.odd_sum(), 2 * pushforward_as<Cyclotomic>(alexander_module(kTrefoil), xi).profile.odd_sum());
}

TEST(LevineTristram, Trefoil) {
  EXPECT_EQ(levine_tristram(kTrefoil, {-1.0, 0.0}), -2);
  EXPECT_EQ(levine_tristram(kTrefoil, std::polar(1.0, 0.2)), 0);
  EXPECT_EQ(levine_tristram(kFigureEight, {-1.0, 0.0}), 0);
  EXPECT_EQ(levine_tristram({}, {-1.0, 0.0}), 0);
  EXPECT_THROW(levine_tristram(kTrefoil, {1.0, 0.0}), Error);
  for (double a : {0.4, 1.3, 2.9})
    EXPECT_EQ(levine_tristram(kTrefoil, std::polar(1.0, a)), levine_tristram(kTrefoil, std::polar(1.0, -a)));
}

TEST(Pushforward, TrefoilPinsTheSign) {
  auto m = alexander_module(kTrefoil);
  const auto xi = LocalizationPoint::root_of_unity(1, 6);
  auto push = pushforward_as<Cyclotomic>(m, xi);
  ASSERT_TRUE(push.form.has_value());
  EXPECT_EQ(push.dimension(), 1u);
  auto lt = levine_tristram_jump(kTrefoil, xi.angle);
  EXPECT_EQ(std::abs(lt.jump()), 2);
  EXPECT_EQ(lt.jump(), -2);
  EXPECT_EQ(push.profile.odd_sum(), 1);
  EXPECT_EQ(pushforward_jump(push.profile), lt.jump());
}

TEST(Pushforward, NoTorsionAwayFromRoots) {
  auto m = alexander_module(kTrefoil);
  EXPECT_EQ(pushforward_as<Cyclotomic>(m, LocalizationPoint::root_of_unity(1, 2)).dimension(), 0u);
  EXPECT_EQ(pushforward_as<Cyclotomic>(m, LocalizationPoint::root_of_unity(0, 1)).dimension(), 0u);
  EXPECT_EQ(pushforward_as<Cyclotomic>(alexander_module(kFigureEight), LocalizationPoint::root_of_unity(0, 1)).dimension(), 0u);
}

TEST(Pushforward, FloatAgreesWithExact) {
  auto m = alexander_module(kTrefoil);
  auto exact = pushforward_as<Cyclotomic>(m, LocalizationPoint::root_of_unity(5, 6));
  auto approx = pushforward_as<std::complex<double>>(m, LocalizationPoint::from_angle(5 * std::numbers::pi / 3));
  EXPECT_EQ(exact.profile, approx.profile);
  EXPECT_EQ(exact.exponents, approx.exponents);
}

TEST(Pushforward, TruncationTooShort) {
  SeifertMatrix v{{-1, 1, 0, 0}, {0, -1, 0, 0}, {0, 0, -1, 1}, {0, 0, 0, -1}};
  auto m = alexander_module(v);
  try {
    pushforward_as<Cyclotomic>(m, LocalizationPoint::root_of_unity(1, 6), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationInsufficient);
  }
}

TEST(Pushforward, FreeSummandsAddNoTorsion) {
  // coker P diag(A, 0, 0) Q = T + Lambda^2 for unimodular constant P, Q
  auto knot = alexander_module(kTrefoil);
  const std::size_t n = 4;
  LaurentMatrix padded(n, n);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) padded(r, c) = knot.presentation(r, c);
  LaurentMatrix p(n, n), q(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    p(r, r) = q(r, r) = LaurentPoly(1);
    if (r + 1 < n) {
      p(r, r + 1) = LaurentPoly(2);
      q(r + 1, r) = LaurentPoly(-1);
    }
  }
  auto mixed = make_lambda_module(p * padded * q);
  EXPECT_EQ(laurent_rank(mixed.presentation), 2u);
  for (auto xi : {LocalizationPoint::root_of_unity(1, 6), LocalizationPoint::root_of_unity(1, 2)}) {
    auto push = pushforward_as<Cyclotomic>(mixed, xi);
    EXPECT_FALSE(push.form.has_value());
    EXPECT_EQ(push.dimension(), localize_at(knot, xi).dimension);
    EXPECT_EQ(localize_at(mixed, xi).dimension, localize_at(knot, xi).dimension);
  }
}

namespace {

SeifertMatrix block_sum(const std::vector<SeifertMatrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  SeifertMatrix v(n, std::vector<long>(n, 0));
  std::size_t at = 0;
  for (const auto& b : blocks) {
    for (std::size_t r = 0; r < b.size(); ++r)
      for (std::size_t c = 0; c < b.size(); ++c) v[at + r][at + c] = b[r][c];
    at += b.size();
  }
  return v;
}

SeifertMatrix mirror(const SeifertMatrix& v) {
  SeifertMatrix out = v;
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r][c] = -v[c][r];
  return out;
}

/// P^T V P for a random unimodular integer P (a product of elementary moves).
SeifertMatrix random_congruence(Rng& rng, SeifertMatrix v) {
  const std::size_t n = v.size();
  for (int move = 0; move < 6 && n > 1; ++move) {
    const std::size_t i = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(n) - 1));
    std::size_t j = static_cast<std::size_t>(draw(rng, 0, static_cast<long>(n) - 2));
    if (j >= i) ++j;
    const long k = draw(rng, 0, 1) ? 1 : -1;
    // column i += k column j, then row i += k row j
    for (std::size_t r = 0; r < n; ++r) v[r][i] += k * v[r][j];
    for (std::size_t c = 0; c < n; ++c) v[i][c] += k * v[j][c];
  }
  return v;
}

} // namespace

TEST(Properties, CongruentSumsOfKnownKnots) {
  const std::vector<SeifertMatrix> pieces{kTrefoil, mirror(kTrefoil), kFigureEight};
  const auto xi = LocalizationPoint::root_of_unity(1, 6);
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    Rng rng(900 + trial);
    std::vector<SeifertMatrix> blocks;
    long expected = 0; // trefoil jumps by -2 at e^{i pi/3}, its mirror by +2
    std::size_t multiplicity = 0;
    const long count = draw(rng, 1, 3);
    for (long b = 0; b < count; ++b) {
      const auto k = static_cast<std::size_t>(draw(rng, 0, 2));
      blocks.push_back(pieces[k]);
      if (k < 2) {
        expected += k == 0 ? -2 : 2;
        ++multiplicity;
      }
    }
    const auto v = random_congruence(rng, block_sum(blocks));
    auto m = alexander_module(v);
    auto push = pushforward_as<Cyclotomic>(m, xi);
    EXPECT_EQ(push.dimension(), multiplicity) << trial;
    EXPECT_EQ(localize_at(m, xi).dimension, multiplicity) << trial;
    EXPECT_EQ(pushforward_jump(push.profile), expected) << trial;
    EXPECT_EQ(levine_tristram_jump(v, xi.angle).jump(), expected) << trial;
  }
}

TEST(Properties, RandomSeifertMatrices) {
  // V = S + K with S symmetric and K - K^T the standard symplectic form
  std::size_t roots_seen = 0;
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng(400 + trial);
    const std::size_t g = static_cast<std::size_t>(draw(rng, 1, 2));
    SeifertMatrix v(2 * g, std::vector<long>(2 * g, 0));
    for (std::size_t r = 0; r < 2 * g; ++r)
      for (std::size_t c = r; c < 2 * g; ++c) v[r][c] = v[c][r] = draw(rng, -2, 2);
    for (std::size_t k = 0; k < g; ++k) v[2 * k][2 * k + 1] += 1;
    auto m = alexander_module(v);
    for (double angle : circle_root_angles(m)) {
      auto push = pushforward_as<std::complex<double>>(m, LocalizationPoint::from_angle(angle));
      EXPECT_GE(push.dimension(), 1u) << trial;
      EXPECT_EQ(pushforward_jump(push.profile), levine_tristram_jump(v, angle).jump()) << trial << " at " << angle;
      ++roots_seen;
    }
  }
  EXPECT_GT(roots_seen, 5u);
}
