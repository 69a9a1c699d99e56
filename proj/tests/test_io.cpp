#include "etaflow/generators.hpp"
#include "etaflow/io.hpp"
#include "etaflow/monodromy.hpp"

#include <gtest/gtest.h>

using namespace etaflow;
using Q = GaussianRational;

TEST(Json, Rationals) {
  EXPECT_EQ(io::parse_rational("3/4"), mpq_class(3, 4));
  EXPECT_EQ(io::parse_rational("-6/8"), mpq_class(-3, 4));
  EXPECT_EQ(io::parse_rational("0.125"), mpq_class(1, 8));
  EXPECT_EQ(io::parse_rational("-2.5e-1"), mpq_class(-1, 4));
  EXPECT_EQ(io::parse_rational("12e2"), mpq_class(1200));
  EXPECT_THROW(io::parse_rational("1/0"), Error);
  EXPECT_THROW(io::parse_rational("abc"), Error);
  EXPECT_THROW(io::parse_rational(""), Error);
}

TEST(Json, ParseErrorsCarryThePosition) {
  try {
    io::parse_json("{\n  \"dim\": ,\n}");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(Json, FamilyRoundTrip) {
  Rng rng(5);
  std::vector<Mat<Q>> coeffs;
  for (int k = 0; k < 3; ++k) {
    Mat<Q> a = random_matrix<Q>(rng, 3, 3);
    coeffs.push_back(a + adjoint(a));
  }
  auto f = make_family<Q>(coeffs);
  auto back = io::family_from_json<Q>(io::parse_json(io::write_json(io::family_to_json(f))));
  ASSERT_EQ(back.coefficients.size(), f.coefficients.size());
  for (std::size_t k = 0; k < f.coefficients.size(); ++k) EXPECT_EQ(back.coefficients[k], f.coefficients[k]);
}

TEST(Json, FormRoundTrip) {
  Rng rng(8);
  auto f = random_planted_form<Q>(rng, 5, 3).form;
  auto back = io::form_from_json<Q>(io::form_to_json(f));
  EXPECT_EQ(back.t_action, f.t_action);
  EXPECT_EQ(back.scalar_form, f.scalar_form);
  EXPECT_EQ(back.parity, f.parity);
}

TEST(Json, FlatAndNestedMatrices) {
  auto nested = io::square_from_json<Q>(io::parse_json("[[1, 2], [3, 4]]"), 2);
  auto flat = io::square_from_json<Q>(io::parse_json("[1, 2, 3, 4]"), 2);
  EXPECT_EQ(nested, flat);
  auto entry = io::square_from_json<Q>(io::parse_json("[[\"1/2\", 3]]"), 1);
  EXPECT_EQ(entry(0, 0), (Q{mpq_class(1, 2), mpq_class(3)}));
}

TEST(Json, Germs) {
  auto g = io::germ_from_json<Q>(io::parse_json("[0, 1, \"-1/2\"]"));
  EXPECT_EQ(g.valuation(), 1);
  EXPECT_EQ(g.coeff(2), Q(mpq_class(-1, 2)));
  auto truncated = io::germ_from_json<Q>(io::parse_json("{\"coeffs\": [1, 1], \"order\": 4}"));
  EXPECT_EQ(truncated.order(), 4);
  EXPECT_EQ(io::germ_from_json<Q>(io::parse_json("3")).coeff(0), Q(3));
}

TEST(Json, LocalizationPoints) {
  auto xi = io::point_from_string("1/6");
  ASSERT_TRUE(xi.exact());
  EXPECT_EQ(xi.root->first, 1);
  EXPECT_EQ(xi.root->second, 6);
  EXPECT_THROW(io::point_from_string("x"), Error);
}

TEST(Monodromy, Grammar) {
  auto s = parse_monodromy("exp(2*pi*i*t)");
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].speed, 2);
  EXPECT_EQ(s.entries[0].phase, 0);
  auto shifted = parse_monodromy("exp(2 * pi * i * (t + 1/3))");
  EXPECT_EQ(shifted.entries[0].phase, mpq_class(1, 3));
  auto d = parse_monodromy("diag(exp(pi*i*t), root(5/4), -1) * i");
  ASSERT_EQ(d.entries.size(), 3u);
  EXPECT_EQ(d.entries[0].phase, mpq_class(1, 4));
  EXPECT_EQ(d.entries[1].phase, mpq_class(1, 2));
  EXPECT_EQ(d.entries[2].phase, mpq_class(3, 4));
  EXPECT_EQ(parse_monodromy("-i", 3).entries.size(), 3u);
  EXPECT_THROW(parse_monodromy("exp(2*pi*t)"), Error);
  EXPECT_THROW(parse_monodromy("diag(1, 1)", 3), Error);
  EXPECT_THROW(parse_monodromy("diag(1, 1) * diag(1, 1, 1)"), Error);
}

TEST(Monodromy, ExactAndFloatAgree) {
  auto spec = parse_monodromy("diag(exp(2*pi*i*t), root(1/3))");
  auto exact = torsion_cohomology(circle_complex(build_deformation<Cyclotomic>(spec, 12)));
  auto approx = torsion_cohomology(circle_complex(build_deformation<std::complex<double>>(spec, 12)));
  EXPECT_EQ(exact.degrees[1].torsion, approx.degrees[1].torsion);
  EXPECT_EQ(exact.degrees[1].torsion, std::vector<int>{1});
}
