#include "etaflow/corpus.hpp"
#include "etaflow/family.hpp"

#include <gtest/gtest.h>

using namespace etaflow;
using Q = GaussianRational;

namespace {

Q gr(long re, long im = 0) { return Q(mpq_class(re), mpq_class(im)); }

using IntMatrix = std::vector<std::vector<long>>;

Mat<Q> mat(const IntMatrix& rows) {
  Mat<Q> m = zeros<Q>(rows.size(), rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows.size(); ++c) m(r, c) = gr(rows[r][c]);
  return m;
}

HermitianFamily<Q> family(const std::vector<IntMatrix>& coeffs) {
  std::vector<Mat<Q>> ms;
  for (const auto& c : coeffs) ms.push_back(mat(c));
  return make_family<Q>(ms);
}

// diag(t, t^2, -t^3)
HermitianFamily<Q> diag_example() {
  return family({{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                 {{1, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                 {{0, 0, 0}, {0, 1, 0}, {0, 0, 0}},
                 {{0, 0, 0}, {0, 0, 0}, {0, 0, -1}}});
}

// D(t) = [[0, t], [t, t]]
HermitianFamily<Q> off_diag_example() { return family({{{0, 0}, {0, 0}}, {{0, 1}, {1, 1}}}); }

template <class Fn> ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST(Family, CommonKernel) {
  EXPECT_EQ(common_kernel(family({{{0, 0}, {0, 0}}, {{1, 0}, {0, 1}}})).cols(), 0u);
  EXPECT_EQ(common_kernel(diag_example()).cols(), 0u);
  // shared null vector (1, -1) in every coefficient
  auto f = family({{{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}, {{-1, -1}, {-1, -1}}});
  Mat<Q> sigma = common_kernel(f);
  ASSERT_EQ(sigma.cols(), 1u);
  EXPECT_TRUE(subspace_contains(sigma, Mat<Q>::from_columns({{gr(1), gr(-1)}}, 2, gr(0))));
}

TEST(Family, KernelSequenceDiagonal) {
  auto ks = kernel_sequence(diag_example());
  EXPECT_EQ(ks.profile.sig(1), 1);
  EXPECT_EQ(ks.profile.sig(2), 1);
  EXPECT_EQ(ks.profile.sig(3), -1);
  EXPECT_EQ(ks.profile.stabilization_index(), 3u);
  EXPECT_EQ(ks.stages[0].cols(), 3u);
  EXPECT_EQ(ks.stages[1].cols(), 2u);
  EXPECT_EQ(ks.stages[2].cols(), 1u);
  EXPECT_EQ(ks.stable_kernel.cols(), 0u);
}

TEST(Family, KernelSequenceOffDiagonal) {
  auto ks = kernel_sequence(off_diag_example());
  ASSERT_EQ(ks.forms.size(), 1u);
  // lambda_1 = D_1 on ker D_0 = C^2 in the standard basis
  EXPECT_TRUE(ks.forms[0] == mat({{0, 1}, {1, 1}}));
  EXPECT_EQ(ks.profile.sig(1), 0);
  EXPECT_EQ(ks.profile.plus(1), 1);
  EXPECT_EQ(ks.profile.minus(1), 1);
  EXPECT_EQ(ks.stable_kernel.cols(), 0u);
}

TEST(Family, InvertibleConstantHasEmptyProfile) {
  auto f = family({{{1, 0}, {0, -1}}});
  auto ks = kernel_sequence(f);
  EXPECT_EQ(ks.profile, SignatureProfile{});
  EXPECT_EQ(first_form(f).form.rows(), 0u);
  EXPECT_EQ(analytic_linking_form(f).dim, 0u);
  auto b = branch_profile(f);
  EXPECT_TRUE(b.vanishing.empty());
  EXPECT_EQ(b.nonzero_positive, 1u);
  EXPECT_EQ(b.nonzero_negative, 1u);
}

TEST(Family, FirstForm) {
  auto ti = family({{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  auto ff = first_form(ti);
  EXPECT_TRUE(ff.form == identity<Q>(3));
  EXPECT_EQ(ff.signature, 3);
  EXPECT_EQ(first_form(off_diag_example()).signature, 0);
}

TEST(Family, BranchProfile) {
  auto b = branch_profile(diag_example());
  std::vector<Branch> expected{{1, 1}, {2, 1}, {3, -1}};
  EXPECT_EQ(b.vanishing, expected);
  EXPECT_EQ(b.total(), 3u);
  // [[t, t^2], [t^2, -t]]: eigenvalues +-t sqrt(1 + t^2)
  auto c = branch_profile(family({{{0, 0}, {0, 0}}, {{1, 0}, {0, -1}}, {{0, 1}, {1, 0}}}));
  std::vector<Branch> expected_c{{1, -1}, {1, 1}};
  EXPECT_EQ(c.vanishing, expected_c);
  // [[1, t], [t, t^2]] has a rotating kernel: one identically zero branch, Sigma = 0
  auto rot = family({{{1, 0}, {0, 0}}, {{0, 1}, {1, 0}}, {{0, 0}, {0, 1}}});
  auto br = branch_profile(rot);
  EXPECT_EQ(br.identically_zero, 1u);
  EXPECT_EQ(br.nonzero_positive, 1u);
  EXPECT_TRUE(br.vanishing.empty());
  EXPECT_EQ(common_kernel(rot).cols(), 0u);
  auto ks = kernel_sequence(rot);
  EXPECT_EQ(ks.stable_kernel.cols(), 1u);
  EXPECT_EQ(ks.profile, SignatureProfile{});
}

TEST(Family, SignatureOracle) {
  auto f = diag_example();
  EXPECT_EQ(signature_at(f, mpq_class(1, 10)), 1);
  EXPECT_EQ(signature_at(f, mpq_class(-1, 10)), 1);
  EXPECT_EQ(signature_at(f, mpq_class(0)), 0);
  auto g = family({{{2, 1}, {1, -3}}, {{1, 0}, {0, 1}}});
  EXPECT_EQ(signature_at(g, mpq_class(0)), signature(g.coeff(0)));
}

TEST(Family, Jumps) {
  auto r = jumps(diag_example());
  EXPECT_EQ(r.jump_plus, 1);
  EXPECT_EQ(r.jump_minus, 1);
  EXPECT_EQ(r.flow, 0);
  EXPECT_TRUE(r.oracle_agreement);
  auto ti = family({{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
  auto s = jumps(ti);
  EXPECT_EQ(s.jump_plus, 3);
  EXPECT_EQ(s.jump_minus, -3);
  EXPECT_EQ(s.flow, 6);
  EXPECT_TRUE(s.oracle_agreement);
  // 1x1 model of the circle operator: mu(t) = t
  auto circle = family({{{0}}, {{1}}});
  auto c = jumps(circle);
  EXPECT_EQ(c.jump_plus, 1);
  EXPECT_EQ(c.jump_minus, -1);
}

TEST(Family, OracleUnstableWhenScheduleTooShort) {
  // mu(t) = t (20t - 1)(200t - 1)(2000t - 1) changes sign between consecutive scales
  auto f = family({{{0}}, {{-1}}, {{2220}}, {{-444000}}, {{8000000}}});
  EXPECT_EQ(code_of([&] { oracle_jumps(f, 3); }), ErrorCode::OracleUnstable);
  auto o = oracle_jumps(f);
  EXPECT_EQ(o.plus, -1);
  EXPECT_EQ(o.minus, 1);
  EXPECT_EQ(o.accepted_at, 5);
  // a crossing below the first two scales fools the schedule: mu(t) = t - 10^6 t^2
  auto g = family({{{0}}, {{1}}, {{-1000000}}});
  EXPECT_EQ(oracle_jumps(g).plus, -1);
  EXPECT_EQ(jumps(g).jump_plus, 1);
  EXPECT_FALSE(jumps(g).oracle_agreement);
}

TEST(Family, AnalyticLinkingForm) {
  auto form = analytic_linking_form(diag_example());
  EXPECT_EQ(form.dim, 6u);
  auto expected = direct_sum(direct_sum(block_form<Q>(1, gr(1)), block_form<Q>(2, gr(1))), block_form<Q>(3, gr(-1)));
  EXPECT_EQ(signature_profile(form), signature_profile(expected));
  EXPECT_EQ(signature_profile(analytic_linking_form(off_diag_example())).plus(1), 1);
  // [[1, t], [t, t^2]]: no torsion
  EXPECT_EQ(analytic_linking_form(family({{{1, 0}, {0, 0}}, {{0, 1}, {1, 0}}, {{0, 0}, {0, 1}}})).dim, 0u);
}

TEST(Family, TruncatedInput) {
  // D(t) = t + t^3 + ... known through t^2; only D_0, D_1 are needed
  std::vector<Mat<Q>> coeffs{mat({{0}}), mat({{1}}), mat({{0}})};
  auto f = make_family<Q>(coeffs, true);
  EXPECT_EQ(kernel_sequence(f).profile.sig(1), 1);
  // t^3 + ... known through t^2: not enough data
  std::vector<Mat<Q>> short_coeffs{mat({{0}}), mat({{0}}), mat({{0}})};
  auto g = make_family<Q>(short_coeffs, true);
  EXPECT_EQ(code_of([&] { kernel_sequence(g); }), ErrorCode::TruncationInsufficient);
  EXPECT_EQ(signature_profile(analytic_linking_form(f)).sig(1), 1);
  EXPECT_EQ(code_of([&] { analytic_linking_form(g); }), ErrorCode::TruncationInsufficient);
}

TEST(Family, LambdaIsIndependentOfCompletion) {
  auto corpus = generate_corpus(parse_corpus_spec("default,n=4"), 3, 24);
  Rng rng(9);
  for (const auto& item : corpus) {
    auto ks = kernel_sequence(item.family);
    for (std::size_t i = 2; i <= ks.forms.size(); ++i) {
      Mat<Q> freedom = completion_freedom(item.family, i);
      const Mat<Q>& w = ks.stages[i - 1];
      for (std::size_t b = 0; b < w.cols(); ++b) {
        Vec<Q> base = complete_stage(item.family, i, w.column(b));
        Vec<Q> other = base;
        for (std::size_t c = 0; c < freedom.cols(); ++c) {
          Q coeff = random_scalar<Q>(rng, 3);
          for (std::size_t r = 0; r < freedom.rows(); ++r) other[item.family.dim + r] += coeff * freedom(r, c);
        }
        for (std::size_t a = 0; a < w.cols(); ++a)
          EXPECT_EQ(lambda_pairing(item.family, i, w.column(a), base), lambda_pairing(item.family, i, w.column(a), other));
      }
    }
  }
}

TEST(FamilyProperties, CorpusRoutesAndOracle) {
  auto corpus = generate_corpus(parse_corpus_spec("default,n=4"), 11, 40);
  for (const auto& item : corpus) {
    const auto& f = item.family;
    auto report = jumps(f);
    EXPECT_TRUE(report.oracle_agreement) << item.kind;
    EXPECT_EQ(report.flow, report.jump_plus - report.jump_minus);
    if (item.planted) {
      EXPECT_EQ(report.profile, *item.planted) << item.kind;
    }
    EXPECT_EQ(first_form(f).signature, report.profile.sig(1));
    EXPECT_EQ(branch_profile(f).to_profile(), report.profile) << item.kind;
    EXPECT_EQ(branch_profile(f).total(), f.dim);
    auto form = analytic_linking_form(f);
    EXPECT_EQ(signature_profile(form), report.profile) << item.kind;
    // time reversal and positive rescaling
    auto reversed = kernel_sequence(time_reversed(f)).profile;
    for (std::size_t i = 1; i <= report.profile.sigma.size(); ++i)
      EXPECT_EQ(reversed.sig(i), (i % 2 == 0 ? 1 : -1) * report.profile.sig(i));
    EXPECT_EQ(kernel_sequence(rescaled(f, Q(mpq_class(3, 2)))).profile, report.profile);
  }
}

TEST(FamilyProperties, OrdersOneCorpus) {
  for (const auto& item : generate_corpus(parse_corpus_spec("orders1"), 5, 20)) {
    auto p = kernel_sequence(item.family).profile;
    EXPECT_LE(p.stabilization_index(), 1u);
  }
  EXPECT_TRUE(generate_corpus(parse_corpus_spec("empty"), 5, 20).empty());
}
