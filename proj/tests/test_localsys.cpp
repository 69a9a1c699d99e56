#include "etaflow/cyclotomic.hpp"
#include "etaflow/localsys.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace etaflow;
using Q = GaussianRational;
using C = std::complex<double>;

namespace {

constexpr int kN = 12;

template <Field F> Germ<F> rotation(long speed, int n = kN) {
  return Germ<F>::exp_series(from_int<F>(speed) * field_traits<F>::imag_unit(), n);
}

template <Field F> GermComplex<F> circle_of(std::vector<Germ<F>> diagonal) {
  GermMatrix<F> u(diagonal.size(), diagonal.size(), Germ<F>::zero());
  for (std::size_t j = 0; j < diagonal.size(); ++j) u(j, j) = diagonal[j];
  return circle_complex(make_deformation<F>({u}, kN));
}

long first_signature(const TorsionForm<Q>& f) { return signature_profile(normalized(f)).sig(1); }

} // namespace

TEST(Circle, TrivialMonodromyGivesOneTorsionClass) {
  auto c = circle_of<Q>({rotation<Q>(1)});
  auto h = torsion_cohomology(c);
  ASSERT_EQ(h.degrees.size(), 2u);
  EXPECT_EQ(h.degrees[0].free_rank, 0u);
  EXPECT_TRUE(h.degrees[0].torsion.empty());
  EXPECT_EQ(h.degrees[1].free_rank, 0u);
  EXPECT_EQ(h.degrees[1].torsion, std::vector<int>{1});
  auto f = homological_linking(c, 1);
  EXPECT_EQ(f.parity, Parity::SkewHermitian);
  EXPECT_EQ(first_signature(f), 1);
}

TEST(Circle, SpeedSetsTheSign) {
  for (long k : {-3L, -1L, 2L, 3L}) {
    auto f = homological_linking(circle_of<Q>({rotation<Q>(k)}), 1);
    EXPECT_EQ(first_signature(f), k > 0 ? 1 : -1) << k;
  }
}

TEST(Circle, NontrivialHolonomyIsAcyclic) {
  const Q zeta{mpq_class(3, 5), mpq_class(4, 5)};
  auto h = torsion_cohomology(circle_of<Q>({zeta * rotation<Q>(1)}));
  for (const auto& d : h.degrees) {
    EXPECT_EQ(d.free_rank, 0u);
    EXPECT_TRUE(d.torsion.empty());
  }
  const Cyclotomic omega = Cyclotomic::root_of_unity(1, 3);
  auto hc = torsion_cohomology(circle_of<Cyclotomic>({omega * rotation<Cyclotomic>(2)}));
  EXPECT_TRUE(hc.degrees[1].torsion.empty());
  EXPECT_EQ(hc.degrees[1].free_rank, 0u);
}

TEST(Circle, ConstantTrivialMonodromyIsFree) {
  auto h = torsion_cohomology(circle_of<Q>({Germ<Q>::one()}));
  EXPECT_EQ(h.degrees[0].free_rank, 1u);
  EXPECT_EQ(h.degrees[1].free_rank, 1u);
  EXPECT_TRUE(h.degrees[1].torsion.empty());
}

TEST(Circle, OppositeRotationsCancel) {
  auto f = homological_linking(circle_of<Q>({rotation<Q>(1), rotation<Q>(-1)}), 1);
  EXPECT_EQ(f.dim, 2u);
  EXPECT_EQ(first_signature(f), 0);
}

TEST(Circle, ResidueOfTheGenerator) {
  // rho = e^{2 pi i t} in the float backend: {alpha, alpha} = 1 / (e^{2 pi i t} - 1)
  const double two_pi = 2 * std::numbers::pi;
  Germ<C> rho = Germ<C>::exp_series(C(0, two_pi), kN);
  auto c = circle_of<C>({rho});
  std::vector<Germ<C>> alpha{Germ<C>::one()};
  auto value = linking_pairing(c, 1, alpha, alpha, 1);
  const C residue = C(0, 1) * value.residue();
  EXPECT_NEAR(residue.real(), 1 / two_pi, 1e-9);
  EXPECT_NEAR(residue.imag(), 0.0, 1e-9);
  // against the closed form 1 / (e^{2 pi i t} - 1) = 1/(2 pi i t) - 1/2 - ...
  EXPECT_NEAR(value.coeff(0).real(), -0.5, 1e-9);
}

TEST(Circle, PairingIgnoresTheChoiceOfPrimitive) {
  // rho = diag(e^{is}, 1): delta has the cocycle e_2 in degree 0
  auto c = circle_of<Q>({rotation<Q>(1), Germ<Q>::one()});
  std::vector<Germ<Q>> alpha{Germ<Q>::one(), Germ<Q>::zero()};
  auto first = linking_pairing(c, 1, alpha, alpha, 1);
  std::vector<Germ<Q>> shift{Germ<Q>::zero(), Germ<Q>::polynomial({from_int<Q>(2), from_int<Q>(-1)})};
  auto second = linking_pairing(c, 1, alpha, alpha, 1, shift);
  EXPECT_EQ(first.principal_part(), second.principal_part());
  std::vector<Germ<Q>> free_class{Germ<Q>::zero(), Germ<Q>::one()};
  EXPECT_THROW(linking_pairing(c, 1, free_class, alpha, 1), Error);
}

TEST(Circle, UncertifiedKernelIsReported) {
  // a trivial summand known only through the truncation cannot be certified free
  auto exact = torsion_cohomology(circle_of<Q>({rotation<Q>(1), Germ<Q>::one()}));
  EXPECT_EQ(exact.degrees[1].free_rank, 1u);
  EXPECT_EQ(exact.degrees[1].torsion, std::vector<int>{1});
  try {
    torsion_cohomology(circle_of<Q>({rotation<Q>(1), Germ<Q>::one(kN)}));
    FAIL() << "expected TruncationInsufficient";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TruncationInsufficient);
  }
}

TEST(Circle, NonUnitaryInputWarns) {
  GermMatrix<Q> u(1, 1, Germ<Q>::polynomial({from_int<Q>(1), from_int<Q>(1)}));
  auto rho = make_deformation<Q>({u}, kN);
  EXPECT_FALSE(rho.unitary);
  EXPECT_FALSE(rho.warnings.empty());
}

TEST(Complex, Validation) {
  GermMatrix<Q> a(1, 1, Germ<Q>::one());
  EXPECT_THROW(make_complex<Q>({1, 1, 1}, {a, a}), Error);
  EXPECT_THROW(make_complex<Q>({1, 2}, {a}), Error);
  EXPECT_THROW(make_complex<Q>({1, 1, 1}, {a}), Error);
}

TEST(Complex, TwoStepComplex) {
  // O -> O^2 -> O with delta^0 = (t, 0)^T and delta^1 = (0, t^2): torsion O/t in degree 1, O/t^2 in degree 2
  auto t = Germ<Q>::monomial(from_int<Q>(1), 1);
  GermMatrix<Q> d0(2, 1, Germ<Q>::zero());
  d0(0, 0) = t;
  GermMatrix<Q> d1(1, 2, Germ<Q>::zero());
  d1(0, 1) = t * t;
  auto h = torsion_cohomology(make_complex<Q>({1, 2, 1}, {d0, d1}));
  EXPECT_EQ(h.degrees[0].free_rank, 0u);
  EXPECT_EQ(h.degrees[1].free_rank, 0u);
  EXPECT_EQ(h.degrees[1].torsion, std::vector<int>{1});
  EXPECT_EQ(h.degrees[2].torsion, std::vector<int>{2});
  EXPECT_EQ(h.degrees[2].free_rank, 0u);
}

TEST(Properties, RandomCircleDeformations) {
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    Rng rng(7000 + trial);
    const std::size_t m = static_cast<std::size_t>(draw(rng, 1, 3));
    auto planted = random_circle_deformation<Q>(rng, m, kN);
    ASSERT_TRUE(planted.rho.unitary) << trial;
    auto c = circle_complex(planted.rho);
    auto h = torsion_cohomology(c);
    // dim T^1 = ord_t det(rho - I), computed independently
    auto det = oracle::germ_determinant<Q>(c.coboundaries[0]);
    auto speeds = planted.torsion_speeds();
    EXPECT_EQ(h.degrees[1].free_rank, 0u) << trial;
    ASSERT_TRUE(det.valuation()) << trial;
    EXPECT_EQ(h.degrees[1].torsion_dimension(), static_cast<std::size_t>(*det.valuation())) << trial;
    EXPECT_EQ(h.degrees[1].torsion_dimension(), speeds.size()) << trial;
    if (speeds.empty()) continue;
    auto f = homological_linking(c, 1);
    EXPECT_EQ(symmetry_defect(f), 0.0) << trial;
    // the same jumps as the operator family diag(c_j t)
    Mat<Q> lin = zeros<Q>(speeds.size(), speeds.size());
    for (std::size_t j = 0; j < speeds.size(); ++j) lin(j, j) = from_int<Q>(speeds[j]);
    auto model = kernel_sequence(make_family<Q>({zeros<Q>(speeds.size(), speeds.size()), lin}));
    EXPECT_EQ(signature_profile(normalized(f)), model.profile) << trial;
  }
}
