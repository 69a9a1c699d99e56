// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "etaflow/blanchfield.hpp"
#include "etaflow/corpus.hpp"
#include "etaflow/generators.hpp"
#include "etaflow/monodromy.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

using namespace etaflow;
using Q = GaussianRational;
using C = std::complex<double>;

namespace {

constexpr std::uint64_t kSeed = 20260101;
constexpr std::size_t kCorpusSize = 200;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int failures = 0;

void run(int number, const char* title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.check(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(start);
  if (!v.pass) ++failures;
  std::printf("criterion %2d %-34s %s  (%.2f s) %s\n", number, title, v.pass ? "PASS" : "FAIL", elapsed, v.detail.str().c_str());
  std::fflush(stdout);
}

std::vector<CorpusFamily> corpus() {
  static const std::vector<CorpusFamily> families = generate_corpus(parse_corpus_spec("default"), kSeed, kCorpusSize);
  return families;
}

// ---- 1: the circle ---------------------------------------------------------------------------

void circle(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  auto c = circle_complex(build_deformation<Cyclotomic>(parse_monodromy("exp(2*pi*i*t)", 1), 16));
  auto h = torsion_cohomology(c);
  v.check(h.degrees.size() == 2 && h.degrees[1].free_rank == 0 && h.degrees[1].torsion == std::vector<int>{1},
          "T^1 is not O/t");
  auto p = signature_profile(normalized(homological_linking(c, 1)));
  v.check(p.sig(1) == 1 && p.stabilization_index() == 1, "sigma_1 != 1");
  v.check(p.jump_plus() == 1 && p.jump_minus() == -1, "jumps are not +1/-1");
  v.detail << "sigma_1 " << p.sig(1) << ", jumps " << p.jump_plus() << "/" << p.jump_minus();

  for (const char* a : {"1/7", "1/4", "1/3", "1/2", "2/3", "5/6", "13/14"}) {
    auto shifted = circle_complex(build_deformation<Cyclotomic>(parse_monodromy(std::string("exp(2*pi*i*(t+") + a + "))", 1), 16));
    for (const auto& d : torsion_cohomology(shifted).degrees)
      v.check(d.free_rank == 0 && d.torsion.empty(), std::string("not acyclic at a = ") + a);
  }

  auto fc = circle_complex(build_deformation<C>(parse_monodromy("exp(2*pi*i*t)", 1), 16));
  auto value = linking_pairing(fc, 1, std::vector<Germ<C>>{Germ<C>::one()}, std::vector<Germ<C>>{Germ<C>::one()}, 1);
  const C residue = C(0, 1) * value.residue();
  const double error = std::abs(residue - C(1 / (2 * std::numbers::pi), 0));
  v.check(error < 1e-12, "float residue off by " + std::to_string(error));
  const double elapsed = seconds_since(start);
  v.check(elapsed < 1.0, "slower than 1 s");
  v.detail << ", residue error " << error;
}

// ---- 2, 3, 7, 8: the corpus ---------------------------------------------------------------------

void oracle_equivalence(Verdict& v) {
  const auto start = std::chrono::steady_clock::now();
  const auto families = corpus();
  std::size_t agree = 0;
  for (std::size_t k = 0; k < families.size(); ++k) {
    const auto& f = families[k].family;
    v.check(f.dim <= 6 && f.degree() <= 3, "family " + std::to_string(k) + " is outside n <= 6, d <= 3");
    auto r = jumps(f, true);
    auto o = oracle::family_jumps(f.coefficients);
    const bool ok = r.oracle_agreement && r.jump_plus == o.plus && r.jump_minus == o.minus;
    v.check(ok, "family " + std::to_string(k) + " (" + families[k].kind + ")");
    agree += ok;
  }
  const double elapsed = seconds_since(start);
  v.check(families.size() >= 200, "corpus smaller than 200");
  v.check(elapsed < 60.0, "slower than 60 s");
  v.detail << agree << "/" << families.size() << " families agree";
}

void identities(Verdict& v) {
  std::size_t ok_count = 0;
  for (const auto& item : corpus()) {
    const auto p = kernel_sequence(item.family).profile;
    const auto o = oracle::family_jumps(item.family.coefficients);
    const long eta_plus = o.eta0 + o.plus, eta_minus = o.eta0 + o.minus;
    const bool ok = eta_plus - eta_minus == 2 * p.odd_sum() && (eta_plus + eta_minus) - 2 * o.eta0 == 2 * p.even_sum();
    v.check(ok, item.kind);
    ok_count += ok;
  }
  v.detail << ok_count << "/" << corpus().size() << " families";
}

void first_form_signature(Verdict& v) {
  std::size_t ok_count = 0;
  for (const auto& item : corpus()) {
    const auto p = kernel_sequence(item.family).profile;
    const auto form = first_form(item.family).form;
    const bool ok = oracle::inertia(form).signature() == p.sig(1);
    v.check(ok, item.kind);
    ok_count += ok;
  }
  v.detail << ok_count << "/" << corpus().size() << " families";
}

void reversal_and_rescaling(Verdict& v) {
  std::size_t ok_count = 0;
  for (const auto& item : corpus()) {
    const auto p = kernel_sequence(item.family).profile;
    const auto reversed = kernel_sequence(time_reversed(item.family)).profile;
    bool ok = true;
    for (std::size_t i = 1; i <= std::max(p.stabilization_index(), reversed.stabilization_index()); ++i)
      ok = ok && reversed.sig(i) == (i % 2 == 1 ? -p.sig(i) : p.sig(i));
    for (const mpq_class& c : {mpq_class(3, 2), mpq_class(1, 5), mpq_class(7)})
      ok = ok && kernel_sequence(rescaled(item.family, Q(c))).profile == p;
    v.check(ok, item.kind);
    ok_count += ok;
  }
  v.detail << ok_count << "/" << corpus().size() << " families";
}

// ---- 4, 5, 6: torsion forms ---------------------------------------------------------------------

void route_equality(Verdict& v) {
  std::size_t count = 0;
  for (std::uint64_t trial = 0; trial < 500; ++trial) {
    Rng rng(kSeed + 1000 + trial);
    TorsionForm<Q> f = random_planted_form<Q>(rng, 6, 4).form;
    if (trial % 5 == 4) {
      // a non-diagonalizable mixture: hyperbolic plane plus planted blocks
      auto u = Germ<Q>::polynomial({random_scalar<Q>(rng) + from_int<Q>(7), random_scalar<Q>(rng), random_scalar<Q>(rng)});
      f = direct_sum(f, hyperbolic_form<Q>(static_cast<std::size_t>(draw(rng, 1, 3)), u));
      f = congruence(f, random_automorphism(rng, f.t_action));
    }
    const bool ok = profile_v_route(f) == profile_w_route(f);
    v.check(ok, "trial " + std::to_string(trial));
    count += ok;
  }
  v.detail << count << "/500 forms";
}

/// Counts (n_i^+, n_i^-) read off the block list directly.
SignatureProfile counts_of(const std::vector<BlockSpec>& blocks) {
  std::size_t top = 0;
  for (const auto& b : blocks) top = std::max(top, b.order);
  std::vector<long> plus(top, 0), minus(top, 0);
  for (const auto& b : blocks) (b.sign > 0 ? plus : minus)[b.order - 1] += 1;
  return SignatureProfile::from_counts(plus, minus);
}

void planted_recovery(Verdict& v) {
  std::size_t count = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(kSeed + 2000 + trial);
    auto planted = random_planted_form<Q>(rng, 7, 4);
    const bool ok = signature_profile(planted.form) == counts_of(planted.blocks);
    v.check(ok, "trial " + std::to_string(trial));
    count += ok;
  }
  v.detail << count << "/100 block sums";
}

void hyperbolic_and_metabolic(Verdict& v) {
  std::size_t hyperbolic = 0, metabolic = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(kSeed + 3000 + trial);
    const std::size_t i = static_cast<std::size_t>(draw(rng, 1, 4));
    std::vector<Q> u_coeffs{random_scalar<Q>(rng) + from_int<Q>(5)};
    for (std::size_t k = 1; k < i; ++k) u_coeffs.push_back(random_scalar<Q>(rng));
    auto f = hyperbolic_form<Q>(i, Germ<Q>::polynomial(u_coeffs));
    f = congruence(f, random_automorphism(rng, f.t_action));
    f = change_coordinates(f, random_invertible<Q>(rng, f.dim));
    const auto p = signature_profile(f);
    bool zero = true;
    for (std::size_t k = 1; k <= p.stabilization_index(); ++k) zero = zero && p.sig(k) == 0;
    v.check(zero, "hyperbolic trial " + std::to_string(trial));
    hyperbolic += zero;
  }
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(kSeed + 4000 + trial);
    // already in random coordinates; the Lagrangian is half the dimension
    auto m = random_metabolic_form<Q>(rng, static_cast<std::size_t>(draw(rng, 1, 2)), 3);
    const bool ok = 2 * m.lagrangian.cols() == m.form.dim && signature_profile(m.form).odd_sum() == 0;
    v.check(ok, "metabolic trial " + std::to_string(trial));
    metabolic += ok;
  }
  v.detail << hyperbolic << "/100 hyperbolic, " << metabolic << "/100 metabolic";
}

// ---- 9: Blanchfield against Levine-Tristram ------------------------------------------------------

void blanchfield(Verdict& v) {
  const SeifertMatrix trefoil{{-1, 1}, {0, -1}}, figure_eight{{1, 1}, {0, -1}};
  long trefoil_jump_at_pi_3 = 0;
  for (const auto& [name, seifert] : {std::pair{"trefoil", trefoil}, std::pair{"figure-eight", figure_eight}}) {
    const auto m = alexander_module(seifert);
    const auto roots = roots_of_unity_on_circle(m);
    v.check(circle_root_angles(m).size() == roots.size(), std::string(name) + " has circle roots that are not roots of unity");
    v.detail << name << ":";
    for (const auto& xi : roots) {
      const auto push = pushforward_as<Cyclotomic>(m, xi);
      const long jump = pushforward_jump(push.profile);
      // oracle jump across xi, between exact circle points at angles 2 arctan(s)
      const double s = std::tan(xi.angle / 2);
      const long before = oracle::levine_tristram(seifert, oracle::circle_point(mpq_class(s - 1e-3)));
      const long after = oracle::levine_tristram(seifert, oracle::circle_point(mpq_class(s + 1e-3)));
      v.check(jump == after - before, std::string(name) + " at angle " + std::to_string(xi.angle));
      if (xi.root && xi.root->first == 1 && xi.root->second == 6) trefoil_jump_at_pi_3 = jump;
      v.detail << " " << xi.root->first << "/" << xi.root->second << " -> " << jump << " (oracle " << after - before << ")";
    }
    if (roots.empty()) {
      // no roots on the circle: the oracle signature is constant there
      const long base = oracle::levine_tristram(seifert, oracle::circle_point(mpq_class(1, 10)));
      for (long k : {-30, -7, -2, -1, 1, 3, 9, 40})
        v.check(oracle::levine_tristram(seifert, oracle::circle_point(mpq_class(k, 4))) == base, std::string(name) + " oracle jumps");
      v.detail << " no circle roots";
    }
    v.detail << ";";
  }
  v.check(std::abs(trefoil_jump_at_pi_3) == 2, "|jump| at e^{i pi/3} is not 2");
}

// ---- 10: random circle deformations ---------------------------------------------------------------

void circle_deformations(Verdict& v) {
  std::size_t with_torsion = 0, trials = 0;
  for (std::uint64_t trial = 0; with_torsion < 100 && trial < 1000; ++trial, ++trials) {
    Rng rng(kSeed + 5000 + trial);
    const std::size_t m = static_cast<std::size_t>(draw(rng, 1, 4));
    auto planted = random_circle_deformation<Q>(rng, m, 12);
    auto c = circle_complex(planted.rho);
    auto h = torsion_cohomology(c);
    auto det = oracle::germ_determinant<Q>(c.coboundaries[0]);
    const std::string tag = "trial " + std::to_string(trial);
    v.check(det.valuation().has_value() && h.degrees[1].free_rank == 0 &&
                h.degrees[1].torsion_dimension() == static_cast<std::size_t>(*det.valuation()),
            tag + ": dim T^1 != ord det");
    if (h.degrees[1].torsion_dimension() == 0) continue;
    ++with_torsion;
    auto f = homological_linking(c, 1);
    v.check(symmetry_defect(f) == 0.0, tag + ": not skew-Hermitian");
    const auto p = signature_profile(normalized(f));
    long covered = 0;
    for (std::size_t i = 1; i <= p.stabilization_index(); ++i) covered += static_cast<long>(i) * (p.plus(i) + p.minus(i));
    v.check(covered == static_cast<long>(f.dim) && determinant(f.scalar_form) != Q(), tag + ": degenerate");
  }
  v.check(with_torsion >= 100, "fewer than 100 deformations with torsion");
  v.detail << with_torsion << " deformations with torsion out of " << trials;
}

} // namespace

int main() {
  run(1, "circle", circle);
  run(2, "oracle equivalence", oracle_equivalence);
  run(3, "eta identities", identities);
  run(4, "V and W routes", route_equality);
  run(5, "planted block sums", planted_recovery);
  run(6, "hyperbolic and metabolic", hyperbolic_and_metabolic);
  run(7, "first form", first_form_signature);
  run(8, "time reversal and rescaling", reversal_and_rescaling);
  run(9, "Blanchfield vs Levine-Tristram", blanchfield);
  run(10, "circle deformations", circle_deformations);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
