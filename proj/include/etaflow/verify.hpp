#pragma once

// Property checks run by `verify` on each corpus family.

#include "etaflow/corpus.hpp"
#include "etaflow/family.hpp"

#include <algorithm>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace etaflow {

struct FamilyCheck {
  std::string kind;
  SignatureProfile profile;
  JumpReport report;
  bool oracle = false;          // jumps from the profile equal the signature oracle
  bool identities = false;      // jump_plus - jump_minus = 2 sum odd, (jump_plus + jump_minus)/2 = sum even
  bool first_form = false;      // signature of the first form equals sigma_1
  bool time_reversal = false;   // sigma_i(D(-t)) = (-1)^i sigma_i(D(t))
  bool rescaling = false;       // sigma_i(D(3t/2)) = sigma_i(D(t))
  bool planted = true;          // known answer recovered (true when none is planted)
  bool linking_form = false;    // profile of the Smith-built linking form, both routes
  std::vector<std::string> failures;
  std::string error;            // computation error, if any

  bool ok() const { return error.empty() && failures.empty(); }
};

inline FamilyCheck check_family(const CorpusFamily& item) {
  using Q = GaussianRational;
  FamilyCheck c;
  c.kind = item.kind;
  try {
    const auto& f = item.family;
    c.report = jumps(f, true);
    c.profile = c.report.profile;
    const auto& p = c.profile;
    c.oracle = c.report.oracle_agreement;
    const auto& o = c.report.oracle;
    c.identities = o.plus - o.minus == 2 * p.odd_sum() && o.plus + o.minus == 2 * p.even_sum();
    c.first_form = etaflow::first_form(f).signature == p.sig(1);
    const auto reversed = kernel_sequence(time_reversed(f)).profile;
    c.time_reversal = true;
    for (std::size_t i = 1; i <= std::max(p.stabilization_index(), reversed.stabilization_index()); ++i)
      c.time_reversal = c.time_reversal && reversed.sig(i) == (i % 2 ? -p.sig(i) : p.sig(i));
    c.rescaling = kernel_sequence(rescaled(f, Q(mpq_class(3, 2)))).profile == p;
    if (item.planted) c.planted = *item.planted == p;
    c.linking_form = signature_profile(analytic_linking_form(f), ProfileRoute::Both) == p;
    const std::pair<bool, const char*> named[] = {{c.oracle, "oracle"},         {c.identities, "identities"},
                                                  {c.first_form, "first-form"}, {c.time_reversal, "time-reversal"},
                                                  {c.rescaling, "rescaling"},   {c.planted, "planted"},
                                                  {c.linking_form, "linking-form"}};
    for (const auto& [pass, name] : named)
      if (!pass) c.failures.push_back(name);
  } catch (const Error& e) {
    c.error = e.what();
  }
  return c;
}

/// Runs check_family over the corpus on up to `threads` workers; results keep corpus order.
inline std::vector<FamilyCheck> check_corpus(const std::vector<CorpusFamily>& corpus, unsigned threads = 0) {
  std::vector<FamilyCheck> out(corpus.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(corpus.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < corpus.size(); k += threads) out[k] = check_family(corpus[k]);
    });
  for (auto& t : pool) t.join();
  return out;
}

} // namespace etaflow
