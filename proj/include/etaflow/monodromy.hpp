#pragma once

// A small language for diagonal circle monodromies:
//
//   expr  := term ('*' term)*
//   term  := 'exp(' [c '*'] 'pi*i*' ('t' | '(t' ('+'|'-') a ')') ')'
//          | 'root(' p '/' q ')'          e^{2 pi i p/q}
//          | 'diag(' expr (',' expr)* ')'  block sum
//          | '1' | '-1' | 'i' | '-i'
//
// with rational c, a. Every entry is a root of unity times e^{c pi i t}, so
// the exact backend represents it over a cyclotomic field in s = pi t.

#include "etaflow/cyclotomic.hpp"
#include "etaflow/localsys.hpp"

#include <cctype>
#include <numbers>
#include <string>
#include <vector>

namespace etaflow {

struct DiagonalEntry {
  mpq_class phase; // in turns, reduced to [0, 1)
  mpq_class speed; // c in e^{c pi i t}
};

struct MonodromySpec {
  std::vector<DiagonalEntry> entries;
};

namespace detail {

inline mpq_class reduce_turns(mpq_class x) {
  mpz_class whole;
  mpz_fdiv_q(whole.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  x -= whole;
  x.canonicalize();
  return x;
}

class MonodromyParser {
public:
  explicit MonodromyParser(std::string text) {
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s_.push_back(c);
  }

  MonodromySpec parse() {
    auto out = expr();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return out;
  }

private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, "monodromy: position " + std::to_string(pos_ + 1) + ": " + what);
  }
  bool eat(const std::string& token) {
    if (s_.compare(pos_, token.size(), token) != 0) return false;
    pos_ += token.size();
    return true;
  }
  void expect(const std::string& token) {
    if (!eat(token)) error("expected '" + token + "'");
  }

  mpq_class rational() {
    const std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '/')) ++pos_;
    std::string text = s_.substr(start, pos_ - start);
    if (text.empty() || text == "-" || text == "+") error("expected a rational number");
    if (text.starts_with('+')) text.erase(0, 1);
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) error("bad rational '" + text + "'");
    q.canonicalize();
    return q;
  }

  static MonodromySpec multiply(const MonodromySpec& a, const MonodromySpec& b) {
    auto scalar = [](const MonodromySpec& x) { return x.entries.size() == 1; };
    if (!scalar(a) && !scalar(b) && a.entries.size() != b.entries.size())
      fail(ErrorCode::DimensionMismatch, "monodromy: product of blocks of different ranks");
    const std::size_t n = std::max(a.entries.size(), b.entries.size());
    MonodromySpec out;
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = a.entries[scalar(a) ? 0 : k];
      const auto& y = b.entries[scalar(b) ? 0 : k];
      mpq_class speed = x.speed + y.speed;
      speed.canonicalize();
      out.entries.push_back({reduce_turns(x.phase + y.phase), speed});
    }
    return out;
  }

  MonodromySpec expr() {
    MonodromySpec out = term();
    while (eat("*")) out = multiply(out, term());
    return out;
  }

  MonodromySpec term() {
    if (eat("exp(")) {
      mpq_class c(1);
      if (!eat("pi*i*") && !eat("i*pi*")) {
        c = rational();
        expect("*");
        if (!eat("pi*i*") && !eat("i*pi*")) error("expected 'pi*i*'");
      }
      mpq_class a(0);
      if (!eat("t")) {
        expect("(t");
        if (pos_ >= s_.size() || (s_[pos_] != '+' && s_[pos_] != '-')) error("expected '+' or '-'");
        a = rational();
        expect(")");
      }
      expect(")");
      // e^{c pi i (t + a)} = e^{2 pi i (c a / 2)} e^{c pi i t}
      mpq_class phase = c * a / 2;
      return MonodromySpec{{{reduce_turns(phase), c}}};
    }
    if (eat("root(")) {
      mpq_class r = rational();
      expect(")");
      return MonodromySpec{{{reduce_turns(r), mpq_class(0)}}};
    }
    if (eat("diag(")) {
      MonodromySpec out = expr();
      while (eat(",")) {
        auto next = expr();
        out.entries.insert(out.entries.end(), next.entries.begin(), next.entries.end());
      }
      expect(")");
      return out;
    }
    if (eat("-i")) return MonodromySpec{{{mpq_class(3, 4), mpq_class(0)}}};
    if (eat("i")) return MonodromySpec{{{mpq_class(1, 4), mpq_class(0)}}};
    if (eat("-1")) return MonodromySpec{{{mpq_class(1, 2), mpq_class(0)}}};
    if (eat("1")) return MonodromySpec{{{mpq_class(0), mpq_class(0)}}};
    error("expected exp(...), root(...), diag(...), 1, -1, i or -i");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

} // namespace detail

/// Parses the monodromy; a single entry with rank m > 1 means that entry times I_m.
inline MonodromySpec parse_monodromy(const std::string& text, std::size_t rank = 0) {
  auto spec = detail::MonodromyParser(text).parse();
  if (rank > 0 && spec.entries.size() == 1 && rank > 1) spec.entries.assign(rank, spec.entries.front());
  require(rank == 0 || spec.entries.size() == rank, ErrorCode::DimensionMismatch,
          "monodromy has rank " + std::to_string(spec.entries.size()) + ", expected " + std::to_string(rank));
  return spec;
}

/// The deformation rho(tau) = diag(zeta_j e^{c_j pi i t}) through order n.
/// Cyclotomic: in the variable s = pi t. Float: in t itself.
template <Field F> MonodromyDeformation<F> build_deformation(const MonodromySpec& spec, int n) {
  const std::size_t m = spec.entries.size();
  GermMatrix<F> u(m, m, Germ<F>::zero());
  for (std::size_t k = 0; k < m; ++k) {
    const auto& e = spec.entries[k];
    F zeta;
    if constexpr (std::is_same_v<F, Cyclotomic>) {
      zeta = Cyclotomic::root_of_unity(e.phase.get_num().get_si(), static_cast<int>(e.phase.get_den().get_si()));
    } else {
      static_assert(std::is_same_v<F, std::complex<double>>, "circle deformations use the cyclotomic or float backend");
      zeta = std::polar(1.0, 2 * std::numbers::pi * e.phase.get_d());
    }
    if (e.speed == 0) {
      u(k, k) = Germ<F>::constant(zeta);
      continue;
    }
    F rate;
    if constexpr (std::is_same_v<F, Cyclotomic>) rate = Cyclotomic(e.speed);
    else rate = F(std::numbers::pi * e.speed.get_d());
    u(k, k) = zeta * Germ<F>::exp_series(rate * field_traits<F>::imag_unit(), n);
  }
  return make_deformation<F>({u}, n);
}

} // namespace etaflow
