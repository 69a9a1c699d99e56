#pragma once

// JSON reading and writing. Scalars are [re, im] pairs whose components are
// decimal or rational strings ("3/7", "-0.25", "1e-3"); plain JSON numbers
// are accepted on input.

#include "etaflow/blanchfield.hpp"
#include "etaflow/corpus.hpp"
#include "etaflow/family.hpp"
#include "etaflow/localsys.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

namespace etaflow::io {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors carry the line and column.
inline Json parse_json(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    fail(ErrorCode::ParseError, source + ": line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::ParseError, "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json(buffer.str(), path);
}

/// "3/7", "-2", "0.125", "1.5e-3" as an exact rational.
inline mpq_class parse_rational(const std::string& text) {
  auto bad = [&] { fail(ErrorCode::ParseError, "not a number: '" + text + "'"); };
  if (text.empty()) bad();
  if (auto slash = text.find('/'); slash != std::string::npos) {
    mpz_class num, den;
    if (num.set_str(text.substr(0, slash), 10) != 0 || den.set_str(text.substr(slash + 1), 10) != 0 || den == 0) bad();
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  std::string mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    const std::string ex = text.substr(e + 1);
    auto [ptr, ec] = std::from_chars(ex.data() + (ex.starts_with('+') ? 1 : 0), ex.data() + ex.size(), exponent);
    if (ec != std::errc() || ptr != ex.data() + ex.size() || ex.empty()) bad();
  }
  std::string digits = mantissa;
  if (auto point = digits.find('.'); point != std::string::npos) {
    exponent -= static_cast<long>(digits.size() - point - 1);
    digits.erase(point, 1);
  }
  if (digits.starts_with('+')) digits.erase(0, 1);
  if (digits.empty() || digits == "-" || digits.find_first_not_of("-0123456789") != std::string::npos ||
      digits.find('-', 1) != std::string::npos)
    bad();
  mpz_class num;
  if (num.set_str(digits, 10) != 0) bad();
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  mpq_class q = exponent >= 0 ? mpq_class(num * scale) : mpq_class(num, scale);
  q.canonicalize();
  return q;
}

inline mpq_class component(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return mpq_class(mpz_class(j.dump()));
  if (j.is_number()) return parse_rational(j.dump());
  fail(ErrorCode::ParseError, "expected a number or numeric string, got " + j.dump());
}

template <Field F> F scalar_from_json(const Json& j) {
  if (j.is_array()) {
    require(j.size() == 2, ErrorCode::ParseError, "complex entries are [re, im] pairs: " + j.dump());
    return field_traits<F>::from_parts(component(j[0]), component(j[1]));
  }
  return field_traits<F>::from_parts(component(j), mpq_class(0));
}

inline std::string decimal(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(x);
}

template <Field F> Json scalar_to_json(const F& x) {
  if constexpr (std::is_same_v<F, GaussianRational>) {
    return Json::array({x.re.get_str(), x.im.get_str()});
  } else {
    const auto c = field_traits<F>::to_complex(x);
    return Json::array({decimal(c.real()), decimal(c.imag())});
  }
}

template <Field F> Mat<F> matrix_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::ParseError, "a matrix is an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  Mat<F> m = zeros<F>(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, ErrorCode::ParseError, "matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = scalar_from_json<F>(j[r][c]);
  }
  return m;
}

/// Square matrix from nested rows or a flat row-major list of n^2 entries.
template <Field F> Mat<F> square_from_json(const Json& j, std::size_t n) {
  require(j.is_array(), ErrorCode::ParseError, "expected an array");
  // nested rows have n elements; a flat list has n^2, which differs unless n <= 1
  bool flat = j.size() == n * n && n > 1;
  if (n == 1 && j.size() == 1) flat = !j[0].is_array() || j[0].size() == 2;
  if (flat) {
    Mat<F> m = zeros<F>(n, n);
    for (std::size_t k = 0; k < n * n; ++k) m(k / n, k % n) = scalar_from_json<F>(j[k]);
    return m;
  }
  Mat<F> m = matrix_from_json<F>(j);
  require(m.rows() == n && m.cols() == n, ErrorCode::DimensionMismatch, "expected a " + std::to_string(n) + " x " + std::to_string(n) + " matrix");
  return m;
}

template <Field F> Json matrix_to_json(const Mat<F>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

template <Field F> Json flat_to_json(const Mat<F>& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(scalar_to_json(m(r, c)));
  return out;
}

// ---- germs -------------------------------------------------------------------

/// An array of coefficients c_0, c_1, ... (exact polynomial data), a bare
/// number (a constant), or {"coeffs": [...], "order": N}.
template <Field F> Germ<F> germ_from_json(const Json& j, int default_order = kExactOrder) {
  const Json* coeffs = &j;
  int order = default_order;
  if (j.is_object()) {
    require(j.contains("coeffs"), ErrorCode::ParseError, "germ object needs \"coeffs\"");
    coeffs = &j["coeffs"];
    if (j.contains("order")) order = j["order"].get<int>();
  } else if (!j.is_array()) {
    return Germ<F>(std::vector<F>{scalar_from_json<F>(j)}, order);
  }
  std::vector<F> c;
  for (const auto& v : *coeffs) c.push_back(scalar_from_json<F>(v));
  return Germ<F>(std::move(c), order);
}

template <Field F> Json germ_to_json(const Germ<F>& g) {
  Json c = Json::array();
  for (const auto& v : g.coeffs()) c.push_back(scalar_to_json(v));
  if (g.is_exact()) return c;
  return Json{{"coeffs", c}, {"order", g.order()}};
}

template <Field F> Json laurent_to_json(const LaurentGerm<F>& g) {
  Json c = Json::array();
  for (const auto& v : g.coeffs()) c.push_back(scalar_to_json(v));
  Json out{{"valuation", g.low()}, {"coeffs", c}};
  if (g.order() < kExactOrder) out["order"] = g.order();
  return out;
}

template <Field F> GermMatrix<F> germ_matrix_from_json(const Json& j, int default_order = kExactOrder) {
  require(j.is_array(), ErrorCode::ParseError, "a germ matrix is an array of rows");
  const std::size_t rows = j.size();
  const std::size_t cols = rows ? j[0].size() : 0;
  GermMatrix<F> m(rows, cols, Germ<F>::zero());
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, ErrorCode::ParseError, "germ matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = germ_from_json<F>(j[r][c], default_order);
  }
  return m;
}

// ---- families, forms, profiles ---------------------------------------------------

/// {"dim": n, "degree": d, "coefficients": [D_0, ..., D_d], "truncated": bool}
template <Field F> HermitianFamily<F> family_from_json(const Json& j) {
  require(j.is_object() && j.contains("coefficients"), ErrorCode::ParseError, "family needs \"coefficients\"");
  std::vector<Mat<F>> coeffs;
  for (const auto& m : j["coefficients"]) coeffs.push_back(matrix_from_json<F>(m));
  require(!coeffs.empty(), ErrorCode::ParseError, "family needs at least one coefficient matrix");
  if (j.contains("dim"))
    require(j["dim"].get<std::size_t>() == coeffs.front().rows(), ErrorCode::DimensionMismatch, "\"dim\" disagrees with the coefficients");
  if (j.contains("degree"))
    require(j["degree"].get<std::size_t>() + 1 == coeffs.size(), ErrorCode::DimensionMismatch, "\"degree\" disagrees with the coefficients");
  return make_family<F>(std::move(coeffs), j.value("truncated", false));
}

template <Field F> Json family_to_json(const HermitianFamily<F>& f) {
  Json coeffs = Json::array();
  for (const auto& m : f.coefficients) coeffs.push_back(matrix_to_json(m));
  Json out{{"dim", f.dim}, {"degree", f.degree()}, {"coefficients", coeffs}};
  if (f.truncated) out["truncated"] = true;
  return out;
}

inline Parity parity_from_json(const Json& j) {
  const auto s = j.get<std::string>();
  if (s == "hermitian" || s == "Hermitian" || s == "+1" || s == "1") return Parity::Hermitian;
  if (s == "skew" || s == "skew-hermitian" || s == "SkewHermitian" || s == "-1") return Parity::SkewHermitian;
  fail(ErrorCode::ParseError, "unknown parity '" + s + "'");
}

/// {"dim", "parity", "J", "G"}; J and G are row-major (flat or nested).
template <Field F> TorsionForm<F> form_from_json(const Json& j) {
  require(j.is_object() && j.contains("J") && j.contains("G"), ErrorCode::ParseError, "form needs \"J\" and \"G\"");
  std::size_t n = 0;
  if (j.contains("dim")) n = j["dim"].get<std::size_t>();
  else {
    const auto& g = j["G"];
    n = g.size() && g[0].is_array() && g[0].size() && g[0][0].is_array() ? g.size()
                                                                         : static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(g.size()))));
  }
  const Parity parity = j.contains("parity") ? parity_from_json(j["parity"]) : Parity::Hermitian;
  return make_torsion_form<F>(square_from_json<F>(j["J"], n), square_from_json<F>(j["G"], n), parity);
}

template <Field F> Json form_to_json(const TorsionForm<F>& f) {
  return Json{{"dim", f.dim},
              {"parity", f.parity == Parity::Hermitian ? "hermitian" : "skew-hermitian"},
              {"J", flat_to_json(f.t_action)},
              {"G", flat_to_json(f.scalar_form)}};
}

inline Json profile_to_json(const SignatureProfile& p) {
  return Json{{"n_plus", p.n_plus}, {"n_minus", p.n_minus}, {"sigma", p.sigma}};
}

inline SignatureProfile profile_from_json(const Json& j) {
  return SignatureProfile::from_counts(j.at("n_plus").get<std::vector<long>>(), j.at("n_minus").get<std::vector<long>>());
}

inline Json jumps_to_json(const JumpReport& r) {
  Json out{{"eta0", r.eta0},
           {"jump_plus", r.jump_plus},
           {"jump_minus", r.jump_minus},
           {"flow", r.flow},
           {"profile", profile_to_json(r.profile)}};
  if (r.oracle_checked) {
    out["oracle"] = Json{{"plus", r.oracle.plus}, {"minus", r.oracle.minus}, {"accepted_at", r.oracle.accepted_at}};
    out["oracle_agreement"] = r.oracle_agreement;
  }
  return out;
}

// ---- deformations and complexes ----------------------------------------------------

/// {"rank", "generators": [germ-matrix...], "truncation"}
template <Field F> MonodromyDeformation<F> deformation_from_json(const Json& j) {
  require(j.is_object() && j.contains("generators"), ErrorCode::ParseError, "deformation needs \"generators\"");
  const int truncation = j.value("truncation", kExactOrder);
  std::vector<GermMatrix<F>> gens;
  for (const auto& g : j["generators"]) gens.push_back(germ_matrix_from_json<F>(g, truncation));
  auto rho = make_deformation<F>(std::move(gens), truncation);
  if (j.contains("rank")) require(j["rank"].get<std::size_t>() == rho.rank, ErrorCode::DimensionMismatch, "\"rank\" disagrees with the generators");
  return rho;
}

/// {"degrees": [dims], "coboundaries": [germ-matrix...], "duality": germ-matrix | "standard",
///  "linking_degree": l, "truncation": N}
template <Field F> std::pair<GermComplex<F>, std::size_t> complex_from_json(const Json& j) {
  require(j.is_object() && j.contains("degrees") && j.contains("coboundaries"), ErrorCode::ParseError,
          "complex needs \"degrees\" and \"coboundaries\"");
  const int truncation = j.value("truncation", kExactOrder);
  auto dims = j["degrees"].get<std::vector<std::size_t>>();
  std::vector<GermMatrix<F>> cob;
  for (const auto& d : j["coboundaries"]) cob.push_back(germ_matrix_from_json<F>(d, truncation));
  const std::size_t l = j.value("linking_degree", std::size_t{1});
  std::optional<GermMatrix<F>> duality;
  if (j.contains("duality")) {
    if (j["duality"].is_string()) {
      require(j["duality"].get<std::string>() == "standard", ErrorCode::ParseError, "duality is a germ matrix or \"standard\"");
      require(l >= 1 && l < dims.size() && dims[l] == dims[l - 1], ErrorCode::DimensionMismatch,
              "the standard duality needs equal ranks in degrees l - 1 and l");
      duality = germ_identity<F>(dims[l]);
    } else {
      duality = germ_matrix_from_json<F>(j["duality"], truncation);
    }
  }
  return {make_complex<F>(std::move(dims), std::move(cob), std::move(duality)), l};
}

inline Json cohomology_to_json(const std::vector<DegreeCohomology>& degrees) {
  Json out = Json::array();
  for (const auto& d : degrees)
    out.push_back(Json{{"free_rank", d.free_rank}, {"torsion", d.torsion}, {"torsion_dimension", d.torsion_dimension()}});
  return out;
}

// ---- Seifert matrices and localization points -----------------------------------------

/// {"V": integer matrix}
inline SeifertMatrix seifert_from_json(const Json& j) {
  require(j.is_object() && j.contains("V"), ErrorCode::ParseError, "Seifert input needs \"V\"");
  SeifertMatrix v;
  for (const auto& row : j["V"]) {
    std::vector<long> r;
    for (const auto& x : row) {
      require(x.is_number_integer(), ErrorCode::ParseError, "Seifert matrix entries are integers");
      r.push_back(x.get<long>());
    }
    v.push_back(std::move(r));
  }
  return v;
}

/// {"root_of_unity": [p, q]} or {"angle": radians}
inline LocalizationPoint point_from_json(const Json& j) {
  if (j.contains("root_of_unity")) {
    const auto& r = j["root_of_unity"];
    require(r.is_array() && r.size() == 2, ErrorCode::ParseError, "root_of_unity is [p, q]");
    return LocalizationPoint::root_of_unity(r[0].get<long>(), r[1].get<long>());
  }
  if (j.contains("angle")) return LocalizationPoint::from_angle(j["angle"].get<double>());
  fail(ErrorCode::ParseError, "a localization point is {\"root_of_unity\": [p, q]} or {\"angle\": x}");
}

/// "p/q" as a root of unity.
inline LocalizationPoint point_from_string(const std::string& s) {
  const auto slash = s.find('/');
  require(slash != std::string::npos, ErrorCode::ParseError, "xi is given as p/q, meaning e^{2 pi i p/q}");
  try {
    return LocalizationPoint::root_of_unity(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    fail(ErrorCode::ParseError, "bad root of unity '" + s + "'");
  }
}

inline Json point_to_json(const LocalizationPoint& xi) {
  if (xi.exact()) return Json{{"root_of_unity", {xi.root->first, xi.root->second}}};
  return Json{{"angle", xi.angle}};
}

inline std::string write_json(const Json& j) { return j.dump(2) + "\n"; }

} // namespace etaflow::io
