// Command-line front end. Exit codes: 0 success, 1 property or oracle
// failure, 2 input or computation error.

#include "etaflow/io.hpp"
#include "etaflow/monodromy.hpp"
#include "etaflow/verify.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace etaflow;
using io::Json;

namespace {

struct Options {
  std::string json_path;
  std::string backend = "exact";
  double tolerance = 1e-9;
  std::string truncation = "auto";
  std::uint64_t seed = 7;
  std::vector<std::string> argv;
};

struct Outcome {
  Json result;
  std::string text;
  bool passed = true;
};

int parse_truncation(const std::string& s, int fallback) {
  if (s == "auto") return fallback;
  try {
    std::size_t used = 0;
    const int n = std::stoi(s, &used);
    require(used == s.size() && n >= 1, ErrorCode::InvalidArgument, "");
    return n;
  } catch (const std::exception&) {
    fail(ErrorCode::InvalidArgument, "--truncation takes a positive integer or 'auto', got '" + s + "'");
  }
}

bool float_backend(const Options& o) {
  if (o.backend == "float") return true;
  require(o.backend == "exact", ErrorCode::InvalidArgument, "--backend is 'exact' or 'float'");
  return false;
}

std::string digest_of_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::uint64_t h = 1469598103934665603ULL; // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << h;
  return s.str();
}

std::string join(const std::vector<long>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + std::to_string(v[k]);
  return s.empty() ? "-" : s;
}

std::string row(const std::string& key, const std::string& value) {
  std::ostringstream s;
  s << std::left << std::setw(20) << key << value << "\n";
  return s.str();
}

std::string profile_rows(const SignatureProfile& p) {
  return row("sigma", join(p.sigma)) + row("n_plus", join(p.n_plus)) + row("n_minus", join(p.n_minus));
}

// ---- jumps ------------------------------------------------------------------------

template <Field F> Outcome run_jumps(const Json& input, bool oracle) {
  auto f = io::family_from_json<F>(input);
  auto r = jumps(f, oracle);
  Outcome out;
  out.result = io::jumps_to_json(r);
  out.text = row("dim", std::to_string(f.dim)) + row("degree", std::to_string(f.degree())) + profile_rows(r.profile) +
             row("eta0", std::to_string(r.eta0)) + row("jump_plus", std::to_string(r.jump_plus)) +
             row("jump_minus", std::to_string(r.jump_minus)) + row("flow", std::to_string(r.flow));
  if (r.oracle_checked) {
    out.text += row("oracle", "plus " + std::to_string(r.oracle.plus) + ", minus " + std::to_string(r.oracle.minus) +
                                  " (accepted at 10^-" + std::to_string(r.oracle.accepted_at) + ")");
    out.text += row("oracle_agreement", r.oracle_agreement ? "true" : "false");
    out.passed = r.oracle_agreement;
  }
  return out;
}

// ---- linkform -----------------------------------------------------------------------

template <Field F> Outcome run_linkform(const Json& input) {
  auto f = io::form_from_json<F>(input);
  const auto hermitian = f.parity == Parity::Hermitian ? f : skew_to_hermitian(f);
  Outcome out;
  SignatureProfile p;
  try {
    p = signature_profile(hermitian, ProfileRoute::Both);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RoutesDisagree) throw;
    out.passed = false;
    p = signature_profile(hermitian, ProfileRoute::W);
    out.text += row("routes", "DISAGREE");
  }
  out.result = Json{{"dim", f.dim},
                    {"parity", std::string(parity_name(f.parity))},
                    {"profile", io::profile_to_json(p)},
                    {"jump_plus", p.jump_plus()},
                    {"jump_minus", p.jump_minus()},
                    {"routes_agree", out.passed}};
  out.text = row("dim", std::to_string(f.dim)) + row("parity", std::string(parity_name(f.parity))) + profile_rows(p) +
             row("jump_plus", std::to_string(p.jump_plus())) + row("jump_minus", std::to_string(p.jump_minus())) + out.text;
  return out;
}

// ---- circle and complex ------------------------------------------------------------------

template <Field F> void describe_linking(const GermComplex<F>& c, std::size_t l, Outcome& out) {
  auto cohomology = torsion_cohomology(c);
  out.result["cohomology"] = io::cohomology_to_json(cohomology.degrees);
  for (std::size_t k = 0; k < cohomology.degrees.size(); ++k) {
    const auto& d = cohomology.degrees[k];
    std::string torsion;
    for (int e : d.torsion) torsion += (torsion.empty() ? "" : " + ") + std::string("O/t^") + std::to_string(e);
    out.text += row("H^" + std::to_string(k), "free " + std::to_string(d.free_rank) + ", torsion " + (torsion.empty() ? "0" : torsion));
  }
  if (!c.duality || l >= c.dims.size()) return;
  auto form = homological_linking(c, l, true);
  const double defect = symmetry_defect(form);
  auto p = signature_profile(normalized(form));
  out.result["linking_degree"] = l;
  out.result["form"] = io::form_to_json(form);
  out.result["symmetry_defect"] = defect;
  out.result["profile"] = io::profile_to_json(p);
  out.result["jump_plus"] = p.jump_plus();
  out.result["jump_minus"] = p.jump_minus();
  out.text += row("linking degree", std::to_string(l)) + row("parity", std::string(parity_name(form.parity))) + profile_rows(p) +
              row("jump_plus", std::to_string(p.jump_plus())) + row("jump_minus", std::to_string(p.jump_minus())) +
              row("symmetry_defect", io::decimal(defect));
  if (c.unitary) out.passed = defect == 0.0 || (!field_traits<F>::exact && defect < 1e-6);
}

template <Field F> Outcome run_circle(const MonodromySpec& spec, int n) {
  auto rho = build_deformation<F>(spec, n);
  auto c = circle_complex(rho);
  Outcome out;
  out.result = Json{{"rank", rho.rank}, {"truncation", n}, {"unitary", rho.unitary}};
  out.text = row("rank", std::to_string(rho.rank)) + row("truncation", std::to_string(n));
  describe_linking(c, 1, out);
  for (const auto& w : rho.warnings) out.text += row("warning", w);
  return out;
}

template <Field F> Outcome run_complex(const Json& input) {
  auto [c, l] = io::complex_from_json<F>(input);
  Outcome out;
  out.result = Json{{"degrees", c.dims}};
  describe_linking(c, l, out);
  return out;
}

// ---- blanchfield ------------------------------------------------------------------------

template <Field F> Json report_point(const SeifertMatrix& v, const LambdaModule& m, const LocalizationPoint& xi, int n, Outcome& out) {
  const auto local = localize_at(m, xi);
  const auto push = pushforward_as<F>(m, xi, n);
  const long jump = pushforward_jump(push.profile);
  const auto lt = levine_tristram_jump(v, xi.angle);
  const bool agree = jump == lt.jump();
  out.passed = out.passed && agree && push.dimension() == local.dimension;
  std::vector<long> exps(push.exponents.begin(), push.exponents.end());
  out.text += row("xi", xi.exact() ? "e^{2 pi i " + std::to_string(xi.root->first) + "/" + std::to_string(xi.root->second) + "}"
                                   : "e^{i " + io::decimal(xi.angle) + "}");
  out.text += row("  local dimension", std::to_string(local.dimension)) + row("  torsion orders", join(exps)) +
              row("  sigma", join(push.profile.sigma)) + row("  jump", std::to_string(jump)) +
              row("  LT jump", std::to_string(lt.jump()) + " (" + std::to_string(lt.before) + " -> " + std::to_string(lt.after) + ")") +
              row("  agreement", agree ? "true" : "false");
  return Json{{"xi", io::point_to_json(xi)},
              {"local_dimension", local.dimension},
              {"torsion_orders", push.exponents},
              {"profile", io::profile_to_json(push.profile)},
              {"jump", jump},
              {"levine_tristram", {{"before", lt.before}, {"after", lt.after}, {"jump", lt.jump()}}},
              {"agreement", agree}};
}

Outcome run_blanchfield(const SeifertMatrix& v, std::optional<LocalizationPoint> xi, bool use_float, int n) {
  auto m = alexander_module(v);
  Outcome out;
  const auto det = laurent_determinant(m.presentation);
  Json det_json = Json::array();
  for (const auto& c : det.poly().coeffs()) det_json.push_back(io::scalar_to_json(c));
  std::string det_text;
  for (const auto& c : det.poly().coeffs()) det_text += (det_text.empty() ? "" : " ") + c.re.get_str();
  out.result = Json{{"genus_rank", m.size()}, {"det_low", det.low()}, {"det", det_json}};
  out.text = row("size", std::to_string(m.size())) + row("det A", "tau^" + std::to_string(det.low()) + " * [" + det_text + "]");
  std::vector<LocalizationPoint> points;
  if (xi) {
    points.push_back(*xi);
  } else {
    points = roots_of_unity_on_circle(m);
    for (double a : circle_root_angles(m)) {
      bool known = false;
      for (const auto& p : points) known = known || std::abs(std::polar(1.0, a) - p.value()) < 1e-6;
      if (!known) points.push_back(LocalizationPoint::from_angle(a));
    }
  }
  if (points.empty()) out.text += row("circle roots", "none");
  Json reports = Json::array();
  for (const auto& p : points) {
    if (p.exact() && !use_float) reports.push_back(report_point<Cyclotomic>(v, m, p, n, out));
    else reports.push_back(report_point<std::complex<double>>(v, m, LocalizationPoint::from_angle(p.angle), n, out));
  }
  out.result["points"] = reports;
  return out;
}

// ---- verify --------------------------------------------------------------------------------

Outcome run_verify(const std::string& corpus_spec, std::uint64_t seed, std::size_t count) {
  auto corpus = generate_corpus(parse_corpus_spec(corpus_spec), seed, count);
  auto checks = check_corpus(corpus);
  std::size_t agreements = 0, passed = 0;
  std::map<std::string, std::size_t> failures;
  Json failed = Json::array();
  for (std::size_t k = 0; k < checks.size(); ++k) {
    const auto& c = checks[k];
    agreements += c.error.empty() && c.oracle;
    passed += c.ok();
    for (const auto& f : c.failures) ++failures[f];
    if (!c.error.empty()) ++failures["error"];
    if (!c.ok())
      failed.push_back(Json{{"index", k}, {"kind", c.kind}, {"failures", c.failures}, {"error", c.error},
                            {"family", io::family_to_json(corpus[k].family)}});
  }
  Outcome out;
  out.passed = passed == checks.size();
  out.result = Json{{"corpus", corpus_spec}, {"seed", seed},         {"count", checks.size()},
                    {"passed", passed},      {"oracle_agreements", agreements}, {"failures", failures}, {"failed", failed}};
  out.text = row("corpus", corpus_spec) + row("seed", std::to_string(seed)) + row("instances", std::to_string(checks.size())) +
             row("oracle agreements", std::to_string(agreements) + "/" + std::to_string(checks.size())) +
             row("all properties", std::to_string(passed) + "/" + std::to_string(checks.size()));
  for (const auto& [name, k] : failures) out.text += row("  failed " + name, std::to_string(k));
  return out;
}

int emit(const Options& o, const std::string& command, const std::string& input_path, Outcome out, double seconds) {
  std::cout << out.text << row("status", out.passed ? "PASS" : "FAIL") << row("time", io::decimal(seconds) + " s");
  if (!o.json_path.empty()) {
    Json report{{"command", o.argv}, {"subcommand", command}};
    if (!input_path.empty()) report["input_digest"] = digest_of_file(input_path);
    report["backend"] = o.backend;
    report["result"] = out.result;
    report["passed"] = out.passed;
    std::ofstream file(o.json_path);
    require(file.good(), ErrorCode::InvalidArgument, "cannot write " + o.json_path);
    file << io::write_json(report);
  }
  return out.passed ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  o.argv.assign(argv, argv + argc);
  CLI::App app{"Signature jumps of Hermitian families, linking forms, circle deformations and Blanchfield pushforwards"};
  app.require_subcommand(1);
  app.add_option("--json", o.json_path, "write the report as JSON to this path");
  app.add_option("--backend", o.backend, "exact or float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tolerance", o.tolerance, "zero threshold of the float backend");
  app.add_option("--truncation", o.truncation, "series truncation order, or auto");
  app.add_option("--seed", o.seed, "random seed");

  std::string input;
  bool no_oracle = false;
  auto* jumps_cmd = app.add_subcommand("jumps", "profile and jumps of a Hermitian family");
  jumps_cmd->add_option("family", input, "family JSON")->required();
  jumps_cmd->add_flag("--no-oracle", no_oracle, "skip the signature oracle");

  auto* linkform_cmd = app.add_subcommand("linkform", "signature profile of a torsion linking form");
  linkform_cmd->add_option("form", input, "form JSON")->required();

  std::size_t rank = 0; // 0: taken from the monodromy
  std::string monodromy = "exp(2*pi*i*t)";
  auto* circle_cmd = app.add_subcommand("circle", "cohomology and linking form of a circle deformation");
  circle_cmd->add_option("--rank", rank, "rank of the local system (default: from the monodromy)")->check(CLI::PositiveNumber);
  circle_cmd->add_option("--monodromy", monodromy, "monodromy expression, e.g. \"diag(exp(2*pi*i*t), root(1/3))\"");

  std::string xi_text;
  double angle = 0;
  auto* blanchfield_cmd = app.add_subcommand("blanchfield", "Blanchfield pushforward at points of the unit circle");
  blanchfield_cmd->add_option("seifert", input, "Seifert matrix JSON")->required();
  auto* xi_opt = blanchfield_cmd->add_option("--xi", xi_text, "root of unity p/q, meaning e^{2 pi i p/q}");
  auto* angle_opt = blanchfield_cmd->add_option("--angle", angle, "point e^{i angle}")->excludes(xi_opt);

  auto* complex_cmd = app.add_subcommand("complex", "torsion cohomology and linking form of a germ complex");
  complex_cmd->add_option("complex", input, "complex JSON")->required();

  std::string corpus = "default";
  std::size_t count = 200;
  auto* verify_cmd = app.add_subcommand("verify", "property checks on a generated corpus");
  verify_cmd->add_option("--corpus", corpus, "corpus spec, e.g. default, orders1, planted, random, \"default,n=4,d=2\"");
  verify_cmd->add_option("--count", count, "number of families");

  for (auto* sub : {jumps_cmd, linkform_cmd, circle_cmd, blanchfield_cmd, complex_cmd, verify_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  try {
    float_tolerance = o.tolerance;
    const bool use_float = float_backend(o);
    std::string command;
    Outcome out;
    if (*jumps_cmd) {
      command = "jumps";
      auto j = io::read_json_file(input);
      out = use_float ? run_jumps<std::complex<double>>(j, false) : run_jumps<GaussianRational>(j, !no_oracle);
    } else if (*linkform_cmd) {
      command = "linkform";
      auto j = io::read_json_file(input);
      out = use_float ? run_linkform<std::complex<double>>(j) : run_linkform<GaussianRational>(j);
    } else if (*circle_cmd) {
      command = "circle";
      const int n = parse_truncation(o.truncation, 16);
      auto spec = parse_monodromy(monodromy, rank);
      out = use_float ? run_circle<std::complex<double>>(spec, n) : run_circle<Cyclotomic>(spec, n);
    } else if (*blanchfield_cmd) {
      command = "blanchfield";
      const int n = parse_truncation(o.truncation, 0);
      std::optional<LocalizationPoint> xi;
      if (*xi_opt) xi = io::point_from_string(xi_text);
      if (*angle_opt) xi = LocalizationPoint::from_angle(angle);
      out = run_blanchfield(io::seifert_from_json(io::read_json_file(input)), xi, use_float, n);
    } else if (*complex_cmd) {
      command = "complex";
      auto j = io::read_json_file(input);
      out = use_float ? run_complex<std::complex<double>>(j) : run_complex<GaussianRational>(j);
    } else {
      command = "verify";
      input.clear();
      out = run_verify(corpus, o.seed, count);
    }
    return emit(o, command, input, std::move(out), elapsed());
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << "\n";
    return 2;
  }
}
