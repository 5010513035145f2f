// Command-line front end: geometric/arithmetic analysis, level-set series,
// denominator fitting, exponential sums, and the closed-form reference
// displays, with optional deterministic JSON reports.
//
// Exit codes: 0 success, 2 input/parse error, 3 unsupported input,
// 4 resource cap exceeded, 5 internal inconsistency.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "izeta/arith.hpp"
#include "izeta/common.hpp"
#include "izeta/expsum.hpp"
#include "izeta/geom.hpp"
#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "izeta/report.hpp"
#include "izeta/version.hpp"
#include "izeta/zeta.hpp"

namespace {

void emit_json(const izeta::Json& j, const std::string& path) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw izeta::DomainError("cannot open JSON output file");
  out << j.dump(2) << "\n";
}

// When the JSON report claims stdout ("-"), the human-readable summary
// moves to stderr so stdout stays machine-parseable.
std::ostream& text_out(const std::string& json_path) {
  return json_path == "-" ? std::cerr : std::cout;
}

std::string sum_string(const izeta::RootOfUnitySum& s) {
  const auto r = s.as_rational();
  if (r) return izeta::rat_string(*r);
  const auto z = s.to_complex();
  std::ostringstream os;
  os << "(" << z.real() << (z.imag() < 0 ? " - " : " + ")
     << std::abs(z.imag()) << "i)";
  return os.str();
}

int run_analyze(const izeta::BivariatePolynomial& f, long long p, bool strict,
                const std::string& json_path) {
  const izeta::GeomNewtonPolygon poly = izeta::newton_polygon(f);
  if (strict && poly.constant_term_warning) {
    std::cerr << "analyze: strict mode rejects a nonzero constant term "
                 "(the integrand never vanishes)\n";
    return 3;
  }
  const auto base = izeta::conical_subdivision(poly);
  const auto refined = izeta::refine_to_simple(poly, base);
  const auto nd = izeta::kouchnirenko_check(f, p);
  const auto g = izeta::candidate_poles_global(f, p);

  std::ostream& out = text_out(json_path);
  out << "polynomial: " << f.to_string() << "\n";
  out << "p: " << p << "\n";
  out << "support points: " << poly.support.size() << "\n";
  out << "compact edges: " << poly.edges.size() << "\n";
  for (const auto& e : poly.edges) {
    out << "  normal (" << e.normal.first << "," << e.normal.second
        << ")  weighted degree " << e.d << "\n";
  }
  out << "fan cones: " << base.size() << " -> refined " << refined.size()
      << "\n";
  out << "nondegenerate over F_p: " << (nd.all_nondegenerate ? "yes" : "no")
      << "\n";
  out << "candidate poles of |f|^s (real parts):\n";
  for (const auto& cp : g.poles) {
    out << "  " << izeta::rat_string(cp.value) << "  [";
    for (std::size_t i = 0; i < cp.origins.size(); ++i) {
      if (i) out << ", ";
      out << cp.origins[i].formula;
    }
    out << "]\n";
  }
  if (g.beta) {
    out << "decay exponent beta: " << izeta::rat_string(*g.beta) << "\n";
  }
  if (!json_path.empty()) emit_json(izeta::analysis_report(f, p), json_path);
  return 0;
}

int run_zeta(const izeta::BivariatePolynomial& f, long long p, int K, int c,
             long long chi_index, int chi_level, int threads,
             std::uint64_t budget, const std::string& json_path) {
  izeta::WalkOptions opt;
  opt.budget = budget;
  opt.threads = threads;
  const izeta::LevelSetTable table =
      izeta::measure_level_sets(f, p, K, c, opt);
  const izeta::Character chi(p, chi_level, chi_index);
  const izeta::ZetaSeries zs = izeta::zeta_series(table, chi);
  std::ostream& out = text_out(json_path);
  out << "p=" << p << " K=" << K << " c=" << c << " chi=(level " << chi_level
      << ", index " << chi_index << ")\n";
  out << "cells visited: " << table.visited << "\n";
  for (int k = 0; k <= K; ++k) {
    out << "A_" << k << " = "
        << sum_string(zs.coeffs[static_cast<std::size_t>(k)]) << "\n";
  }
  out << "tail mass bound: " << izeta::rat_string(table.tail_measure) << "\n";
  if (!json_path.empty()) {
    izeta::Json j;
    j["version"] = IZETA_VERSION;
    j["polynomial"] = f.to_string();
    j["table"] = izeta::json_of(table);
    j["series"] = izeta::json_of(zs);
    emit_json(j, json_path);
  }
  return 0;
}

int run_fit(const izeta::BivariatePolynomial& f, long long p, int K, int c,
            int m_max, int threads, std::uint64_t budget,
            const std::string& json_path) {
  izeta::WalkOptions opt;
  opt.budget = budget;
  opt.threads = threads;
  const izeta::LevelSetTable table =
      izeta::measure_level_sets(f, p, K, c, opt);
  const izeta::Character triv(p, 1, 0);
  const izeta::ZetaSeries zs = izeta::zeta_series(table, triv);
  std::vector<izeta::Rat> series;
  for (const auto& a : zs.coeffs) {
    const auto r = a.as_rational();
    if (!r) throw izeta::DomainError("fit: trivial series must be rational");
    series.push_back(*r);
  }
  // Try the core pole-origin basis first, then the extended monomial-cone
  // basis, at decreasing starting multiplicities; report the first fit that
  // is both well-posed (enough verified coefficients) and consistent.
  const std::vector<std::vector<std::pair<long long, long long>>> bases = {
      izeta::fit_basis(f, p), izeta::fit_basis_extended(f, p)};
  izeta::FitOutcome fo;
  std::vector<std::pair<long long, long long>> basis;
  bool attempted = false;
  for (const auto& b : bases) {
    for (int mm = m_max; mm >= 1; --mm) {
      izeta::FitOutcome cand;
      try {
        cand = izeta::fit_rational(series, p, b, mm);
      } catch (const izeta::DomainError&) {
        continue;  // series too short for this denominator degree
      }
      if (!attempted || (cand.consistent && !fo.consistent)) {
        fo = cand;
        basis = b;
        attempted = true;
      }
      if (cand.consistent) break;
    }
    if (attempted && fo.consistent) break;
  }
  if (!attempted) {
    throw izeta::DomainError(
        "fit: series too short for every candidate factor basis");
  }
  std::ostream& out = text_out(json_path);
  out << "factor basis:";
  for (const auto& ab : basis) {
    out << " (1 - q^-" << ab.first << " t^" << ab.second << ")";
  }
  out << "\n";
  if (!fo.consistent) {
    out << "fit: INCONSISTENT at t^" << fo.first_violation << "\n";
  } else {
    out << "fit: consistent\n";
    out << "numerator:";
    for (const auto& x : fo.numerator) {
      out << " " << izeta::rat_string(x);
    }
    out << "\ndenominator:";
    for (const auto& d : fo.denominator) {
      out << " (1 - q^-" << d.A << " t^" << d.B << ")^" << d.mult;
    }
    out << "\n";
  }
  if (!json_path.empty()) {
    izeta::Json j;
    j["version"] = IZETA_VERSION;
    j["polynomial"] = f.to_string();
    izeta::Json b = izeta::Json::array();
    for (const auto& ab : basis) {
      b.push_back(izeta::Json::array({ab.first, ab.second}));
    }
    j["basis"] = b;
    j["fit"] = izeta::json_of(fo);
    j["table"] = izeta::json_of(table);
    emit_json(j, json_path);
  }
  return fo.consistent ? 0 : 5;
}

int run_expsum(const izeta::BivariatePolynomial& f, long long p, int m,
               long long u, int K, int c, int decay_m, int threads,
               std::uint64_t budget, const std::string& json_path) {
  izeta::Json j;
  j["version"] = IZETA_VERSION;
  j["polynomial"] = f.to_string();
  std::ostream& out = text_out(json_path);
  if (decay_m > 0) {
    const izeta::DecayReport rep = izeta::decay_report(f, p, decay_m, budget);
    out << "beta = " << izeta::rat_string(rep.beta) << "\n";
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      out << "r_" << (i + 1) << " = " << rep.ratios[i] << "\n";
    }
    out << "rho = " << rep.rho << "\n";
    j["decay"] = izeta::json_of(rep);
    emit_json(j, json_path);
    return 0;
  }
  const auto direct = izeta::exp_sum_direct(f, p, m, u, budget);
  out << "E_direct(" << u << "/p^" << m << ") = " << direct.real() << " + "
      << direct.imag() << "i\n";
  izeta::WalkOptions opt;
  opt.budget = budget;
  opt.threads = threads;
  const izeta::LevelSetTable table =
      izeta::measure_level_sets(f, p, K, c, opt);
  const izeta::DenefResult den =
      izeta::exp_sum_denef({table}, p, m, u);
  out << "E_series = " << den.value.real() << " + " << den.value.imag()
      << "i  (bound " << den.error_bound << ")\n";
  const double diff = std::abs(direct - den.value);
  out << "difference = " << diff
      << (diff <= den.error_bound + 1e-8 ? "  (within bound)"
                                         : "  (EXCEEDS bound)") << "\n";
  j["direct"] = izeta::Json::array({direct.real(), direct.imag()});
  j["series_reconstruction"] = izeta::json_of(den);
  j["difference"] = diff;
  emit_json(j, json_path);
  return diff <= den.error_bound + 1e-8 ? 0 : 5;
}

int run_golden(long long q, const std::string& which, long long N,
               long long T, int K, const std::string& json_path) {
  const izeta::RationalFunctionT rf = izeta::golden_example_forms(
      q, which, izeta::Rat(N), izeta::Rat(T));
  std::ostream& out = text_out(json_path);
  out << "case " << which << " (q=" << q << ")\n";
  out << "numerator degree: " << rf.numerator.size() - 1 << "\n";
  out << "denominator:";
  for (const auto& d : rf.denominator) {
    out << " (1 - q^-" << d.A << " t^" << d.B << ")";
  }
  out << "\n";
  const auto series = izeta::series_of_rational(rf, K);
  for (int k = 0; k <= K; ++k) {
    out << "A_" << k << " = "
        << izeta::rat_string(series[static_cast<std::size_t>(k)]) << "\n";
  }
  if (!json_path.empty()) {
    izeta::Json j;
    j["version"] = IZETA_VERSION;
    j["case"] = which;
    j["form"] = izeta::json_of(rf);
    izeta::Json s = izeta::Json::array();
    for (const auto& x : series) s.push_back(izeta::rat_string(x));
    j["series"] = s;
    emit_json(j, json_path);
  }
  return 0;
}

int run_selftest() {
  using izeta::Rat;
  int failures = 0;
  auto check = [&](bool ok, const char* what) {
    std::cout << (ok ? "  ok  " : "  FAIL") << "  " << what << "\n";
    if (!ok) ++failures;
  };

  // Fan of the worked example refines to nine simple cones.
  {
    const auto f = izeta::parse_poly("(y^3-x^2)^2+x^4*y^4");
    const auto poly = izeta::newton_polygon(f);
    const auto refined =
        izeta::refine_to_simple(poly, izeta::conical_subdivision(poly));
    check(refined.size() == 9, "example fan refines to 9 cones");
    const auto g = izeta::candidate_poles_global(f, 5);
    check(g.beta && *g.beta == Rat(-5, 12), "example decay exponent -5/12");
  }

  // Level sets of f = xy at p = 3 match the closed form.
  {
    const auto f = izeta::parse_poly("x*y");
    izeta::WalkOptions opt;
    const auto t = izeta::measure_level_sets(f, 3, 3, 1, opt);
    const Rat u = Rat(1) - Rat(1, 3);
    bool ok = true;
    for (int k = 0; k <= 3; ++k) {
      Rat expect(0);
      for (int i = 0; i <= k; ++i) {
        expect += (u / izeta::pow_int(izeta::Int(3),
                                      static_cast<unsigned long>(i))) *
                  (u / izeta::pow_int(izeta::Int(3),
                                      static_cast<unsigned long>(k - i)));
      }
      Rat got(0);
      for (const auto& m : t.mu[static_cast<std::size_t>(k)]) got += m;
      ok = ok && (got == expect);
    }
    check(ok, "level-set masses of x*y match the closed form");
  }

  // Fit of x*y recovers the double factor (1 - q^-1 t)^2.
  {
    const auto f = izeta::parse_poly("x*y");
    izeta::WalkOptions opt;
    const auto t = izeta::measure_level_sets(f, 3, 8, 1, opt);
    const izeta::Character triv(3, 1, 0);
    const auto zs = izeta::zeta_series(t, triv);
    std::vector<Rat> series;
    for (const auto& a : zs.coeffs) series.push_back(*a.as_rational());
    const auto fo = izeta::fit_rational(series, 3, {{1, 1}}, 2);
    check(fo.consistent && fo.denominator.size() == 1 &&
              fo.denominator[0].mult == 2,
          "fit of x*y keeps a double factor");
  }

  // Character conductors at level 2 (p = 5).
  {
    const izeta::Character a(5, 2, 5);   // level-1 character seen at level 2
    const izeta::Character b(5, 2, 1);   // primitive at level 2
    check(a.conductor() == 1 && b.conductor() == 2,
          "character conductor normalization");
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact local zeta data of bivariate polynomials"};
  app.set_version_flag("--version", IZETA_VERSION);
  app.require_subcommand(1);

  std::string poly_text;
  long long p = 5;
  int K = 6;
  int c = 1;
  int threads = 1;
  std::uint64_t budget = 100'000'000ULL;
  std::string json_path;
  bool strict = false;
  long long chi_index = 0;
  int chi_level = 1;
  int m = 1;
  long long u = 1;
  int decay_m = 0;
  long long q = 5;
  std::string which = "triv";
  long long Ncount = 8;
  long long Tcount = 8;

  auto add_poly = [&](CLI::App* sub) {
    sub->add_option("polynomial", poly_text,
                    "Polynomial in x and y with integer coefficients")
        ->required();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--p", p, "Prime of the local field");
    sub->add_option("--json", json_path, "Write a JSON report (- for stdout)");
  };
  auto add_walk = [&](CLI::App* sub) {
    sub->add_option("--K", K, "Depth: series coefficients A_0..A_K");
    sub->add_option("--c", c, "Unit precision for angular components");
    sub->add_option("--threads", threads, "Worker threads");
    sub->add_option("--budget", budget, "Cell budget for the enumeration");
  };

  CLI::App* an = app.add_subcommand("analyze",
                                    "Polygon, fan, and candidate poles");
  add_poly(an);
  add_common(an);
  an->add_flag("--strict", strict, "Reject polynomials with f(0,0) != 0");

  CLI::App* ze = app.add_subcommand("zeta", "Series coefficients A_k");
  add_poly(ze);
  add_common(ze);
  add_walk(ze);
  ze->add_option("--chi", chi_index, "Character index k");
  ze->add_option("--chi-level", chi_level, "Character level c");

  CLI::App* fi = app.add_subcommand("fit", "Fit a rational function in t");
  add_poly(fi);
  add_common(fi);
  add_walk(fi);
  int m_max = 2;
  fi->add_option("--m-max", m_max, "Starting multiplicity of each factor");

  CLI::App* ex = app.add_subcommand("expsum", "Exponential sums E(u/p^m)");
  add_poly(ex);
  add_common(ex);
  add_walk(ex);
  ex->add_option("--m", m, "Depth of the additive character");
  ex->add_option("--u", u, "Unit numerator");
  ex->add_option("--decay", decay_m,
                 "Report normalized peaks for m = 1..this instead");

  CLI::App* go = app.add_subcommand("golden",
                                    "Closed-form reference displays for "
                                    "(y^3-x^2)^2+x^4y^4");
  go->add_option("--q", q, "Residue field size");
  go->add_option("--case", which,
                 "triv, chi2, chi4, chi6, chi12, or chi20");
  go->add_option("--N", Ncount, "Unit-square count N (8 for q = 5)");
  go->add_option("--T", Tcount, "Unit-square count T (8 for q = 5)");
  go->add_option("--K", K, "Series depth to print");
  go->add_option("--json", json_path, "Write a JSON report (- for stdout)");

  app.add_subcommand("selftest", "Quick internal coherence checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("selftest")) return run_selftest();
    if (app.got_subcommand("golden")) {
      return run_golden(q, which, Ncount, Tcount, K, json_path);
    }
    const izeta::BivariatePolynomial f = izeta::parse_poly(poly_text);
    if (app.got_subcommand("analyze")) {
      return run_analyze(f, p, strict, json_path);
    }
    if (app.got_subcommand("zeta")) {
      return run_zeta(f, p, K, c, chi_index, chi_level, threads, budget,
                      json_path);
    }
    if (app.got_subcommand("fit")) {
      return run_fit(f, p, K, c, m_max, threads, budget, json_path);
    }
    if (app.got_subcommand("expsum")) {
      return run_expsum(f, p, m, u, K, c, decay_m, threads, budget,
                        json_path);
    }
  } catch (const izeta::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const izeta::DomainError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const izeta::ResourceCapError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 5;
  }
  return 0;
}
