// Acceptance checks, one criterion per invocation: `acceptance <selector>`.
// Selectors: 1, 1ci, 1d, 2, 3, 4, 5, 6, 7, 8, 9, 10.
// Prints one [PASS]/[FAIL] line per criterion; the exit code is the number
// of failed checks.  Wall-clock caps are enforced inside the binary.

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdint>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "izeta/arith.hpp"
#include "izeta/expsum.hpp"
#include "izeta/geom.hpp"
#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "izeta/zeta.hpp"
#include "naive_measures.hpp"

using izeta::BivariatePolynomial;
using izeta::Character;
using izeta::Int;
using izeta::Rat;
using izeta::RootOfUnitySum;
using izeta::WalkOptions;

namespace {

struct Checker {
  int failures = 0;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      if (details.size() < 12) details.push_back(what);
    }
  }

  template <typename T>
  void check_eq(const T& got, const T& want, const std::string& what) {
    if (!(got == want)) {
      std::ostringstream ss;
      ss << what;
      check(false, ss.str());
    }
  }
};

std::string rat_str(const Rat& r) {
  std::ostringstream ss;
  ss << r;
  return ss.str();
}

const BivariatePolynomial& example_poly() {
  static const auto f = izeta::parse_poly("(y^3-x^2)^2+x^4*y^4");
  return f;
}

double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void enforce_cap(Checker& c, double elapsed, double cap) {
  if (elapsed > cap) {
    std::ostringstream ss;
    ss << "wall time " << elapsed << " s exceeds the " << cap << " s cap";
    c.check(false, ss.str());
  }
}

int verdict(const Checker& c, const std::string& label) {
  for (const auto& d : c.details) std::cout << "  - " << d << "\n";
  std::cout << (c.failures == 0 ? "[PASS] " : "[FAIL] ") << label;
  if (c.failures != 0) std::cout << " (" << c.failures << " failed checks)";
  std::cout << std::endl;
  return c.failures;
}

std::vector<Rat> trivial_series(const izeta::LevelSetTable& table, int K) {
  const auto z = izeta::zeta_series(table, Character(table.p, 1, 0));
  std::vector<Rat> out;
  for (int k = 0; k <= K; ++k) {
    const auto r = z.coeffs[static_cast<std::size_t>(k)].as_rational();
    out.push_back(r ? *r : Rat(0));
  }
  return out;
}

// Criterion 1 family: the measured series of the worked example against its
// closed-form reference display (q = 5, unit-square counts N = T = 8).
int crit_display_match(int K, unsigned long long budget, double cap,
                       const std::string& label) {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  WalkOptions opt;
  opt.budget = budget;
  const auto table = izeta::measure_level_sets(example_poly(), 5, K, 1, opt);
  const auto got = trivial_series(table, K);
  const auto want = izeta::series_of_rational(
      izeta::golden_example_forms(5, "triv", Rat(8), Rat(8)), K);
  for (int k = 0; k <= K; ++k) {
    if (got[static_cast<std::size_t>(k)] !=
        want[static_cast<std::size_t>(k)]) {
      c.check(false, "A_" + std::to_string(k) + " measured " +
                         rat_str(got[static_cast<std::size_t>(k)]) +
                         " display " +
                         rat_str(want[static_cast<std::size_t>(k)]));
    }
  }
  enforce_cap(c, seconds_since(start), cap);
  return verdict(c, label);
}

// Companion diagnostic: adding the unit-square stationary terms (off-zero
// density nu at t^0 and the simple-root ladder sigma) to the display equals
// the measured series exactly.
int crit_display_corrected() {
  Checker c;
  WalkOptions opt;
  opt.budget = 7'000'000'000ULL;
  const int K = 8;
  const auto table = izeta::measure_level_sets(example_poly(), 5, K, 1, opt);
  const auto got = trivial_series(table, K);
  const auto display = izeta::series_of_rational(
      izeta::golden_example_forms(5, "triv", Rat(8), Rat(8)), K);
  const auto usq =
      izeta::unit_square_data(example_poly(), Character(5, 1, 0), K);
  c.check(usq.torus_zero_count == 8, "torus zero count is not 8");
  const Rat nu = Rat(16 - usq.torus_zero_count, 25);
  const Rat sigma = Rat(usq.torus_zero_count, 25);
  c.check(nu == Rat(8, 25), "nu is not 8/25");
  c.check(sigma == Rat(8, 25), "sigma is not 8/25");
  for (int k = 0; k <= K; ++k) {
    Rat corrected = display[static_cast<std::size_t>(k)];
    if (k == 0) {
      corrected += nu;
    } else {
      corrected +=
          sigma * Rat(4, 5) *
          Rat(1, izeta::pow_int(Int(5), static_cast<unsigned long>(k - 1)));
    }
    if (corrected != got[static_cast<std::size_t>(k)]) {
      c.check(false, "corrected A_" + std::to_string(k) + " = " +
                         rat_str(corrected) + " but measured " +
                         rat_str(got[static_cast<std::size_t>(k)]));
    }
  }
  return verdict(c,
                 "1d: display plus unit-square stationary terms equals the "
                 "measured series (K=8, exact)");
}

// Criterion 2: primitive conductor-2 twists of the worked example vanish.
int crit_conductor2() {
  Checker c;
  WalkOptions opt;
  opt.budget = 200'000'000ULL;
  const auto table = izeta::measure_level_sets(example_poly(), 5, 5, 2, opt);
  for (long long idx : {1LL, 4LL, 7LL}) {
    const auto z = izeta::zeta_series(table, Character(5, 2, idx));
    for (std::size_t k = 0; k < z.coeffs.size(); ++k) {
      if (!z.coeffs[k].is_zero()) {
        c.check(false, "twist index " + std::to_string(idx) + " has A_" +
                           std::to_string(k) + " != 0");
      }
    }
  }
  // Sanity: twists that factor through conductor 1 do not vanish.
  for (long long idx : {10LL, 15LL}) {
    const auto z = izeta::zeta_series(table, Character(5, 2, idx));
    bool any = false;
    for (const auto& a : z.coeffs) any = any || !a.is_zero();
    c.check(any, "conductor-1 twist index " + std::to_string(idx) +
                     " vanished unexpectedly");
  }
  return verdict(c,
                 "2: primitive conductor-2 twists of the worked example "
                 "vanish through t^5 (exact)");
}

// Criterion 3: the refined fan of the worked example.
int crit_fan() {
  Checker c;
  const auto poly = izeta::newton_polygon(example_poly());
  const auto refined =
      izeta::refine_to_simple(poly, izeta::conical_subdivision(poly));
  using Gen = std::vector<std::pair<int, int>>;
  std::set<Gen> got;
  for (const auto& cone : refined) {
    Gen g = cone.generators;
    std::sort(g.begin(), g.end());
    got.insert(g);
  }
  const std::set<Gen> want = {
      {{1, 0}},          {{0, 1}},          {{3, 2}},
      {{1, 1}},          {{2, 1}},          {{1, 0}, {2, 1}},
      {{2, 1}, {3, 2}},  {{1, 1}, {3, 2}},  {{0, 1}, {1, 1}}};
  c.check(refined.size() == 9, "refined fan does not have 9 cones");
  if (got != want) {
    c.check(false, "refined cone generator sets differ from the expected 9");
  }
  return verdict(c,
                 "3: simple-cone refinement of the worked example has the 9 "
                 "expected cones (exact generators)");
}

// Criterion 4: arithmetic-polygon data and candidate poles (exact).
int crit_arith() {
  Checker c;
  const auto g = izeta::candidate_poles_global(example_poly(), 5);
  c.check(g.arithmetic.size() == 1, "expected one non-monomial edge");
  if (g.arithmetic.size() == 1) {
    const auto& ed = g.arithmetic[0];
    c.check(ed.roots.roots.size() == 1, "expected one residue root");
    c.check(ed.polygons.size() == 1, "expected one arithmetic polygon");
    if (ed.polygons.size() == 1) {
      const auto& ap = ed.polygons[0];
      c.check(ap.d0 == 12, "base weighted degree is not 12");
      c.check(ap.theta == 1, "residue root is not 1");
      c.check(ap.segments.size() == 2, "expected two segments");
      if (ap.segments.size() == 2) {
        c.check(ap.segments[0].D == 12 && ap.segments[0].eps == 2,
                "first segment is not (D=12, eps=2)");
        c.check(ap.segments[1].D == 20 && ap.segments[1].eps == 0,
                "second segment is not (D=20, eps=0)");
      }
      c.check(ap.taus == std::vector<Rat>{Rat(4)},
              "vertex abscissas are not {4}");
      c.check(ap.envelope_at(Rat(0)) == Rat(0), "envelope(0) != 0");
      c.check(ap.envelope_at(Rat(2)) == Rat(4), "envelope(2) != 4");
      c.check(ap.envelope_at(Rat(4)) == Rat(8), "envelope(4) != 8");
      c.check(ap.envelope_at(Rat(6)) == Rat(8), "envelope(6) != 8");
    }
  }
  const std::vector<Rat> values = {Rat(-5, 12), Rat(-9, 20), Rat(-1, 2),
                                   Rat(-1)};
  c.check(g.poles.size() == values.size(),
          "candidate pole count is not 4");
  if (g.poles.size() == values.size()) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (g.poles[i].value != values[i]) {
        c.check(false, "pole " + std::to_string(i) + " is " +
                           rat_str(g.poles[i].value) + " not " +
                           rat_str(values[i]));
      }
    }
    auto has_formula = [&](std::size_t i, const std::string& fm) {
      for (const auto& o : g.poles[i].origins) {
        if (o.formula == fm) return true;
      }
      return false;
    };
    c.check(has_formula(0, "edge"), "-5/12 lacks an edge origin");
    c.check(has_formula(1, "vertex"), "-9/20 lacks a vertex origin");
    c.check(has_formula(2, "slope"), "-1/2 lacks a slope origin");
    c.check(has_formula(3, "constant"), "-1 lacks the constant origin");
  }
  c.check(g.beta.has_value() && *g.beta == Rat(-5, 12),
          "leading candidate is not -5/12");
  return verdict(c,
                 "4: arithmetic polygon, candidate poles, and leading "
                 "candidate of the worked example (exact)");
}

// Criterion 5: the cusp series fits its predicted denominator.
int crit_cusp_fit() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  const auto f = izeta::parse_poly("y^2-x^3");
  WalkOptions opt;
  opt.budget = 20'000'000'000ULL;
  const int K = 16;
  const auto table = izeta::measure_level_sets(f, 3, K, 1, opt);
  const auto series = trivial_series(table, K);
  const auto basis = izeta::fit_basis(f, 3);
  c.check(basis == std::vector<std::pair<long long, long long>>{{1, 1},
                                                                {5, 6}},
          "predicted factor set is not {(1,1),(5,6)}");
  const auto fit = izeta::fit_rational(series, 3, basis, 1);
  c.check(fit.consistent, "fit with both factors is inconsistent");
  const std::vector<Rat> want_num = {Rat(2, 3), Rat(-2, 27), Rat(2, 27),
                                     Rat(0),    Rat(0),      Rat(-2, 729)};
  if (fit.numerator != want_num) {
    std::ostringstream ss;
    ss << "numerator differs:";
    for (const auto& r : fit.numerator) ss << " " << r;
    c.check(false, ss.str());
  }
  // Dropping the curve factor must be detected, with the first failing
  // power at t^13.
  const auto weak = izeta::fit_rational(series, 3, {{1, 1}}, 1);
  c.check(!weak.consistent, "fit without (5,6) was not rejected");
  c.check(weak.first_violation == 13,
          "first violation is not at t^13 (got " +
              std::to_string(weak.first_violation) + ")");
  enforce_cap(c, seconds_since(start), 30.0);
  return verdict(c,
                 "5: cusp series (p=3, K=16) fits numerator/"
                 "((1-q^-1 t)(1-q^-5 t^6)) with the expected numerator");
}

// Criterion 6: exponential sums reconstructed from the series match the
// direct evaluation within the stated tail bound.
int crit_expsum() {
  Checker c;
  const auto start = std::chrono::steady_clock::now();
  WalkOptions opt;
  opt.budget = 2'000'000'000ULL;
  std::vector<izeta::LevelSetTable> tables;
  tables.push_back(izeta::measure_level_sets(example_poly(), 5, 6, 2, opt));
  for (int m : {1, 2, 3}) {
    for (long long u : {1LL, 2LL, 3LL, 4LL}) {
      const auto direct = izeta::exp_sum_direct(example_poly(), 5, m, u);
      const auto denef = izeta::exp_sum_denef(tables, 5, m, u);
      const double diff = std::abs(direct - denef.value);
      if (!(diff <= denef.error_bound + 1e-8)) {
        std::ostringstream ss;
        ss << "m=" << m << " u=" << u << ": |direct - series| = " << diff
           << " exceeds bound " << denef.error_bound;
        c.check(false, ss.str());
      }
    }
  }
  enforce_cap(c, seconds_since(start), 60.0);
  return verdict(c,
                 "6: reconstructed exponential sums match direct evaluation "
                 "for m=1..3, u=1..4 (within the tail bound)");
}

// Criterion 7: the series decomposes over residue cells: off-zero-set mass,
// a geometric ladder for each simple residue root, and one restricted walk
// per singular residue point.
int crit_cell_decomposition() {
  Checker c;
  const int K = 6;
  for (const char* text : {"y^2-x^3", "(y-x)^2+x^3", "x*y+x^3"}) {
    for (long long p : {3LL, 5LL}) {
      const auto f = izeta::parse_poly(text);
      WalkOptions opt;
      opt.budget = 500'000'000ULL;
      const auto full = izeta::measure_level_sets(f, p, K, 1, opt);
      const auto series = trivial_series(full, K);
      const auto spf = izeta::spf_data(f, p, Character(p, 1, 0));
      const auto nu = spf.nu.as_rational();
      if (!nu) {
        c.check(false, "off-zero density is not rational");
        continue;
      }
      std::vector<std::vector<Rat>> cells;
      for (const auto& [x, y] : spf.singular_points) {
        WalkOptions ropt;
        ropt.budget = 500'000'000ULL;
        ropt.restrict_root = true;
        ropt.root_x = x;
        ropt.root_y = y;
        ropt.root_depth = 1;
        const auto cell = izeta::measure_level_sets(f, p, K, 1, ropt);
        cells.push_back(trivial_series(cell, K));
      }
      for (int k = 0; k <= 5; ++k) {
        Rat want = (k == 0) ? *nu
                            : spf.sigma * (Rat(1) - Rat(1, p)) *
                                  Rat(1, izeta::pow_int(
                                             Int(p),
                                             static_cast<unsigned long>(k - 1)));
        for (const auto& cell : cells) {
          want += cell[static_cast<std::size_t>(k)];
        }
        if (series[static_cast<std::size_t>(k)] != want) {
          c.check(false, std::string(text) + " p=" + std::to_string(p) +
                             " A_" + std::to_string(k) + " = " +
                             rat_str(series[static_cast<std::size_t>(k)]) +
                             " but cells give " + rat_str(want));
        }
      }
    }
  }
  return verdict(c,
                 "7: series equals off-zero mass + simple-root ladder + "
                 "singular-cell walks (3 curves, p in {3,5}, exact)");
}

// Criterion 8: the one-variable integral formula against enumeration on
// random cells, hitting all three regimes.
int crit_onevar_random() {
  Checker c;
  std::mt19937 rng(12345);
  bool saw_inside = false, saw_spike = false, saw_zero = false;
  for (long long p : {3LL, 5LL}) {
    const auto chis = izeta::enumerate_characters(p, 2);
    for (int trial = 0; trial < 50; ++trial) {
      const long long a = static_cast<long long>(rng() % 200);
      const int e = static_cast<int>(rng() % 4);
      const int n = 1 + static_cast<int>(rng() % 3);
      const long long N = 1 + static_cast<long long>(rng() % 4);
      const auto& chi = chis[rng() % chis.size()];
      const int K = 2 + static_cast<int>(rng() % 5);
      const auto got = izeta::igusa_onevar_integral(Int(a), e, n, N, chi, K);
      const auto want = izeta_test::naive_onevar(Int(a), e, n, N, chi, K);
      bool ok = got.size() == want.size();
      if (ok) {
        for (std::size_t k = 0; k < got.size(); ++k) {
          if (!(got[k] == want[k])) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) {
        std::ostringstream ss;
        ss << "mismatch at p=" << p << " a=" << a << " e=" << e
           << " n=" << n << " N=" << N << " chi=(" << chi.level() << ","
           << chi.index() << ") K=" << K;
        c.check(false, ss.str());
      }
      const auto va = izeta::valuation_and_ac(Int(a), p, 1);
      const bool inside = !va.finite || va.v >= e;
      bool nonzero = false;
      for (const auto& g : got) nonzero = nonzero || !g.is_zero();
      if (inside) saw_inside = true;
      if (!inside && nonzero) saw_spike = true;
      if (!inside && !nonzero) saw_zero = true;
    }
  }
  c.check(saw_inside, "no trial hit the interior regime");
  c.check(saw_spike, "no trial hit the spike regime");
  c.check(saw_zero, "no trial hit the cancellation regime");
  return verdict(c,
                 "8: one-variable integral equals enumeration on 100 random "
                 "cells (p in {3,5}, all three regimes hit, exact)");
}

// Criterion 9: the level-set walker against full enumeration.
int crit_walker_vs_naive() {
  Checker c;
  for (const char* text :
       {"(y^3-x^2)^2+x^4*y^4", "y^2-x^3", "x*y+x^3", "x*y", "x^2+y^2",
        "2*x*y+3*y^2", "x+y+1", "x", "y^2"}) {
    const auto f = izeta::parse_poly(text);
    WalkOptions opt;
    const auto table = izeta::measure_level_sets(f, 3, 2, 2, opt);
    const auto naive = izeta_test::naive_level_sets(f, 3, 2, 2);
    if (table.mu != naive.mu) {
      c.check(false, std::string("level-set masses differ for ") + text);
    }
    if (table.tail_measure != naive.tail) {
      c.check(false, std::string("tail mass differs for ") + text);
    }
  }
  return verdict(c,
                 "9: walker equals full enumeration on the corpus "
                 "(p=3, K=2, c=2, exact)");
}

// Criterion 10: decay ratios of the worked example stay bounded.
int crit_decay() {
  Checker c;
  const auto rep = izeta::decay_report(example_poly(), 5, 5);
  c.check(rep.beta_from_poles, "decay exponent did not come from the poles");
  c.check(rep.beta == Rat(-5, 12), "decay exponent is not -5/12");
  c.check(rep.ratios.size() == 5, "expected ratios for m = 1..5");
  std::ostringstream ss;
  ss << "rho = " << rep.rho;
  c.check(rep.rho <= 2.0, ss.str() + " exceeds 2.0");
  return verdict(c,
                 "10: normalized decay ratios |E| / (m p^{beta m}) stay "
                 "within rho <= 2 through m = 5");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <1|1ci|1d|2|...|10>\n";
    return 64;
  }
  const std::string sel = argv[1];
  try {
    if (sel == "1") {
      return crit_display_match(
          8, 7'000'000'000ULL, 120.0,
          "1: measured series equals the closed-form display (q=5, K=8, "
          "exact)");
    }
    if (sel == "1ci") {
      return crit_display_match(
          6, 100'000'000ULL, 10.0,
          "1ci: measured series equals the closed-form display (q=5, K=6, "
          "exact)");
    }
    if (sel == "1d") return crit_display_corrected();
    if (sel == "2") return crit_conductor2();
    if (sel == "3") return crit_fan();
    if (sel == "4") return crit_arith();
    if (sel == "5") return crit_cusp_fit();
    if (sel == "6") return crit_expsum();
    if (sel == "7") return crit_cell_decomposition();
    if (sel == "8") return crit_onevar_random();
    if (sel == "9") return crit_walker_vs_naive();
    if (sel == "10") return crit_decay();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] criterion " << sel << ": exception: " << e.what()
              << std::endl;
    return 1;
  }
  std::cerr << "unknown selector " << sel << "\n";
  return 64;
}
