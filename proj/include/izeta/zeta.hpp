#pragma once
// Power-series side: character-twisted series built from level-set tables,
// rational functions in t with factored denominators, closed-form reference
// displays for the worked example, denominator fitting, and the one-variable
// and residue-cell building blocks the series decompositions rest on.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "izeta/arith.hpp"
#include "izeta/common.hpp"
#include "izeta/geom.hpp"
#include "izeta/padic.hpp"
#include "izeta/poly.hpp"

namespace izeta {

// ---------------------------------------------------------------------------
// Character-twisted series.
// ---------------------------------------------------------------------------

// Coefficients A_k of the local series in t: A_k is the character-weighted
// mass of the valuation-k level set.
struct ZetaSeries {
  long long p = 0;
  int table_c = 1;
  long long chi_index = 0;
  int chi_level = 1;
  long long root_order = 1;
  std::vector<RootOfUnitySum> coeffs;  // A_0..A_K
  Rat tail_bound;                      // mass beyond t^K
};

inline ZetaSeries zeta_series(const LevelSetTable& table,
                              const Character& chi) {
  if (chi.p() != table.p) {
    throw DomainError("zeta_series: character prime differs from table");
  }
  if (chi.level() > table.c) {
    throw DomainError(
        "zeta_series: character level exceeds the table's unit precision");
  }
  ZetaSeries out;
  out.p = table.p;
  out.table_c = table.c;
  out.chi_index = chi.index();
  out.chi_level = chi.level();
  out.root_order = chi.group_order();
  out.tail_bound = table.tail_measure;
  out.coeffs.assign(static_cast<std::size_t>(table.K + 1),
                    RootOfUnitySum(out.root_order));
  const std::size_t pc = table.mu.empty() ? 0 : table.mu.front().size();
  for (int k = 0; k <= table.K; ++k) {
    for (std::size_t u = 1; u < pc; ++u) {
      const Rat& m = table.mu[static_cast<std::size_t>(k)][u];
      if (m == 0) continue;
      out.coeffs[static_cast<std::size_t>(k)] += RootOfUnitySum::monomial(
          out.root_order, chi.eval_exponent(static_cast<long long>(u)), m);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rational functions of t with factored denominators.
// ---------------------------------------------------------------------------

// One denominator factor (1 - q^{-A} t^B)^mult.
struct DenFactor {
  long long A = 1;
  long long B = 1;
  int mult = 1;
};

struct RationalFunctionT {
  long long q = 0;
  std::vector<Rat> numerator;  // dense in t
  std::vector<DenFactor> denominator;
};

// Taylor coefficients 0..K of the rational function (exact).
inline std::vector<Rat> series_of_rational(const RationalFunctionT& rf,
                                           int K) {
  std::vector<Rat> acc(static_cast<std::size_t>(K + 1), Rat(0));
  for (std::size_t i = 0; i < rf.numerator.size() &&
                          i <= static_cast<std::size_t>(K);
       ++i) {
    acc[i] = rf.numerator[i];
  }
  for (const DenFactor& fac : rf.denominator) {
    const Rat r = Rat(1, pow_int(Int(rf.q),
                                 static_cast<unsigned long>(fac.A)));
    for (int rep = 0; rep < fac.mult; ++rep) {
      // Multiply by the geometric series of 1 / (1 - r t^B) in place.
      for (std::size_t k = static_cast<std::size_t>(fac.B);
           k <= static_cast<std::size_t>(K); ++k) {
        acc[k] += r * acc[k - static_cast<std::size_t>(fac.B)];
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Closed-form reference displays for the worked example
// f = (y^3 - x^2)^2 + x^4 y^4.
// ---------------------------------------------------------------------------

// The per-character closed forms, combined over a common denominator.  The
// parameters N and T are the unit-square counts entering the trivial-twist
// display; `scale` multiplies the whole form (used for the weighted order-12
// term).  Valid names: "triv", "chi2", "chi4", "chi6", "chi12", "chi20".
inline RationalFunctionT golden_example_forms(long long q,
                                              const std::string& which,
                                              const Rat& N, const Rat& T,
                                              const Rat& scale = Rat(1)) {
  const Rat Q(1, q);
  const Rat c1 = Rat(1) - Q;
  auto Qp = [&](int e) { return Rat(1, pow_int(Int(q), static_cast<unsigned long>(e))); };
  using Fac = std::vector<std::pair<long long, long long>>;
  std::vector<std::tuple<Rat, int, Fac>> terms;
  if (which == "triv") {
    terms = {
        {Rat(2) * Q * c1, 0, {}},
        {c1 * Qp(2), 4, {{2, 4}}},
        {c1 * c1 * Qp(7), 16, {{2, 4}, {5, 12}}},
        {c1 * c1 * Qp(8), 18, {{3, 6}, {5, 12}}},
        {c1 * Qp(3), 6, {{3, 6}}},
        {c1 * c1 * Qp(6), 14, {{1, 2}, {5, 12}}},
        {-c1 * c1 * Qp(9), 20, {{1, 2}, {9, 20}}},
        {Rat(q - 2) * c1 * Qp(6), 12, {{5, 12}}},
        {c1 * Qp(10), 20, {{9, 20}}},
        {N * Qp(11), 21, {{1, 1}, {9, 20}}},
        {-N * Qp(11), 20, {{1, 1}, {9, 20}}},
        {c1 * c1 * Qp(9), 20, {{9, 20}}},
        {-T * Qp(11), 20, {{9, 20}}},
    };
  } else if (which == "chi2") {
    terms = {
        {c1 * c1 * Qp(6), 14, {{1, 2}, {5, 12}}},
        {-c1 * c1 * Qp(9), 20, {{1, 2}, {9, 20}}},
    };
  } else if (which == "chi4") {
    terms = {
        {Q * c1, 0, {}},
        {c1 * Qp(3), 4, {{2, 4}}},
        {c1 * c1 * Qp(2), 4, {{2, 4}}},
        {c1 * c1 * Qp(7), 16, {{2, 4}, {5, 12}}},
    };
  } else if (which == "chi6") {
    terms = {
        {c1 * c1 * Qp(8), 18, {{3, 6}, {5, 12}}},
        {c1 * c1 * Qp(3), 6, {{3, 6}}},
        {c1 * Qp(4), 6, {{3, 6}}},
        {Q * c1, 0, {}},
    };
  } else if (which == "chi12") {
    terms = {
        {c1 * Qp(6), 12, {{5, 12}}},
    };
  } else if (which == "chi20") {
    terms = {
        {c1 * Qp(10), 20, {{9, 20}}},
    };
  } else {
    throw DomainError("golden_example_forms: unknown case name");
  }

  // Union of factors over all terms (each appears once per term).
  std::vector<std::pair<long long, long long>> common;
  for (const auto& [coef, tpow, facs] : terms) {
    (void)coef;
    (void)tpow;
    for (const auto& f : facs) {
      if (std::find(common.begin(), common.end(), f) == common.end()) {
        common.push_back(f);
      }
    }
  }
  std::sort(common.begin(), common.end());

  // Numerator: sum of coef * t^{tpow} * prod of the missing factors.
  std::vector<Rat> num(1, Rat(0));
  auto mul_factor = [&](std::vector<Rat> poly, long long A, long long B) {
    std::vector<Rat> out(poly.size() + static_cast<std::size_t>(B), Rat(0));
    const Rat r = Rat(1, pow_int(Int(q), static_cast<unsigned long>(A)));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      out[i] += poly[i];
      out[i + static_cast<std::size_t>(B)] -= r * poly[i];
    }
    return out;
  };
  for (const auto& [coef, tpow, facs] : terms) {
    std::vector<Rat> piece(static_cast<std::size_t>(tpow + 1), Rat(0));
    piece[static_cast<std::size_t>(tpow)] = coef * scale;
    for (const auto& f : common) {
      if (std::find(facs.begin(), facs.end(), f) == facs.end()) {
        piece = mul_factor(std::move(piece), f.first, f.second);
      }
    }
    if (piece.size() > num.size()) num.resize(piece.size(), Rat(0));
    for (std::size_t i = 0; i < piece.size(); ++i) num[i] += piece[i];
  }
  while (num.size() > 1 && num.back() == 0) num.pop_back();

  RationalFunctionT rf;
  rf.q = q;
  rf.numerator = std::move(num);
  for (const auto& f : common) rf.denominator.push_back({f.first, f.second, 1});
  return rf;
}

// ---------------------------------------------------------------------------
// Denominator fitting.
// ---------------------------------------------------------------------------

struct FitOutcome {
  bool consistent = false;
  int first_violation = -1;  // t-power of the first failed check
  std::vector<Rat> numerator;
  std::vector<DenFactor> denominator;  // multiplicities after cancellation
  int numerator_degree_bound = 0;
  std::vector<std::string> notes;
};

// Fits series = numerator / prod (1 - q^{-A} t^B)^{m_max} with a numerator
// of degree <= degN, then verifies the remaining coefficients exactly and
// cancels denominator factors that divide the numerator.  degN < 0 selects
// the default K - 3 - deg(denominator), which leaves deg(denominator) + 3
// verification equations.
inline FitOutcome fit_rational(
    const std::vector<Rat>& series, long long q,
    const std::vector<std::pair<long long, long long>>& basis, int m_max = 2,
    int degN = -1) {
  if (series.empty()) throw DomainError("fit_rational: empty series");
  if (m_max < 1) throw DomainError("fit_rational: m_max must be >= 1");
  const int K = static_cast<int>(series.size()) - 1;

  std::vector<std::pair<long long, long long>> fs;
  for (const auto& f : basis) {
    if (f.first < 1 || f.second < 1) {
      throw DomainError("fit_rational: basis pairs must be positive");
    }
    if (std::find(fs.begin(), fs.end(), f) == fs.end()) fs.push_back(f);
  }
  long long degD = 0;
  for (const auto& f : fs) degD += static_cast<long long>(m_max) * f.second;
  if (degN < 0) degN = K - 3 - static_cast<int>(degD);
  if (degN < 0 || degN + static_cast<int>(degD) > K) {
    throw DomainError(
        "fit_rational: series too short for the requested denominator");
  }

  // Dense denominator.
  std::vector<Rat> den(1, Rat(1));
  for (const auto& f : fs) {
    const Rat r = Rat(1, pow_int(Int(q), static_cast<unsigned long>(f.first)));
    for (int rep = 0; rep < m_max; ++rep) {
      std::vector<Rat> nd(den.size() + static_cast<std::size_t>(f.second),
                          Rat(0));
      for (std::size_t i = 0; i < den.size(); ++i) {
        nd[i] += den[i];
        nd[i + static_cast<std::size_t>(f.second)] -= r * den[i];
      }
      den = std::move(nd);
    }
  }

  // Numerator by convolution; verification beyond degN.
  FitOutcome out;
  out.numerator_degree_bound = degN;
  std::vector<Rat> num(static_cast<std::size_t>(K + 1), Rat(0));
  for (int k = 0; k <= K; ++k) {
    Rat acc(0);
    for (std::size_t i = 0; i < den.size() && i <= static_cast<std::size_t>(k);
         ++i) {
      acc += den[i] * series[static_cast<std::size_t>(k) - i];
    }
    num[static_cast<std::size_t>(k)] = acc;
  }
  for (int k = degN + 1; k <= K; ++k) {
    if (num[static_cast<std::size_t>(k)] != 0) {
      out.consistent = false;
      out.first_violation = k;
      out.notes.push_back(
          "convolution coefficient beyond the numerator degree bound is "
          "nonzero");
      return out;
    }
  }
  out.consistent = true;
  num.resize(static_cast<std::size_t>(degN + 1));
  while (num.size() > 1 && num.back() == 0) num.pop_back();

  // Cancellation: divide the numerator by factors that divide it exactly.
  std::vector<DenFactor> kept;
  for (const auto& f : fs) kept.push_back({f.first, f.second, m_max});
  const bool num_zero =
      (num.size() == 1 && num[0] == 0);
  if (num_zero) {
    out.notes.push_back("numerator is zero; denominator cleared");
    kept.clear();
  } else {
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& f : kept) {
        if (f.mult == 0) continue;
        if (num.size() <= static_cast<std::size_t>(f.B)) continue;
        const Rat r =
            Rat(1, pow_int(Int(q), static_cast<unsigned long>(f.A)));
        // Candidate quotient of num / (1 - r t^B), low-order first.
        std::vector<Rat> quot(num.size(), Rat(0));
        for (std::size_t i = 0; i < num.size(); ++i) {
          quot[i] = num[i];
          if (i >= static_cast<std::size_t>(f.B)) {
            quot[i] += r * quot[i - static_cast<std::size_t>(f.B)];
          }
        }
        bool exact = true;
        for (std::size_t i = num.size() - static_cast<std::size_t>(f.B);
             i < quot.size(); ++i) {
          if (quot[i] != 0) {
            exact = false;
            break;
          }
        }
        if (exact) {
          quot.resize(num.size() - static_cast<std::size_t>(f.B));
          num = std::move(quot);
          f.mult -= 1;
          progress = true;
        }
      }
    }
    kept.erase(std::remove_if(kept.begin(), kept.end(),
                              [](const DenFactor& f) { return f.mult == 0; }),
               kept.end());
  }
  out.numerator = std::move(num);
  out.denominator = std::move(kept);
  return out;
}

// Core factor basis for fitting the series of f at p: the constant pair
// plus every pair produced by a candidate-pole origin.
inline std::vector<std::pair<long long, long long>> fit_basis(
    const BivariatePolynomial& f, long long p) {
  std::set<std::pair<long long, long long>> s;
  s.insert({1, 1});
  const GlobalPoleData g = candidate_poles_global(f, p);
  for (const CandidatePole& cp : g.poles) {
    for (const CandidatePole::Origin& o : cp.origins) {
      if (o.A >= 1 && o.B >= 1) s.insert({o.A, o.B});
    }
  }
  return {s.begin(), s.end()};
}

// Extended basis: the core pairs plus one pair (a1 + a2, m(a)) per ray of
// the refined fan whose minimal weighted degree m(a) is nonzero.  These
// monomial-cone factors can occur in an unreduced denominator even when the
// corresponding pole cancels.
inline std::vector<std::pair<long long, long long>> fit_basis_extended(
    const BivariatePolynomial& f, long long p) {
  const auto core = fit_basis(f, p);
  std::set<std::pair<long long, long long>> s(core.begin(), core.end());
  const GeomNewtonPolygon poly = newton_polygon(f);
  const std::vector<Cone> refined =
      refine_to_simple(poly, conical_subdivision(poly));
  for (const auto& ray : fan_rays(refined)) {
    const long long m = m_value(poly, ray.first, ray.second);
    if (m != 0) {
      s.insert({static_cast<long long>(ray.first) + ray.second, m});
    }
  }
  return {s.begin(), s.end()};
}

// ---------------------------------------------------------------------------
// One-variable building block.
// ---------------------------------------------------------------------------

// t-series (coefficients 0..K) of the one-variable integral
//   int_{a + p^e Zp} chi(ac x)^N |x|^{s N + n - 1} dx,
// with t = q^{-s}.  Three regimes: the base point inside the cell (geometric
// ladder, requires chi^N trivial), outside with chi^N trivial on the
// matching unit ball (single spike), otherwise zero by cancellation.
inline std::vector<RootOfUnitySum> igusa_onevar_integral(
    const Int& a, int e, int n, long long N, const Character& chi, int K) {
  if (e < 0) throw DomainError("igusa_onevar_integral: e must be >= 0");
  if (n < 1) throw DomainError("igusa_onevar_integral: n must be >= 1");
  if (N < 1) throw DomainError("igusa_onevar_integral: N must be >= 1");
  if (K < 0) throw DomainError("igusa_onevar_integral: K must be >= 0");
  const long long p = chi.p();
  const long long M = chi.group_order();
  std::vector<RootOfUnitySum> out(static_cast<std::size_t>(K + 1),
                                  RootOfUnitySum(M));
  const ValuationAc va = valuation_and_ac(a, p, chi.level());
  const bool inside = !va.finite || va.v >= e;
  if (inside) {
    if (!chi.power_is_trivial(N)) return out;  // full cancellation
    for (long long j = 0;; ++j) {
      const long long tp = (e + j) * N;
      if (tp > K) break;
      const Rat coef =
          (Rat(1) - Rat(1, p)) *
          Rat(1, pow_int(Int(p), static_cast<unsigned long>((e + j) * n)));
      out[static_cast<std::size_t>(tp)] +=
          RootOfUnitySum::monomial(M, 0, coef);
    }
    return out;
  }
  const Character chiN = chi.power(N);
  if (chiN.conductor() <= e - va.v) {
    const long long tp = va.v * N;
    if (tp <= K) {
      const Rat coef = Rat(
          1, pow_int(Int(p),
                     static_cast<unsigned long>(e + va.v * (n - 1))));
      out[static_cast<std::size_t>(tp)] += RootOfUnitySum::monomial(
          M, chiN.eval_exponent(va.ac), coef);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unit-square display.
// ---------------------------------------------------------------------------

// Data of the torus sum  sum_{(x0,y0) in (F_q^x)^2} int_{Zp} chi(ac(h + p z))
// |h + p z|^s dz:  a geometric ladder weighted by the torus zero count for
// the trivial twist, the exact torus character sum for conductor one, and
// zero beyond.
struct UnitSquareData {
  long long p = 0;
  long long torus_zero_count = 0;
  int chi_conductor = 1;
  bool chi_trivial = true;
  std::vector<RootOfUnitySum> series;  // display coefficients 0..K
  RootOfUnitySum char_sum;             // sum of chi over nonzero torus values
};

inline UnitSquareData unit_square_data(const BivariatePolynomial& h,
                                       const Character& chi, int K) {
  const long long p = chi.p();
  const long long M = chi.group_order();
  UnitSquareData out;
  out.p = p;
  out.chi_trivial = chi.is_trivial();
  out.chi_conductor = chi.conductor();
  out.char_sum = RootOfUnitySum(M);
  out.series.assign(static_cast<std::size_t>(K + 1), RootOfUnitySum(M));
  const BivariatePolynomial hb = reduce_mod_p(h, p);
  long long zeros = 0;
  for (long long x = 1; x < p; ++x) {
    for (long long y = 1; y < p; ++y) {
      const std::uint64_t hv = hb.eval_mod(
          static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y),
          static_cast<std::uint64_t>(p));
      if (hv == 0) {
        ++zeros;
      } else if (out.chi_conductor <= 1) {
        out.char_sum += RootOfUnitySum::monomial(
            M, chi.eval_exponent(static_cast<long long>(hv)), Rat(1));
      }
    }
  }
  out.torus_zero_count = zeros;
  if (out.chi_trivial) {
    out.series[0] = RootOfUnitySum::monomial(
        M, 0, Rat((p - 1) * (p - 1) - zeros));
    for (int k = 1; k <= K; ++k) {
      const Rat coef =
          Rat(zeros) * (Rat(1) - Rat(1, p)) *
          Rat(1, pow_int(Int(p), static_cast<unsigned long>(k - 1)));
      out.series[static_cast<std::size_t>(k)] =
          RootOfUnitySum::monomial(M, 0, coef);
    }
  } else if (out.chi_conductor == 1) {
    out.series[0] = out.char_sum;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stationary-phase data over the full unit square.
// ---------------------------------------------------------------------------

// Residue-level decomposition data: the character-weighted density of the
// off-zero-set units (nu), the density of simple residue roots (sigma,
// trivial twist only), and the singular residue points whose cells carry
// the remaining mass.
struct SpfData {
  long long p = 0;
  RootOfUnitySum nu;
  Rat sigma;
  std::vector<std::pair<long long, long long>> singular_points;
  long long residue_nonzero_count = 0;
  long long simple_root_count = 0;
};

inline SpfData spf_data(const BivariatePolynomial& f, long long p,
                        const Character& chi) {
  if (chi.p() != p) throw DomainError("spf_data: character prime mismatch");
  SpfData out;
  out.p = p;
  const long long M = chi.group_order();
  out.nu = RootOfUnitySum(M);
  out.sigma = Rat(0);
  const BivariatePolynomial fb = reduce_mod_p(f, p);
  const auto [gx, gy] = fb.grad();
  for (long long x = 0; x < p; ++x) {
    for (long long y = 0; y < p; ++y) {
      const std::uint64_t fv = fb.eval_mod(
          static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y),
          static_cast<std::uint64_t>(p));
      if (fv != 0) {
        ++out.residue_nonzero_count;
        continue;
      }
      const bool singular =
          gx.eval_mod(static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y),
                      static_cast<std::uint64_t>(p)) == 0 &&
          gy.eval_mod(static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y),
                      static_cast<std::uint64_t>(p)) == 0;
      if (singular) {
        out.singular_points.push_back({x, y});
      } else {
        ++out.simple_root_count;
      }
    }
  }
  if (chi.is_trivial()) {
    out.nu = RootOfUnitySum::monomial(
        M, 0, Rat(out.residue_nonzero_count, p * p));
    out.sigma = Rat(out.simple_root_count, p * p);
    return out;
  }
  // Nontrivial twist: nu averages chi over residues mod p^{conductor} whose
  // reduction avoids the zero set; sigma vanishes by unit-ball cancellation.
  const Character chiN = chi.normalized();
  const int cx = chiN.level();
  const long long pcx = static_cast<long long>(
      pow_int(Int(p), static_cast<unsigned long>(cx)));
  const long long order_ratio = M / chiN.group_order();
  const Rat w = Rat(1, pow_int(Int(p), 2 * static_cast<unsigned long>(cx)));
  for (long long x = 0; x < pcx; ++x) {
    for (long long y = 0; y < pcx; ++y) {
      if (fb.eval_mod(static_cast<std::uint64_t>(x % p),
                      static_cast<std::uint64_t>(y % p),
                      static_cast<std::uint64_t>(p)) == 0) {
        continue;
      }
      const Int val = f.eval(Int(x), Int(y));
      const long long e = chiN.eval_exponent(val) * order_ratio % M;
      out.nu += RootOfUnitySum::monomial(M, e, w);
    }
  }
  return out;
}

}  // namespace izeta
