#pragma once
// Exponential-sum side: the standard additive character, direct evaluation
// of E(u p^{-m}, f) by full enumeration, Gauss sums, reconstruction of E
// from character-twisted series coefficients, and the decay diagnostic
// against the predicted exponent.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "izeta/arith.hpp"
#include "izeta/common.hpp"
#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "izeta/zeta.hpp"

namespace izeta {

// exp(2 pi i {r}) for rational r: the standard additive character of Q_p
// composed with the p-adic fractional part (here r already is the
// fractional-part representative).
inline std::complex<double> additive_char(const Rat& r) {
  Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  num %= den;
  if (num < 0) num += den;
  const double frac =
      num.convert_to<double>() / den.convert_to<double>();
  const double ang = 2.0 * 3.14159265358979323846 * frac;
  return {std::cos(ang), std::sin(ang)};
}

namespace detail {

// Kahan-compensated accumulator for one real component.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;
  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// E(u p^{-m}, f) = q^{-2m} sum over (x, y) mod p^m of
// exp(2 pi i u f(x, y) / p^m), evaluated by full enumeration in a fixed
// row-major order with compensated summation.
inline std::complex<double> exp_sum_direct(const BivariatePolynomial& f,
                                           long long p, int m, long long u,
                                           std::uint64_t budget =
                                               100'000'000ULL) {
  require_prime(p, "exp_sum_direct");
  if (m < 1) throw DomainError("exp_sum_direct: m must be >= 1");
  if (u % p == 0) throw DomainError("exp_sum_direct: u must be a unit");
  Int pmi = pow_int(Int(p), static_cast<unsigned long>(m));
  if (pmi > Int(1) << 31) {
    throw ResourceCapError("exp_sum_direct: modulus exceeds the fast range");
  }
  const std::uint64_t pm = pmi.convert_to<std::uint64_t>();
  if (pm * pm > budget) {
    throw ResourceCapError("exp_sum_direct: cell budget exceeded");
  }
  const std::uint64_t uu =
      static_cast<std::uint64_t>(((u % static_cast<long long>(pm)) +
                                  static_cast<long long>(pm)) %
                                 static_cast<long long>(pm));
  // Root-of-unity table: table[r] = exp(2 pi i r / p^m).
  std::vector<std::complex<double>> table(pm);
  const double step = 2.0 * 3.14159265358979323846 /
                      static_cast<double>(pm);
  for (std::uint64_t r = 0; r < pm; ++r) {
    const double ang = step * static_cast<double>(r);
    table[r] = {std::cos(ang), std::sin(ang)};
  }
  const detail::ReducedTerms rt = detail::ReducedTerms::build(f, pm);
  detail::Kahan re, im;
  for (std::uint64_t y = 0; y < pm; ++y) {
    for (std::uint64_t x = 0; x < pm; ++x) {
      const std::uint64_t w = rt.eval(x, y);
      const std::uint64_t r =
          static_cast<std::uint64_t>((static_cast<unsigned __int128>(w) * uu) %
                                     pm);
      re.add(table[r].real());
      im.add(table[r].imag());
    }
  }
  const double scale = 1.0 / std::pow(static_cast<double>(p), 2.0 * m);
  return {re.sum * scale, im.sum * scale};
}

// Normalized Gauss sum g_chi = (q-1)^{-1} q^{1-c} sum over units x mod p^c
// of chi(x) exp(2 pi i x / p^c), with c the conductor of chi.  For the
// trivial character the value is 1 by the empty-twist convention.
inline std::complex<double> gauss_sum(const Character& chi) {
  if (chi.is_trivial()) return {1.0, 0.0};
  const Character cn = chi.normalized();
  const long long p = cn.p();
  const int c = cn.level();
  const long long pc = static_cast<long long>(
      pow_int(Int(p), static_cast<unsigned long>(c)));
  std::complex<double> acc{0.0, 0.0};
  for (long long x = 1; x < pc; ++x) {
    if (x % p == 0) continue;
    acc += cn.eval(Int(x)) * additive_char(Rat(x, pc));
  }
  const double norm = (static_cast<double>(p) - 1.0) *
                      std::pow(static_cast<double>(p),
                               static_cast<double>(c - 1));
  return acc / norm;
}

// ---------------------------------------------------------------------------
// Reconstruction of E from series coefficients.
// ---------------------------------------------------------------------------

struct DenefResult {
  std::complex<double> value{0.0, 0.0};
  double error_bound = 0.0;
  bool assumes_vanishing = false;  // some character terms were unavailable
  std::vector<std::string> notes;
};

// E(u p^{-m}, f) from level-set tables:
//   E = Z(0) + [t^{m-1}] (t - q) Z_triv(t) / ((q-1)(1-t))
//       + sum over nontrivial chi of g_{chi^{-1}} chi(u) [t^{m-c(chi)}] Z_chi.
// Tables are keyed by their unit precision c; each character uses the
// smallest available c >= conductor(chi).  Characters whose conductor
// exceeds every available precision (but is still <= m) contribute zero
// with `assumes_vanishing` set.  The trivial-twist terms are exact up to
// the tail mass of the table used; the reported bound is
// tail * (1 + q / (q - 1)).
inline DenefResult exp_sum_denef(const std::vector<LevelSetTable>& tables,
                                 long long p, int m, long long u) {
  require_prime(p, "exp_sum_denef");
  if (m < 1) throw DomainError("exp_sum_denef: m must be >= 1");
  if (u % p == 0) throw DomainError("exp_sum_denef: u must be a unit");
  if (tables.empty()) throw DomainError("exp_sum_denef: no tables supplied");
  std::map<int, const LevelSetTable*> by_c;
  int c_max = 0;
  for (const LevelSetTable& t : tables) {
    if (t.p != p) throw DomainError("exp_sum_denef: table prime mismatch");
    auto it = by_c.find(t.c);
    if (it == by_c.end() || it->second->K < t.K) by_c[t.c] = &t;
    c_max = std::max(c_max, t.c);
  }
  // Trivial-twist terms use the deepest available table.
  const LevelSetTable* base = nullptr;
  for (const auto& [c, t] : by_c) {
    (void)c;
    if (base == nullptr || t->K > base->K) base = t;
  }
  if (base->K < m - 1) {
    throw DomainError("exp_sum_denef: table depth K is below m - 1");
  }
  DenefResult out;
  const double q = static_cast<double>(p);
  const Character triv(p, 1, 0);
  const ZetaSeries zs = zeta_series(*base, triv);
  // Z(0): total series mass; truncation error <= tail.
  Rat z0(0);
  std::vector<Rat> A(zs.coeffs.size(), Rat(0));
  for (std::size_t k = 0; k < zs.coeffs.size(); ++k) {
    const auto r = zs.coeffs[k].as_rational();
    if (!r) throw DomainError("exp_sum_denef: trivial series not rational");
    A[k] = *r;
    z0 += *r;
  }
  // [t^{m-1}] (t - q) Z / ((q-1)(1-t)) = (c_{m-2} - q c_{m-1}) / (q - 1)
  // with c_j the partial sums of A.
  auto partial = [&](int j) {
    Rat s(0);
    for (int k = 0; k <= j; ++k) s += A[static_cast<std::size_t>(k)];
    return s;
  };
  const Rat cm1 = partial(m - 1);
  const Rat cm2 = (m >= 2) ? partial(m - 2) : Rat(0);
  const Rat coeff_term = (cm2 - Rat(p) * cm1) / Rat(p - 1);
  double val_re = z0.convert_to<double>() + coeff_term.convert_to<double>();
  double val_im = 0.0;
  // Nontrivial characters with conductor <= m.
  for (int cc = 1; cc <= m; ++cc) {
    for (const Character& chi : enumerate_characters(p, cc)) {
      if (chi.level() != cc || chi.is_trivial()) continue;
      if (chi.conductor() != cc) continue;  // handled at its own conductor
      // Find a table with unit precision >= cc.
      const LevelSetTable* tab = nullptr;
      for (const auto& [c, t] : by_c) {
        if (c >= cc && (tab == nullptr || t->K > tab->K)) tab = t;
      }
      if (tab == nullptr) {
        out.assumes_vanishing = true;
        continue;
      }
      const int idx = m - cc;
      if (idx > tab->K) {
        throw DomainError("exp_sum_denef: table depth K is below m - c(chi)");
      }
      const ZetaSeries zc = zeta_series(*tab, chi);
      const std::complex<double> coef =
          zc.coeffs[static_cast<std::size_t>(idx)].to_complex();
      const std::complex<double> g = gauss_sum(chi.inverse());
      const std::complex<double> cu = chi.eval(Int(u));
      const std::complex<double> term = g * cu * coef;
      val_re += term.real();
      val_im += term.imag();
    }
  }
  if (out.assumes_vanishing) {
    out.notes.push_back(
        "characters above the available unit precision were assumed to "
        "contribute zero");
  }
  out.value = {val_re, val_im};
  out.error_bound =
      base->tail_measure.convert_to<double>() * (1.0 + q / (q - 1.0));
  return out;
}

// ---------------------------------------------------------------------------
// Decay diagnostic.
// ---------------------------------------------------------------------------

// Normalized peaks r_m = max_u |E(u p^{-m})| / (p^{beta m} m) for
// m = 1..m_max, and the drift ratio rho = r_{m_max} / r_1.  Bounded decay
// of the r_m (rho staying below a small slack) is the numerical signature
// of the predicted |E| <= C |z|^beta log |z| envelope.
struct DecayReport {
  Rat beta;
  bool beta_from_poles = true;
  std::vector<double> ratios;  // r_1..r_{m_max}
  double rho = 0.0;
  std::vector<std::string> notes;
};

inline DecayReport decay_report(const BivariatePolynomial& f, long long p,
                                int m_max,
                                std::uint64_t budget = 100'000'000ULL) {
  if (m_max < 1) throw DomainError("decay_report: m_max must be >= 1");
  DecayReport out;
  const GlobalPoleData g = candidate_poles_global(f, p);
  if (g.beta) {
    out.beta = *g.beta;
  } else {
    out.beta = Rat(-1);
    out.beta_from_poles = false;
    out.notes.push_back(
        "no candidate-pole exponent available; using beta = -1");
  }
  const double beta_d = out.beta.convert_to<double>();
  for (int m = 1; m <= m_max; ++m) {
    double peak = 0.0;
    for (long long u = 1; u < p; ++u) {
      const std::complex<double> e = exp_sum_direct(f, p, m, u, budget);
      peak = std::max(peak, std::abs(e));
    }
    const double denom =
        std::pow(static_cast<double>(p), beta_d * m) * static_cast<double>(m);
    out.ratios.push_back(peak / denom);
  }
  out.rho = (out.ratios.front() == 0.0)
                ? 0.0
                : out.ratios.back() / out.ratios.front();
  return out;
}

}  // namespace izeta
