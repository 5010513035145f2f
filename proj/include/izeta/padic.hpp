#pragma once
// p-adic level-set data of a bivariate polynomial over the unit square of
// p-adic pairs: exact tables of Haar measures of the sets
// { (x, y) : val(f) = k, angular component = u (mod p^c) },
// computed by refining residue cells digit by digit.  Also provides
// valuation/angular-component extraction, multiplicative characters of the
// unit group mod p^c with exact root-of-unity bookkeeping, and cyclotomic
// canonical forms for character sums.

#include <algorithm>
#include <array>
#include <atomic>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "izeta/common.hpp"
#include "izeta/poly.hpp"

namespace izeta {

// ---------------------------------------------------------------------------
// Valuation and angular component of an integer.
// ---------------------------------------------------------------------------

struct ValuationAc {
  bool finite = true;  // false for n = 0 (infinite valuation)
  long long v = 0;
  long long ac = 0;  // unit part mod p^c, in [0, p^c)
};

inline ValuationAc valuation_and_ac(const Int& n, long long p, int c) {
  require_prime(p, "valuation_and_ac");
  if (c < 1) throw DomainError("valuation_and_ac: c must be >= 1");
  if (n == 0) return {false, -1, 0};
  Int m = n;
  long long v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  const Int pc = pow_int(Int(p), static_cast<unsigned long>(c));
  Int u = m % pc;
  if (u < 0) u += pc;
  return {true, v, static_cast<long long>(u)};
}

// Unit residues mod p^c in increasing order.
inline std::vector<long long> units_mod(long long p, int c) {
  const long long pc =
      static_cast<long long>(pow_u64(static_cast<std::uint64_t>(p),
                                     static_cast<unsigned>(c)));
  std::vector<long long> out;
  out.reserve(static_cast<std::size_t>(unit_group_order(p, c)));
  for (long long u = 1; u < pc; ++u) {
    if (u % p != 0) out.push_back(u);
  }
  if (pc == 2) out.assign({1});
  return out;
}

// ---------------------------------------------------------------------------
// Exact elements of Z[zeta_M] with rational coefficients.
// ---------------------------------------------------------------------------

namespace detail {

// Exact division of integer polynomials (divisor monic).  Coefficient
// vectors are dense, index = exponent.
inline std::vector<Int> exact_poly_div(std::vector<Int> num,
                                       const std::vector<Int>& den) {
  const std::size_t d = den.size() - 1;
  if (num.size() < den.size()) {
    throw DomainError("exact_poly_div: degree underflow");
  }
  std::vector<Int> quot(num.size() - d, 0);
  for (std::size_t i = quot.size(); i-- > 0;) {
    const Int q = num[i + d];
    quot[i] = q;
    if (q == 0) continue;
    for (std::size_t j = 0; j <= d; ++j) num[i + j] -= q * den[j];
  }
  for (const Int& r : num) {
    if (r != 0) throw DomainError("exact_poly_div: nonzero remainder");
  }
  return quot;
}

// M-th cyclotomic polynomial, dense integer coefficients, memoised.
inline const std::vector<Int>& cyclotomic(long long M) {
  static std::map<long long, std::vector<Int>> cache;
  static std::recursive_mutex mu;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(M);
  if (it != cache.end()) return it->second;
  std::vector<Int> poly(static_cast<std::size_t>(M + 1), 0);
  poly[0] = -1;
  poly[static_cast<std::size_t>(M)] = 1;  // x^M - 1
  for (long long d = 1; d < M; ++d) {
    if (M % d == 0) poly = exact_poly_div(std::move(poly), cyclotomic(d));
  }
  return cache.emplace(M, std::move(poly)).first->second;
}

}  // namespace detail

// A rational linear combination of the M-th roots of unity, stored on the
// exponent basis zeta^0..zeta^{M-1}.  Equality and the zero test reduce to
// the canonical basis 1, zeta, ..., zeta^{phi(M)-1} (remainder modulo the
// M-th cyclotomic polynomial), so they are exact.
class RootOfUnitySum {
 public:
  explicit RootOfUnitySum(long long order = 1)
      : order_(order), coef_(static_cast<std::size_t>(order), Rat(0)) {
    if (order < 1) throw DomainError("RootOfUnitySum: order must be >= 1");
  }

  static RootOfUnitySum monomial(long long order, long long exponent,
                                 const Rat& coeff) {
    RootOfUnitySum s(order);
    long long e = exponent % order;
    if (e < 0) e += order;
    s.coef_[static_cast<std::size_t>(e)] = coeff;
    return s;
  }

  long long order() const { return order_; }
  const std::vector<Rat>& coefficients() const { return coef_; }

  RootOfUnitySum& operator+=(const RootOfUnitySum& o) {
    check_order(o);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] += o.coef_[i];
    return *this;
  }
  RootOfUnitySum& operator-=(const RootOfUnitySum& o) {
    check_order(o);
    for (std::size_t i = 0; i < coef_.size(); ++i) coef_[i] -= o.coef_[i];
    return *this;
  }
  RootOfUnitySum& operator*=(const Rat& r) {
    for (Rat& c : coef_) c *= r;
    return *this;
  }
  friend RootOfUnitySum operator+(RootOfUnitySum a, const RootOfUnitySum& b) {
    a += b;
    return a;
  }
  friend RootOfUnitySum operator-(RootOfUnitySum a, const RootOfUnitySum& b) {
    a -= b;
    return a;
  }
  friend RootOfUnitySum operator*(RootOfUnitySum a, const Rat& r) {
    a *= r;
    return a;
  }
  friend RootOfUnitySum operator*(const Rat& r, RootOfUnitySum a) {
    a *= r;
    return a;
  }

  // Product in Z[zeta_M]: cyclic convolution of exponent coefficients.
  friend RootOfUnitySum operator*(const RootOfUnitySum& a,
                                  const RootOfUnitySum& b) {
    a.check_order(b);
    RootOfUnitySum out(a.order_);
    for (std::size_t i = 0; i < a.coef_.size(); ++i) {
      if (a.coef_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coef_.size(); ++j) {
        if (b.coef_[j] == 0) continue;
        std::size_t k = i + j;
        if (k >= static_cast<std::size_t>(a.order_)) {
          k -= static_cast<std::size_t>(a.order_);
        }
        out.coef_[k] += a.coef_[i] * b.coef_[j];
      }
    }
    return out;
  }

  // Multiplication by zeta^e.
  RootOfUnitySum shifted(long long e) const {
    RootOfUnitySum out(order_);
    long long s = e % order_;
    if (s < 0) s += order_;
    for (std::size_t i = 0; i < coef_.size(); ++i) {
      std::size_t k = i + static_cast<std::size_t>(s);
      if (k >= coef_.size()) k -= coef_.size();
      out.coef_[k] = coef_[i];
    }
    return out;
  }

  // Coefficients on the canonical basis 1..zeta^{phi(M)-1}.
  std::vector<Rat> canonical() const {
    const std::vector<Int>& phi = detail::cyclotomic(order_);
    const std::size_t deg = phi.size() - 1;
    std::vector<Rat> work = coef_;
    for (std::size_t i = work.size(); i-- > deg;) {
      const Rat c = work[i];
      if (c == 0) continue;
      work[i] = 0;
      for (std::size_t j = 0; j < deg; ++j) {
        work[i - deg + j] -= c * Rat(phi[j]);
      }
    }
    work.resize(deg);
    return work;
  }

  bool is_zero() const {
    for (const Rat& c : canonical()) {
      if (c != 0) return false;
    }
    return true;
  }

  bool operator==(const RootOfUnitySum& o) const {
    check_order(o);
    return (*this - o).is_zero();
  }
  bool operator!=(const RootOfUnitySum& o) const { return !(*this == o); }

  // The value as a rational number, when it is one.
  std::optional<Rat> as_rational() const {
    std::vector<Rat> canon = canonical();
    for (std::size_t i = 1; i < canon.size(); ++i) {
      if (canon[i] != 0) return std::nullopt;
    }
    return canon.empty() ? Rat(0) : canon[0];
  }

  std::complex<double> to_complex() const {
    static const double kTau = 6.283185307179586476925286766559;
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t e = 0; e < coef_.size(); ++e) {
      if (coef_[e] == 0) continue;
      const double x = static_cast<double>(coef_[e]);
      const double ang = kTau * static_cast<double>(e) /
                         static_cast<double>(order_);
      acc += std::complex<double>(x * std::cos(ang), x * std::sin(ang));
    }
    return acc;
  }

 private:
  void check_order(const RootOfUnitySum& o) const {
    if (order_ != o.order_) {
      throw DomainError("RootOfUnitySum: mixed root orders");
    }
  }

  long long order_;
  std::vector<Rat> coef_;
};

// ---------------------------------------------------------------------------
// Multiplicative characters of (Z/p^c)^x.
// ---------------------------------------------------------------------------

namespace detail {

struct UnitGroupTable {
  long long p = 0;
  int c = 1;
  long long pc = 0;        // p^c
  long long phi = 0;       // group order
  long long g = 1;         // fixed generator: smallest one
  std::vector<long long> dlog;  // size pc; -1 on non-units
};

inline long long powmod_ll(long long b, long long e, long long m) {
  long long r = 1 % m;
  long long x = b % m;
  while (e > 0) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return r;
}

inline std::shared_ptr<const UnitGroupTable> unit_group_table(long long p,
                                                              int c) {
  static std::map<std::pair<long long, int>,
                  std::shared_ptr<const UnitGroupTable>>
      cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, c);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  if (p == 2 && c >= 3) {
    throw DomainError(
        "characters mod 2^c: unit group is not cyclic for c >= 3");
  }
  auto tab = std::make_shared<UnitGroupTable>();
  tab->p = p;
  tab->c = c;
  Int pc_big = pow_int(Int(p), static_cast<unsigned long>(c));
  if (pc_big > 50'000'000) {
    throw DomainError("characters: modulus p^c exceeds the table cap");
  }
  tab->pc = static_cast<long long>(pc_big);
  tab->phi = unit_group_order(p, c);

  // Smallest generator: order phi checked against the prime factors of phi.
  std::vector<long long> factors;
  {
    long long n = tab->phi;
    for (long long q = 2; q * q <= n; ++q) {
      if (n % q == 0) {
        factors.push_back(q);
        while (n % q == 0) n /= q;
      }
    }
    if (n > 1) factors.push_back(n);
  }
  long long g = 1;
  if (tab->phi > 1) {
    for (long long cand = 2; cand < tab->pc; ++cand) {
      if (cand % p == 0) continue;
      bool ok = true;
      for (long long q : factors) {
        if (powmod_ll(cand, tab->phi / q, tab->pc) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) {
        g = cand;
        break;
      }
    }
  }
  tab->g = g;
  tab->dlog.assign(static_cast<std::size_t>(tab->pc), -1);
  long long val = 1 % tab->pc;
  for (long long i = 0; i < tab->phi; ++i) {
    tab->dlog[static_cast<std::size_t>(val)] = i;
    val = val * g % tab->pc;
  }
  if (val != 1 % tab->pc) {
    throw DomainError("characters: generator search failed");
  }
  cache.emplace(key, tab);
  return tab;
}

}  // namespace detail

// A character of (Z/p^c)^x, stored as an index k with
// chi(g^j) = zeta_phi^{k j} for the fixed smallest generator g.
class Character {
 public:
  Character(long long p, int c, long long k)
      : tab_(detail::unit_group_table(p, c)) {
    require_prime(p, "Character");
    if (c < 1) throw DomainError("Character: c must be >= 1");
    k_ = k % tab_->phi;
    if (k_ < 0) k_ += tab_->phi;
  }

  long long p() const { return tab_->p; }
  int level() const { return tab_->c; }          // modulus exponent c
  long long index() const { return k_; }
  long long group_order() const { return tab_->phi; }
  long long generator() const { return tab_->g; }

  bool is_trivial() const { return k_ == 0; }

  // True when chi^j is the trivial character.
  bool power_is_trivial(long long j) const {
    const long long phi = tab_->phi;
    long long jj = j % phi;
    if (jj < 0) jj += phi;
    return static_cast<long long>(
               static_cast<unsigned long long>(k_) * jj % phi) == 0;
  }

  // Multiplicative order of chi.
  long long order() const { return tab_->phi / gcd_ll(tab_->phi, k_); }

  Character power(long long j) const {
    const long long phi = tab_->phi;
    long long jj = j % phi;
    if (jj < 0) jj += phi;
    return Character(tab_->p, tab_->c,
                     static_cast<long long>(
                         static_cast<unsigned long long>(k_) * jj % phi));
  }

  Character inverse() const { return power(tab_->phi - 1); }

  // Exponent e with chi(u) = zeta_phi^e, for a unit u; throws on non-units.
  long long eval_exponent(long long u) const {
    long long r = u % tab_->pc;
    if (r < 0) r += tab_->pc;
    const long long d = (r < tab_->pc)
                            ? tab_->dlog[static_cast<std::size_t>(r)]
                            : -1;
    if (d < 0) {
      throw DomainError("Character: evaluated at a non-unit");
    }
    return static_cast<long long>(
        static_cast<unsigned long long>(k_) * d % tab_->phi);
  }
  long long eval_exponent(const Int& u) const {
    Int r = u % tab_->pc;
    if (r < 0) r += tab_->pc;
    return eval_exponent(static_cast<long long>(r));
  }

  RootOfUnitySum eval_exact(long long u) const {
    return RootOfUnitySum::monomial(tab_->phi, eval_exponent(u), Rat(1));
  }

  std::complex<double> eval(const Int& u) const {
    static const double kTau = 6.283185307179586476925286766559;
    const double ang = kTau * static_cast<double>(eval_exponent(u)) /
                       static_cast<double>(tab_->phi);
    return {std::cos(ang), std::sin(ang)};
  }

  // Minimal level: the character is re-expressed modulo p^{c'} for the
  // smallest c' on which it is defined.  The descent criterion at level
  // c >= 2 is p | k; each step converts the index through the lower level's
  // generator.  Every character mod p has conductor 1 here, including the
  // trivial one.
  Character normalized() const {
    Character cur = *this;
    while (cur.tab_->c >= 2 && cur.k_ % cur.tab_->p == 0) {
      auto lower = detail::unit_group_table(cur.tab_->p, cur.tab_->c - 1);
      // chi'(g_lower) = chi(lift(g_lower)) = zeta_phi^{k d}; with p | k this
      // is zeta_{phi'}^{(k/p) d}.
      const long long d =
          cur.tab_->dlog[static_cast<std::size_t>(lower->g % cur.tab_->pc)];
      const long long k_lower = static_cast<long long>(
          static_cast<unsigned long long>(cur.k_ / cur.tab_->p) %
              lower->phi * (d % lower->phi) % lower->phi);
      cur = Character(cur.tab_->p, cur.tab_->c - 1, k_lower);
    }
    return cur;
  }

  int conductor() const { return normalized().level(); }

  bool operator==(const Character& o) const {
    return tab_->p == o.tab_->p && tab_->c == o.tab_->c && k_ == o.k_;
  }

 private:
  std::shared_ptr<const detail::UnitGroupTable> tab_;
  long long k_ = 0;
};

// Spec'd evaluation entry point: chi(u) as a complex number.
inline std::complex<double> char_eval(const Character& chi, const Int& u) {
  return chi.eval(u);
}

// All characters of conductor exactly c', for c' = 1..c_max.  Level-1
// enumeration includes the trivial character; higher levels keep only the
// primitive indices (p does not divide k).
inline std::vector<Character> enumerate_characters(long long p, int c_max) {
  require_prime(p, "enumerate_characters");
  if (c_max < 1) throw DomainError("enumerate_characters: c_max must be >= 1");
  std::vector<Character> out;
  for (long long k = 0; k < unit_group_order(p, 1); ++k) {
    out.emplace_back(p, 1, k);
  }
  for (int c = 2; c <= c_max; ++c) {
    const long long phi = unit_group_order(p, c);
    for (long long k = 1; k < phi; ++k) {
      if (k % p != 0) out.emplace_back(p, c, k);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Level-set measures.
// ---------------------------------------------------------------------------

struct WalkOptions {
  unsigned long long budget = 100'000'000ULL;  // visited-cell cap
  int threads = 1;
  bool force_bigint = false;  // exact big-integer evaluation path
  // Optional restriction to one residue cell x = x0, y = y0 mod p^{depth}.
  bool restrict_root = false;
  long long root_x = 0;
  long long root_y = 0;
  int root_depth = 0;
};

struct LevelSetTable {
  long long p = 0;
  int c = 1;
  int K = 0;
  // mu[k][u]: measure of { val = k, angular component = u } for k <= K and
  // u in [0, p^c); non-unit slots stay zero.
  std::vector<std::vector<Rat>> mu;
  Rat tail_measure;  // mass with valuation beyond K (including f = 0)
  unsigned long long visited = 0;
  std::vector<unsigned long long> unresolved_per_depth;  // cells kept open
  bool reduction_vanishes_warning = false;  // f = 0 mod p
  bool used_bigint = false;

  Rat total_mass() const {
    Rat s = tail_measure;
    for (const auto& row : mu) {
      for (const Rat& m : row) s += m;
    }
    return s;
  }
};

namespace detail {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

// Unsigned division by a runtime constant via one 128-bit multiply-shift.
// Exact for q < 2^40 (the walker guards p^{L+c} < 2^40).
struct FastDiv {
  u64 mul = 1;
  int shift = 0;
  u64 d = 1;

  FastDiv() = default;
  explicit FastDiv(u64 div) : d(div) {
    int l = 0;
    while ((1ULL << l) < div) ++l;
    shift = 40 + l;
    mul = static_cast<u64>(
              ((static_cast<unsigned __int128>(1) << shift) / div)) +
          1;
  }
  u64 quot(u64 q) const {
    return static_cast<u64>((static_cast<unsigned __int128>(q) * mul) >>
                            shift);
  }
  u64 rem(u64 q) const { return q - d * quot(q); }
};

// Term list with coefficients reduced mod m, for u64 evaluation (m < 2^31).
struct ReducedTerms {
  struct Term {
    unsigned i, j;
    u64 coef;
  };
  std::vector<Term> terms;
  u64 m = 1;

  static ReducedTerms build(const BivariatePolynomial& f, u64 m) {
    ReducedTerms out;
    out.m = m;
    for (const auto& [mono, c] : f.terms()) {
      Int r = c % static_cast<long long>(m);
      if (r < 0) r += static_cast<long long>(m);
      const u64 cr = static_cast<u64>(r);
      if (cr != 0) {
        out.terms.push_back({static_cast<unsigned>(mono.first),
                             static_cast<unsigned>(mono.second), cr});
      }
    }
    return out;
  }

  u64 eval(u64 x, u64 y) const {
    u64 acc = 0;
    for (const Term& t : terms) {
      u64 v = t.coef;
      for (unsigned a = 0; a < t.i; ++a) v = v * x % m;
      for (unsigned b = 0; b < t.j; ++b) v = v * y % m;
      acc += v;
      if (acc >= m) acc -= m;
    }
    return acc;
  }
};

struct WalkTally {
  std::vector<u64> cnt;  // (K+1) * p^c
  u64 tail = 0;
  u64 visited = 0;
  std::vector<u64> unresolved;  // per depth, 0..L

  void init(int K, long long pc, int L) {
    cnt.assign(static_cast<std::size_t>((K + 1) * pc), 0);
    unresolved.assign(static_cast<std::size_t>(L + 1), 0);
  }
  void merge(const WalkTally& o) {
    for (std::size_t i = 0; i < cnt.size(); ++i) cnt[i] += o.cnt[i];
    tail += o.tail;
    visited += o.visited;
    for (std::size_t i = 0; i < unresolved.size(); ++i) {
      unresolved[i] += o.unresolved[i];
    }
  }
};

// Immutable configuration shared by all walker threads.
struct WalkShared {
  long long p = 0;
  int c = 1, K = 0, L = 1;
  u64 pc = 1, p2 = 1, pL = 1;
  std::vector<u64> pw;      // p^0..p^L
  std::vector<u64> inv_pw;  // odd-inverse powers mod 2^64 (p odd)
  bool p_is_two = false;
  FastDiv fd_p, fd_pc;
  u64 budget = 0;

  ReducedTerms fL;                         // f mod p^L
  std::vector<ReducedTerms> dfx, dfy;      // index m: df/dx, df/dy mod p^m
  std::vector<std::vector<u32>> gtab;      // index m: interleaved (fx, fy)

  struct DepthCfg {
    bool taylor = false;
    int m = 0;
    u64 pm = 1;
    const u32* grad_table = nullptr;
    const ReducedTerms* fx = nullptr;
    const ReducedTerms* fy = nullptr;
    u64 pl = 1;        // p^depth
    int divexp = -1;   // (depth+1) - c, or -1 when children cannot resolve
    u64 child_pm = 1;  // p^{L - depth - 1}
  };
  std::vector<DepthCfg> cfgs;  // expanding from depth 0..L-1

  // Two-level bulk expansion at depth L-2 (c = 1 only).
  bool block2 = false;
  std::vector<u32> lut_digit, lut_carry;  // size p^2: v % p, v / p
  std::vector<u32> b2;                    // per (x2,y2): gx2, gy2, hrow
  std::vector<u32> hall;                  // p^3 histogram rows

  u64 exact_div(u64 w, int k) const {
    return p_is_two ? (w >> k) : (w * inv_pw[static_cast<std::size_t>(k)]);
  }
};

inline void build_walk_shared(WalkShared& sh, const BivariatePolynomial& f,
                              long long p, int K, int c,
                              const WalkOptions& opt) {
  sh.p = p;
  sh.c = c;
  sh.K = K;
  sh.L = K + c;
  sh.p_is_two = (p == 2);
  sh.budget = opt.budget;
  sh.pw.resize(static_cast<std::size_t>(sh.L + 1));
  sh.pw[0] = 1;
  for (int i = 1; i <= sh.L; ++i) {
    sh.pw[static_cast<std::size_t>(i)] =
        sh.pw[static_cast<std::size_t>(i - 1)] * static_cast<u64>(p);
  }
  sh.pL = sh.pw[static_cast<std::size_t>(sh.L)];
  sh.pc = sh.pw[static_cast<std::size_t>(c)];
  sh.p2 = static_cast<u64>(p) * static_cast<u64>(p);
  if (!sh.p_is_two) {
    // Newton iteration for the odd inverse of p mod 2^64.
    u64 inv = static_cast<u64>(p);
    for (int it = 0; it < 6; ++it) inv *= 2 - static_cast<u64>(p) * inv;
    sh.inv_pw.resize(sh.pw.size());
    sh.inv_pw[0] = 1;
    for (std::size_t i = 1; i < sh.pw.size(); ++i) {
      sh.inv_pw[i] = sh.inv_pw[i - 1] * inv;
    }
  }
  sh.fd_p = FastDiv(static_cast<u64>(p));
  sh.fd_pc = FastDiv(sh.pc);

  sh.fL = ReducedTerms::build(f, sh.pL);
  auto [fx, fy] = f.grad();

  const int m_hi = sh.L / 2;
  sh.dfx.resize(static_cast<std::size_t>(m_hi + 1));
  sh.dfy.resize(static_cast<std::size_t>(m_hi + 1));
  sh.gtab.resize(static_cast<std::size_t>(m_hi + 1));
  sh.block2 = (c == 1 && sh.L >= 4);
  constexpr u64 kGradTableCap = 2'000'000;
  for (int m = 1; m <= m_hi; ++m) {
    const u64 pm = sh.pw[static_cast<std::size_t>(m)];
    sh.dfx[static_cast<std::size_t>(m)] = ReducedTerms::build(fx, pm);
    sh.dfy[static_cast<std::size_t>(m)] = ReducedTerms::build(fy, pm);
    const bool handled_by_block2 = sh.block2 && m == 2;
    if (!handled_by_block2 && pm * pm <= kGradTableCap) {
      auto& tab = sh.gtab[static_cast<std::size_t>(m)];
      tab.resize(static_cast<std::size_t>(2 * pm * pm));
      const ReducedTerms& rx = sh.dfx[static_cast<std::size_t>(m)];
      const ReducedTerms& ry = sh.dfy[static_cast<std::size_t>(m)];
      for (u64 y = 0; y < pm; ++y) {
        for (u64 x = 0; x < pm; ++x) {
          const std::size_t at = static_cast<std::size_t>(2 * (y * pm + x));
          tab[at] = static_cast<u32>(rx.eval(x, y));
          tab[at + 1] = static_cast<u32>(ry.eval(x, y));
        }
      }
    }
  }

  sh.cfgs.resize(static_cast<std::size_t>(sh.L));
  for (int depth = 0; depth < sh.L; ++depth) {
    auto& cfg = sh.cfgs[static_cast<std::size_t>(depth)];
    cfg.taylor = (2 * depth >= sh.L);
    cfg.m = sh.L - depth;
    if (cfg.taylor) {
      cfg.pm = sh.pw[static_cast<std::size_t>(cfg.m)];
      cfg.fx = &sh.dfx[static_cast<std::size_t>(cfg.m)];
      cfg.fy = &sh.dfy[static_cast<std::size_t>(cfg.m)];
      const auto& tab = sh.gtab[static_cast<std::size_t>(cfg.m)];
      cfg.grad_table = tab.empty() ? nullptr : tab.data();
    }
    cfg.pl = sh.pw[static_cast<std::size_t>(depth)];
    cfg.divexp = (depth + 1 >= c) ? (depth + 1 - c) : -1;
    cfg.child_pm = sh.pw[static_cast<std::size_t>(sh.L - depth - 1)];
  }

  if (sh.block2) {
    const u64 p2 = sh.p2;
    sh.lut_digit.resize(static_cast<std::size_t>(p2));
    sh.lut_carry.resize(static_cast<std::size_t>(p2));
    for (u64 v = 0; v < p2; ++v) {
      sh.lut_digit[static_cast<std::size_t>(v)] =
          static_cast<u32>(v % static_cast<u64>(p));
      sh.lut_carry[static_cast<std::size_t>(v)] =
          static_cast<u32>(v / static_cast<u64>(p));
    }
    sh.hall.assign(static_cast<std::size_t>(p2 * static_cast<u64>(p)), 0);
    for (u64 gx = 0; gx < static_cast<u64>(p); ++gx) {
      for (u64 gy = 0; gy < static_cast<u64>(p); ++gy) {
        u32* row = &sh.hall[static_cast<std::size_t>(
            (gx * static_cast<u64>(p) + gy) * static_cast<u64>(p))];
        for (u64 s = 0; s < static_cast<u64>(p); ++s) {
          for (u64 t = 0; t < static_cast<u64>(p); ++t) {
            row[(s * gx + t * gy) % static_cast<u64>(p)]++;
          }
        }
      }
    }
    constexpr u64 kBlockTableCap = 4'000'000;
    if (p2 * p2 <= kBlockTableCap) {
      const ReducedTerms& rx = sh.dfx[2];
      const ReducedTerms& ry = sh.dfy[2];
      sh.b2.resize(static_cast<std::size_t>(3 * p2 * p2));
      for (u64 y = 0; y < p2; ++y) {
        for (u64 x = 0; x < p2; ++x) {
          const u64 gx2 = rx.eval(x, y);
          const u64 gy2 = ry.eval(x, y);
          const std::size_t at = static_cast<std::size_t>(3 * (y * p2 + x));
          sh.b2[at] = static_cast<u32>(gx2);
          sh.b2[at + 1] = static_cast<u32>(gy2);
          sh.b2[at + 2] = static_cast<u32>(
              ((gx2 % static_cast<u64>(p)) * static_cast<u64>(p) +
               gy2 % static_cast<u64>(p)) *
              static_cast<u64>(p));
        }
      }
    }
  }
}

struct WalkCell {
  u64 x, y, xm, ym, W;
};

// One walker thread: depth-first refinement with a private tally.  The
// shared visited counter only enforces the budget; per-thread counts merge
// deterministically afterwards.
class WalkEngine {
 public:
  WalkEngine(const WalkShared& sh, std::atomic<u64>& global_visited,
             std::atomic<bool>& abort)
      : sh_(sh), global_visited_(global_visited), abort_(abort) {
    tally.init(sh.K, static_cast<long long>(sh.pc), sh.L);
  }

  WalkTally tally;

  // Collect mode: cells reaching this depth are stored instead of expanded.
  int collect_depth = -1;
  std::vector<WalkCell>* collect = nullptr;

  void expand(u64 x, u64 y, u64 xm, u64 ym, u64 W, int depth) {
    if (abort_.load(std::memory_order_relaxed)) return;
    if (sh_.block2 && depth == sh_.L - 2 && collect_depth < 0) {
      block2(xm, ym, W);
      return;
    }
    const WalkShared::DepthCfg& cfg =
        sh_.cfgs[static_cast<std::size_t>(depth)];
    bump(sh_.p2);
    const int d1 = depth + 1;
    const u64 p = static_cast<u64>(sh_.p);

    if (cfg.taylor) {
      u64 fxv, fyv;
      if (cfg.grad_table != nullptr) {
        const u32* g = cfg.grad_table + 2 * (ym * cfg.pm + xm);
        fxv = g[0];
        fyv = g[1];
      } else {
        fxv = cfg.fx->eval(xm, ym);
        fyv = cfg.fy->eval(xm, ym);
      }
      const u64 xmc = xm % cfg.child_pm;
      const u64 ymc = ym % cfg.child_pm;
      u64 gt = 0;  // (t * fy) mod p^m
      for (u64 t = 0; t < p; ++t) {
        u64 gval = gt;  // (s * fx + t * fy) mod p^m
        for (u64 s = 0; s < p; ++s) {
          u64 Wc = W + cfg.pl * gval;
          if (Wc >= sh_.pL) Wc -= sh_.pL;
          child(x + cfg.pl * s, y + cfg.pl * t, xmc, ymc, Wc, d1, cfg);
          gval += fxv;
          if (gval >= cfg.pm) gval -= cfg.pm;
        }
        gt += fyv;
        if (gt >= cfg.pm) gt -= cfg.pm;
      }
    } else {
      for (u64 t = 0; t < p; ++t) {
        for (u64 s = 0; s < p; ++s) {
          const u64 xc = x + cfg.pl * s;
          const u64 yc = y + cfg.pl * t;
          const u64 Wc = sh_.fL.eval(xc, yc);
          child(xc, yc, xc % cfg.child_pm, yc % cfg.child_pm, Wc, d1, cfg);
        }
      }
    }
  }

  void flush() {
    if (tally.visited != last_flush_) {
      global_visited_ += tally.visited - last_flush_;
      last_flush_ = tally.visited;
      if (global_visited_.load(std::memory_order_relaxed) > sh_.budget) {
        abort_.store(true, std::memory_order_relaxed);
      }
    }
  }

 private:
  void bump(u64 n) {
    tally.visited += n;
    if (tally.visited - last_flush_ >= kFlushEvery) flush();
  }

  void child(u64 x, u64 y, u64 xm, u64 ym, u64 W, int d1,
             const WalkShared::DepthCfg& cfg) {
    if (cfg.divexp >= 0) {
      const u64 q = sh_.exact_div(W, cfg.divexp);
      const u64 digit = sh_.fd_p.rem(q);
      if (digit != 0) {
        // Valuation d1 - c reached exactly; unit part is q mod p^c.
        tally.cnt[static_cast<std::size_t>(d1 - sh_.c) * sh_.pc +
                  sh_.fd_pc.rem(q)]++;
        return;
      }
    }
    if (d1 == sh_.L) {
      tally.tail++;
      return;
    }
    tally.unresolved[static_cast<std::size_t>(d1)]++;
    if (d1 == collect_depth) {
      collect->push_back({x, y, xm, ym, W});
      return;
    }
    expand(x, y, xm, ym, W, d1);
  }

  // Expand a cell at depth L-2 (c = 1) through both remaining levels.
  // Children are scored from lookup tables; grandchildren of unresolved
  // children are tallied in bulk from the mod-p gradient histogram.
  void block2(u64 xm, u64 ym, u64 W) {
    bump(sh_.p2);
    const u64 p = static_cast<u64>(sh_.p);
    const u64 p2 = sh_.p2;
    const u64 q0 = sh_.exact_div(W, sh_.L - 2);
    u64 gx2, gy2, hrow;
    if (!sh_.b2.empty()) {
      const u32* e = &sh_.b2[static_cast<std::size_t>(3 * (ym * p2 + xm))];
      gx2 = e[0];
      gy2 = e[1];
      hrow = e[2];
    } else {
      gx2 = sh_.dfx[2].eval(xm % p2, ym % p2);
      gy2 = sh_.dfy[2].eval(xm % p2, ym % p2);
      hrow = ((gx2 % p) * p + gy2 % p) * p;
    }
    u64* cnt_k1 =
        &tally.cnt[static_cast<std::size_t>(sh_.K - 1) * sh_.pc];
    u64* cnt_k = &tally.cnt[static_cast<std::size_t>(sh_.K) * sh_.pc];
    const u32* H = &sh_.hall[static_cast<std::size_t>(hrow)];
    u64 open_children = 0;
    u64 vt = q0;
    for (u64 t = 0; t < p; ++t) {
      u64 val = vt;
      for (u64 s = 0; s < p; ++s) {
        const u32 d0 = sh_.lut_digit[static_cast<std::size_t>(val)];
        if (d0 != 0) {
          cnt_k1[d0]++;
        } else {
          ++open_children;
          const u64 wp = sh_.lut_carry[static_cast<std::size_t>(val)];
          for (u64 d = 0; d < p; ++d) {
            u64 dig = wp + d;
            if (dig >= p) dig -= p;
            const u64 h = H[d];
            if (dig == 0) {
              tally.tail += h;
            } else {
              cnt_k[dig] += h;
            }
          }
        }
        val += gx2;
        if (val >= p2) val -= p2;
      }
      vt += gy2;
      if (vt >= p2) vt -= p2;
    }
    tally.unresolved[static_cast<std::size_t>(sh_.L - 1)] += open_children;
    bump(sh_.p2 * open_children);
  }

  static constexpr u64 kFlushEvery = 1ULL << 22;

  const WalkShared& sh_;
  std::atomic<u64>& global_visited_;
  std::atomic<bool>& abort_;
  u64 last_flush_ = 0;
};

// Exact big-integer walker: same refinement semantics, polynomial values
// evaluated in full precision.  Single-threaded; serves as the reference
// implementation and the fallback when p^{K+c} overflows the fast path.
class BigWalker {
 public:
  BigWalker(const BivariatePolynomial& f, long long p, int K, int c,
            u64 budget)
      : f_(f), p_(p), c_(c), K_(K), L_(K + c), budget_(budget) {
    pw_.resize(static_cast<std::size_t>(L_ + 1));
    pw_[0] = 1;
    for (int i = 1; i <= L_; ++i) pw_[static_cast<std::size_t>(i)] = pw_[static_cast<std::size_t>(i - 1)] * p;
    pc_ = pow_int(Int(p), static_cast<unsigned long>(c));
    tally.init(K, static_cast<long long>(pc_), L_);
  }

  WalkTally tally;

  void expand(const Int& x, const Int& y, int depth) {
    tally.visited += static_cast<u64>(p_) * static_cast<u64>(p_);
    if (tally.visited > budget_) {
      throw ResourceCapError(
          "measure_level_sets: cell budget exceeded (big-integer path)");
    }
    const Int& step = pw_[static_cast<std::size_t>(depth)];
    const int d1 = depth + 1;
    for (long long t = 0; t < p_; ++t) {
      for (long long s = 0; s < p_; ++s) {
        const Int xc = x + step * s;
        const Int yc = y + step * t;
        const Int W = f_.eval(xc, yc);
        if (d1 >= c_ && W != 0) {
          Int q = W;
          for (int i = 0; i < d1 - c_; ++i) q /= p_;
          if (q % p_ != 0) {
            Int u = q % pc_;
            if (u < 0) u += pc_;
            tally.cnt[static_cast<std::size_t>(d1 - c_) *
                          static_cast<std::size_t>(
                              static_cast<long long>(pc_)) +
                      static_cast<std::size_t>(static_cast<long long>(u))]++;
            continue;
          }
        }
        if (d1 == L_) {
          tally.tail++;
          continue;
        }
        tally.unresolved[static_cast<std::size_t>(d1)]++;
        expand(xc, yc, d1);
      }
    }
  }

  long long p_val() const { return p_; }

 private:
  const BivariatePolynomial& f_;
  long long p_;
  int c_, K_, L_;
  u64 budget_;
  std::vector<Int> pw_;
  Int pc_;
};

}  // namespace detail

// Exact table of level-set measures of f over one residue cell (the whole
// unit square by default).  Cells are refined digit by digit; a cell at
// depth d is closed once the valuation is at most d - c, which pins both
// the valuation and the angular component of every point inside it.  Work
// is capped by options.budget visited cells (ResourceCapError beyond).
inline LevelSetTable measure_level_sets(const BivariatePolynomial& f,
                                        long long p, int K, int c,
                                        const WalkOptions& options = {}) {
  require_prime(p, "measure_level_sets");
  if (K < 0) throw DomainError("measure_level_sets: K must be >= 0");
  if (c < 1) throw DomainError("measure_level_sets: c must be >= 1");
  if (options.threads < 1) {
    throw DomainError("measure_level_sets: threads must be >= 1");
  }
  if (f.is_zero()) {
    throw DomainError("measure_level_sets: zero polynomial");
  }
  const int L = K + c;
  const int r0 = options.restrict_root ? options.root_depth : 0;
  if (r0 < 0 || r0 > K) {
    throw DomainError("measure_level_sets: root depth must lie in [0, K]");
  }
  const Int pr0 = pow_int(Int(p), static_cast<unsigned long>(r0));
  if (options.restrict_root &&
      (options.root_x < 0 || Int(options.root_x) >= pr0 ||
       options.root_y < 0 || Int(options.root_y) >= pr0)) {
    throw DomainError("measure_level_sets: root cell out of range");
  }

  LevelSetTable out;
  out.p = p;
  out.c = c;
  out.K = K;
  const long long pc_ll = static_cast<long long>(
      pow_int(Int(p), static_cast<unsigned long>(c)));
  out.mu.assign(static_cast<std::size_t>(K + 1),
                std::vector<Rat>(static_cast<std::size_t>(pc_ll), Rat(0)));
  out.unresolved_per_depth.assign(static_cast<std::size_t>(L + 1), 0);
  out.reduction_vanishes_warning = reduce_mod_p(f, p).is_zero();

  // Fast-path guard: every intermediate quantity must stay below 2^40 and
  // coordinates below 2^31.
  bool fast = !options.force_bigint;
  {
    Int pL = pow_int(Int(p), static_cast<unsigned long>(L));
    if (pL >= (Int(1) << 31) || pL * pc_ll >= (Int(1) << 40)) fast = false;
  }

  const Rat root_measure = Rat(1, pow_int(Int(p), 2 * static_cast<unsigned long>(r0)));

  // Root resolution check (full valuation, no ancestor guarantee).
  const Int W0_exact = f.eval(options.root_x, options.root_y);
  if (W0_exact != 0) {
    const ValuationAc va = valuation_and_ac(W0_exact, p, c);
    if (va.v + c <= r0) {
      out.mu[static_cast<std::size_t>(va.v)][static_cast<std::size_t>(va.ac)] =
          root_measure;
      out.visited = 1;
      return out;
    }
  }
  out.unresolved_per_depth[static_cast<std::size_t>(r0)] = 1;

  detail::WalkTally total;
  total.init(K, pc_ll, L);
  total.visited = 1;  // the root cell

  if (!fast) {
    detail::BigWalker walker(f, p, K, c, options.budget);
    walker.tally.visited = 1;
    walker.expand(Int(options.root_x), Int(options.root_y), r0);
    total.merge(walker.tally);
    total.visited -= 1;  // the root was seeded in both tallies
    out.used_bigint = true;
  } else {
    detail::WalkShared sh;
    detail::build_walk_shared(sh, f, p, K, c, options);
    std::atomic<detail::u64> global_visited{0};
    std::atomic<bool> abort{false};

    const detail::u64 x0 = static_cast<detail::u64>(options.root_x);
    const detail::u64 y0 = static_cast<detail::u64>(options.root_y);
    const detail::u64 mroot = sh.pw[static_cast<std::size_t>(L - r0)];
    const detail::u64 xm0 = x0 % mroot;
    const detail::u64 ym0 = y0 % mroot;
    const detail::u64 W0 = sh.fL.eval(x0, y0);

    if (options.threads == 1) {
      detail::WalkEngine engine(sh, global_visited, abort);
      engine.expand(x0, y0, xm0, ym0, W0, r0);
      engine.flush();
      total.merge(engine.tally);
    } else {
      // Serial expansion to a shallow depth, then cells are dealt
      // round-robin; per-thread tallies merge into a schedule-independent
      // total.
      const int d0 = std::min(r0 + 2, L);
      std::vector<detail::WalkCell> cells;
      detail::WalkEngine seed(sh, global_visited, abort);
      seed.collect_depth = d0;
      seed.collect = &cells;
      seed.expand(x0, y0, xm0, ym0, W0, r0);
      seed.flush();
      total.merge(seed.tally);

      const int T = options.threads;
      std::vector<std::unique_ptr<detail::WalkEngine>> engines;
      engines.reserve(static_cast<std::size_t>(T));
      for (int i = 0; i < T; ++i) {
        engines.push_back(std::make_unique<detail::WalkEngine>(
            sh, global_visited, abort));
      }
      std::vector<std::thread> threads;
      threads.reserve(static_cast<std::size_t>(T));
      for (int i = 0; i < T; ++i) {
        threads.emplace_back([&, i] {
          for (std::size_t j = static_cast<std::size_t>(i); j < cells.size();
               j += static_cast<std::size_t>(T)) {
            const detail::WalkCell& cell = cells[j];
            engines[static_cast<std::size_t>(i)]->expand(
                cell.x, cell.y, cell.xm, cell.ym, cell.W, d0);
          }
          engines[static_cast<std::size_t>(i)]->flush();
        });
      }
      for (auto& th : threads) th.join();
      for (const auto& e : engines) total.merge(e->tally);
    }
    if (total.visited > options.budget) {
      throw ResourceCapError("measure_level_sets: cell budget exceeded");
    }
  }

  for (int k = 0; k <= K; ++k) {
    const Rat unit = Rat(1, pow_int(Int(p), 2 * static_cast<unsigned long>(k + c)));
    for (long long u = 0; u < pc_ll; ++u) {
      const detail::u64 n =
          total.cnt[static_cast<std::size_t>(k) * static_cast<std::size_t>(pc_ll) +
                    static_cast<std::size_t>(u)];
      if (n != 0) {
        out.mu[static_cast<std::size_t>(k)][static_cast<std::size_t>(u)] =
            Rat(Int(n)) * unit;
      }
    }
  }
  out.tail_measure =
      Rat(Int(total.tail), pow_int(Int(p), 2 * static_cast<unsigned long>(L)));
  out.visited = total.visited;
  for (std::size_t i = 0; i < total.unresolved.size(); ++i) {
    out.unresolved_per_depth[i] = total.unresolved[i];
  }
  out.unresolved_per_depth[static_cast<std::size_t>(L)] = total.tail;
  return out;
}

}  // namespace izeta
