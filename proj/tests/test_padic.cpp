#include <complex>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "izeta/padic.hpp"
#include "izeta/poly.hpp"
#include "naive_measures.hpp"

using izeta::Character;
using izeta::Int;
using izeta::parse_poly;
using izeta::Rat;
using izeta::RootOfUnitySum;
using izeta::WalkOptions;

TEST_CASE("valuation and angular component", "[padic]") {
  const auto v
      = izeta::valuation_and_ac(Int(50), 5, 2);
  CHECK(v.finite);
  CHECK(v.v == 2);
  CHECK(v.ac == 2);
  const auto w = izeta::valuation_and_ac(Int(-75), 5, 2);
  CHECK(w.v == 2);
  CHECK(w.ac == 22);  // -3 mod 25
  const auto z = izeta::valuation_and_ac(Int(0), 5, 2);
  CHECK_FALSE(z.finite);
  const auto u = izeta::valuation_and_ac(Int(7), 5, 1);
  CHECK(u.v == 0);
  CHECK(u.ac == 2);
}

TEST_CASE("root-of-unity sums reduce against cyclotomic relations",
          "[padic]") {
  // 1 + zeta_4^2 = 0.
  RootOfUnitySum s(4);
  s += RootOfUnitySum::monomial(4, 0, Rat(1));
  s += RootOfUnitySum::monomial(4, 2, Rat(1));
  CHECK(s.is_zero());
  // Sum of all 20th roots of unity vanishes.
  RootOfUnitySum t(20);
  for (long long e = 0; e < 20; ++e) {
    t += RootOfUnitySum::monomial(20, e, Rat(1));
  }
  CHECK(t.is_zero());
  // Products respect exponent addition mod the order.
  const auto a = RootOfUnitySum::monomial(12, 7, Rat(2));
  const auto b = RootOfUnitySum::monomial(12, 9, Rat(3, 2));
  CHECK(a * b == RootOfUnitySum::monomial(12, 4, Rat(3)));
  // Rational detection.
  CHECK(RootOfUnitySum::monomial(8, 4, Rat(5)).as_rational() == Rat(-5));
  CHECK_FALSE(RootOfUnitySum::monomial(8, 2, Rat(1)).as_rational());
  // Mixed orders are rejected.
  RootOfUnitySum x(4), y(8);
  CHECK_THROWS_AS(x += y, izeta::DomainError);
}

TEST_CASE("multiplicative characters", "[padic]") {
  const Character chi(5, 1, 1);
  CHECK(chi.group_order() == 4);
  CHECK(chi.order() == 4);
  CHECK_FALSE(chi.is_trivial());
  CHECK(chi.power_is_trivial(4));
  CHECK_FALSE(chi.power_is_trivial(2));
  CHECK(chi.power(2).order() == 2);
  CHECK(chi.inverse().index() == 3);
  // chi(g^a g^b) = chi(g^a) chi(g^b) exponent arithmetic.
  for (long long u = 1; u < 5; ++u) {
    for (long long w = 1; w < 5; ++w) {
      const long long lhs = chi.eval_exponent(u * w % 5);
      const long long rhs =
          (chi.eval_exponent(u) + chi.eval_exponent(w)) % chi.group_order();
      CHECK(lhs == rhs);
    }
  }
  CHECK_THROWS_AS(chi.eval_exponent(5), izeta::DomainError);
}

TEST_CASE("conductor normalization", "[padic]") {
  // Index divisible by p at level 2: the character factors through level 1.
  const Character a(5, 2, 5);
  CHECK(a.conductor() == 1);
  const Character b(5, 2, 1);
  CHECK(b.conductor() == 2);
  const Character triv(5, 2, 0);
  CHECK(triv.conductor() == 1);  // trivial-character convention
  // The normalized character agrees pointwise on units.
  const Character an = a.normalized();
  REQUIRE(an.level() == 1);
  for (long long u = 1; u < 25; ++u) {
    if (u % 5 == 0) continue;
    const std::complex<double> va = a.eval(Int(u));
    const std::complex<double> vn = an.eval(Int(u));
    CHECK(std::abs(va - vn) < 1e-12);
  }
}

TEST_CASE("character enumeration", "[padic]") {
  const auto one = izeta::enumerate_characters(5, 1);
  CHECK(one.size() == 4);  // k = 0..3 at level 1
  const auto two = izeta::enumerate_characters(5, 2);
  CHECK(two.size() == 20);  // 4 at level 1, 16 primitive at level 2
  for (const auto& chi : two) {
    if (chi.level() == 2) CHECK(chi.conductor() == 2);
  }
  CHECK_THROWS_AS(Character(2, 3, 1), izeta::DomainError);
}

TEST_CASE("walker equals full enumeration on a corpus", "[padic]") {
  const long long p = 3;
  const int K = 2, c = 2;
  for (const char* text :
       {"(y^3-x^2)^2+x^4*y^4", "y^2-x^3", "x*y+x^3", "x*y", "x^2+y^2",
        "2*x*y+3*y^2", "x+y+1", "x", "y^2", "x^2*y-y^3+3"}) {
    INFO("polynomial " << text);
    const auto f = parse_poly(text);
    WalkOptions opt;
    const auto table = izeta::measure_level_sets(f, p, K, c, opt);
    const auto naive = izeta_test::naive_level_sets(f, p, K, c);
    CHECK(table.mu == naive.mu);
    CHECK(table.tail_measure == naive.tail);
  }
}

TEST_CASE("fast path equals the big-integer path", "[padic]") {
  for (const char* text : {"(y^3-x^2)^2+x^4*y^4", "y^2-x^3", "x*y+x^3"}) {
    INFO("polynomial " << text);
    const auto f = parse_poly(text);
    WalkOptions fast;
    fast.budget = 500'000'000ULL;
    WalkOptions big = fast;
    big.force_bigint = true;
    const auto ta = izeta::measure_level_sets(f, 5, 4, 2, fast);
    const auto tb = izeta::measure_level_sets(f, 5, 4, 2, big);
    CHECK_FALSE(ta.used_bigint);
    CHECK(tb.used_bigint);
    CHECK(ta.mu == tb.mu);
    CHECK(ta.tail_measure == tb.tail_measure);
    CHECK(ta.visited == tb.visited);
  }
}

TEST_CASE("thread count does not change the result", "[padic]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  WalkOptions one;
  one.budget = 500'000'000ULL;
  const auto t1 = izeta::measure_level_sets(f, 5, 5, 1, one);
  for (int n : {2, 3, 8}) {
    WalkOptions opt = one;
    opt.threads = n;
    const auto tn = izeta::measure_level_sets(f, 5, 5, 1, opt);
    CHECK(t1.mu == tn.mu);
    CHECK(t1.tail_measure == tn.tail_measure);
    CHECK(t1.visited == tn.visited);
  }
}

TEST_CASE("frozen series of the worked example", "[padic]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  WalkOptions opt;
  const auto t = izeta::measure_level_sets(f, 5, 6, 1, opt);
  auto row_sum = [&](int k) {
    Rat s(0);
    for (const auto& m : t.mu[static_cast<std::size_t>(k)]) s += m;
    return s;
  };
  CHECK(row_sum(0) == Rat(16, 25));
  CHECK(row_sum(1) == Rat(32, 125));
  CHECK(row_sum(2) == Rat(32, 625));
  CHECK(row_sum(3) == Rat(32, 3125));
  CHECK(row_sum(4) == Rat(532, 15625));
  CHECK(row_sum(5) == Rat(32, 78125));
  CHECK(row_sum(6) == Rat(2532, 390625));
  CHECK(t.tail_measure == Rat(633, 390625));
  CHECK(t.visited == 51969376);
  // One unresolved count per depth 0..L, L = K + c; the depth-L entry is
  // the cell count behind the tail measure.
  CHECK(t.unresolved_per_depth.size() == 8);
  CHECK(Rat(Int(t.unresolved_per_depth[7]),
            izeta::pow_int(Int(5), 14)) == t.tail_measure);
}

TEST_CASE("total mass is conserved", "[padic]") {
  for (const char* text : {"y^2-x^3", "x*y", "x+y+1"}) {
    const auto f = parse_poly(text);
    WalkOptions opt;
    const auto t = izeta::measure_level_sets(f, 3, 4, 1, opt);
    CHECK(t.total_mass() == Rat(1));
  }
}

TEST_CASE("root-restricted walk", "[padic]") {
  // Sum of the four depth-1 cell tables of the residue roots of the cusp
  // plus the off-zero-set mass reproduces the full table (p = 5).
  const auto f = parse_poly("y^2-x^3");
  WalkOptions opt;
  const int K = 4;
  const auto full = izeta::measure_level_sets(f, 5, K, 1, opt);
  std::vector<std::vector<Rat>> acc(
      static_cast<std::size_t>(K + 1), std::vector<Rat>(5, Rat(0)));
  Rat tail(0);
  const auto fb = izeta::reduce_mod_p(f, 5);
  for (long long x = 0; x < 5; ++x) {
    for (long long y = 0; y < 5; ++y) {
      if (fb.eval_mod(static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y), 5) != 0) {
        // v = 0 cell: angular component is f mod 5.
        acc[0][fb.eval_mod(static_cast<std::uint64_t>(x),
                           static_cast<std::uint64_t>(y), 5)] += Rat(1, 25);
        continue;
      }
      WalkOptions ropt;
      ropt.restrict_root = true;
      ropt.root_x = x;
      ropt.root_y = y;
      ropt.root_depth = 1;
      const auto cell = izeta::measure_level_sets(f, 5, K, 1, ropt);
      for (int k = 0; k <= K; ++k) {
        for (std::size_t u = 0; u < 5; ++u) {
          acc[static_cast<std::size_t>(k)][u] +=
              cell.mu[static_cast<std::size_t>(k)][u];
        }
      }
      tail += cell.tail_measure;
    }
  }
  CHECK(acc == full.mu);
  CHECK(tail == full.tail_measure);
}

TEST_CASE("budget violations throw", "[padic]") {
  const auto f = parse_poly("(y^3-x^2)^2+x^4*y^4");
  WalkOptions opt;
  opt.budget = 1000;
  CHECK_THROWS_AS(izeta::measure_level_sets(f, 5, 6, 1, opt),
                  izeta::ResourceCapError);
  WalkOptions big;
  big.budget = 1000;
  big.force_bigint = true;
  CHECK_THROWS_AS(izeta::measure_level_sets(f, 5, 6, 1, big),
                  izeta::ResourceCapError);
}

TEST_CASE("input validation", "[padic]") {
  WalkOptions opt;
  CHECK_THROWS_AS(
      izeta::measure_level_sets(parse_poly("x"), 4, 2, 1, opt),
      izeta::DomainError);
  CHECK_THROWS_AS(
      izeta::measure_level_sets(izeta::BivariatePolynomial{}, 5, 2, 1, opt),
      izeta::DomainError);
  CHECK_THROWS_AS(
      izeta::measure_level_sets(parse_poly("x"), 5, -1, 1, opt),
      izeta::DomainError);
  CHECK_THROWS_AS(
      izeta::measure_level_sets(parse_poly("x"), 5, 2, 0, opt),
      izeta::DomainError);
  // Vanishing reduction is legal but flagged.
  const auto t = izeta::measure_level_sets(parse_poly("5*x*y"), 5, 2, 1, opt);
  CHECK(t.reduction_vanishes_warning);
}

TEST_CASE("large primes match the closed form for a monomial", "[padic]") {
  // v(x*y) = v(x) + v(y): the level-k mass is sum_{i+j=k} of products of
  // one-variable shell masses (1 - 1/p) p^{-i}.
  const auto f = parse_poly("x*y");
  WalkOptions opt;
  const long long p = 97;
  const int K = 1;
  const auto t = izeta::measure_level_sets(f, p, K, 1, opt);
  const Rat shell0 = Rat(p - 1, p);
  CHECK(t.mu[0][0] == Rat(0));  // residue 0 cannot be the unit part
  Rat row0(0);
  for (const auto& m : t.mu[0]) row0 += m;
  CHECK(row0 == shell0 * shell0);
  Rat row1(0);
  for (const auto& m : t.mu[1]) row1 += m;
  CHECK(row1 == Rat(2) * shell0 * shell0 / Rat(p));
  CHECK(t.total_mass() == Rat(1));
}
