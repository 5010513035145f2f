#pragma once
// Sparse bivariate polynomials with arbitrary-precision integer coefficients:
// parsing, exact evaluation, formal derivatives, residue-field reduction, and
// the weighted decomposition into quasihomogeneous parts.

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "izeta/common.hpp"

namespace izeta {

// Lattice exponent pair (i, j) for the monomial x^i y^j.
using Monomial = std::pair<int, int>;

// Sparse polynomial in Z[x, y].  Invariants: no stored coefficient is zero;
// the zero polynomial has an empty term map.
class BivariatePolynomial {
 public:
  using TermMap = std::map<Monomial, Int>;

  BivariatePolynomial() = default;
  explicit BivariatePolynomial(TermMap terms) : terms_(std::move(terms)) {
    prune();
  }

  static BivariatePolynomial monomial(int i, int j, Int coeff) {
    TermMap m;
    if (coeff != 0) m[{i, j}] = std::move(coeff);
    return BivariatePolynomial(std::move(m));
  }

  static BivariatePolynomial constant(Int c) { return monomial(0, 0, std::move(c)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool is_monomial() const { return terms_.size() == 1; }

  Int coefficient(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? Int(0) : it->second;
  }

  void add_term(int i, int j, const Int& c) {
    if (c == 0) return;
    Int& slot = terms_[{i, j}];
    slot += c;
    if (slot == 0) terms_.erase({i, j});
  }

  BivariatePolynomial operator+(const BivariatePolynomial& o) const {
    BivariatePolynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m.first, m.second, c);
    return r;
  }

  BivariatePolynomial operator-(const BivariatePolynomial& o) const {
    BivariatePolynomial r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m.first, m.second, -c);
    return r;
  }

  BivariatePolynomial operator-() const {
    BivariatePolynomial r;
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }

  BivariatePolynomial operator*(const BivariatePolynomial& o) const {
    BivariatePolynomial r;
    for (const auto& [m1, c1] : terms_) {
      for (const auto& [m2, c2] : o.terms_) {
        r.add_term(m1.first + m2.first, m1.second + m2.second, c1 * c2);
      }
    }
    return r;
  }

  BivariatePolynomial pow(unsigned e) const {
    BivariatePolynomial r = constant(1);
    BivariatePolynomial b = *this;
    while (e > 0) {
      if (e & 1U) r = r * b;
      if (e > 1) b = b * b;
      e >>= 1;
    }
    return r;
  }

  bool operator==(const BivariatePolynomial& o) const {
    return terms_ == o.terms_;
  }
  bool operator!=(const BivariatePolynomial& o) const { return !(*this == o); }

  // Exact evaluation over Z.
  Int eval(const Int& x, const Int& y) const {
    Int acc = 0;
    for (const auto& [m, c] : terms_) {
      acc += c * pow_int(x, static_cast<unsigned long>(m.first)) *
             pow_int(y, static_cast<unsigned long>(m.second));
    }
    return acc;
  }

  // Evaluation of the residue mod m (m > 0) with machine-word reduction.
  std::uint64_t eval_mod(std::uint64_t x, std::uint64_t y,
                         std::uint64_t m) const {
    std::uint64_t acc = 0;
    for (const auto& [mono, c] : terms_) {
      Int cr = c % Int(m);
      if (cr < 0) cr += m;
      std::uint64_t t = static_cast<std::uint64_t>(cr);
      std::uint64_t bx = x % m;
      for (int e = mono.first; e > 0; --e) t = (t * bx) % m;
      std::uint64_t by = y % m;
      for (int e = mono.second; e > 0; --e) t = (t * by) % m;
      acc = (acc + t) % m;
    }
    return acc;
  }

  std::pair<BivariatePolynomial, BivariatePolynomial> grad() const {
    BivariatePolynomial dx, dy;
    for (const auto& [m, c] : terms_) {
      if (m.first > 0) dx.add_term(m.first - 1, m.second, c * m.first);
      if (m.second > 0) dy.add_term(m.first, m.second - 1, c * m.second);
    }
    return {dx, dy};
  }

  int max_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      (void)c;
      d = std::max(d, std::max(m.first, m.second));
    }
    return d;
  }

  std::vector<Monomial> support() const {
    std::vector<Monomial> s;
    s.reserve(terms_.size());
    for (const auto& [m, c] : terms_) {
      (void)c;
      s.push_back(m);
    }
    return s;
  }

  // Canonical text form; parse(to_string()) reproduces the same term map.
  // Terms are emitted in term-map order (lexicographic by (i, j)).
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      const bool neg = c < 0;
      Int mag = neg ? Int(-c) : c;
      if (first) {
        if (neg) out += "-";
      } else {
        out += neg ? " - " : " + ";
      }
      first = false;
      std::string mono;
      if (m.first > 0) {
        mono += "x";
        if (m.first > 1) mono += "^" + std::to_string(m.first);
      }
      if (m.second > 0) {
        if (!mono.empty()) mono += "*";
        mono += "y";
        if (m.second > 1) mono += "^" + std::to_string(m.second);
      }
      if (mono.empty()) {
        out += mag.str();
      } else if (mag == 1) {
        out += mono;
      } else {
        out += mag.str() + "*" + mono;
      }
    }
    return out;
  }

 private:
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (it->second == 0) {
        it = terms_.erase(it);
      } else {
        ++it;
      }
    }
  }

  TermMap terms_;
};

namespace detail {

// Recursive-descent parser for the grammar
//   expr   := '-'? term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' nat)?
//   base   := 'x' | 'y' | int | '(' expr ')'
//   int    := '-'? digit+ ;  nat := digit+
// Whitespace is insignificant between tokens.
class PolyParser {
 public:
  explicit PolyParser(const std::string& text) : text_(text) {}

  BivariatePolynomial parse() {
    BivariatePolynomial r = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError("unexpected trailing input", pos_);
    }
    return r;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool peek_is(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  BivariatePolynomial parse_expr() {
    skip_ws();
    bool negate_first = false;
    if (peek_is('-')) {
      negate_first = true;
      ++pos_;
    }
    BivariatePolynomial acc = parse_term();
    if (negate_first) acc = -acc;
    while (true) {
      skip_ws();
      if (peek_is('+')) {
        ++pos_;
        acc = acc + parse_term();
      } else if (peek_is('-')) {
        ++pos_;
        acc = acc - parse_term();
      } else {
        break;
      }
    }
    return acc;
  }

  BivariatePolynomial parse_term() {
    BivariatePolynomial acc = parse_factor();
    while (peek_is('*')) {
      ++pos_;
      acc = acc * parse_factor();
    }
    return acc;
  }

  BivariatePolynomial parse_factor() {
    BivariatePolynomial base = parse_base();
    skip_ws();
    if (peek_is('^')) {
      ++pos_;
      skip_ws();
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError("exponent must be a nonnegative integer literal",
                         pos_);
      }
      unsigned long e = parse_nat();
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  BivariatePolynomial parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) {
      throw ParseError("expected 'x', 'y', an integer, or '('", pos_);
    }
    const char c = text_[pos_];
    if (c == 'x') {
      ++pos_;
      return BivariatePolynomial::monomial(1, 0, 1);
    }
    if (c == 'y') {
      ++pos_;
      return BivariatePolynomial::monomial(0, 1, 1);
    }
    if (c == '(') {
      ++pos_;
      BivariatePolynomial inner = parse_expr();
      skip_ws();
      if (!peek_is(')')) {
        throw ParseError("expected ')'", pos_);
      }
      ++pos_;
      return inner;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      bool neg = false;
      if (c == '-') {
        neg = true;
        ++pos_;
        skip_ws();
        if (pos_ >= text_.size() ||
            !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          throw ParseError("expected digits after '-'", pos_);
        }
      }
      Int value = parse_int_digits();
      return BivariatePolynomial::constant(neg ? Int(-value) : value);
    }
    throw ParseError("expected 'x', 'y', an integer, or '('", pos_);
  }

  unsigned long parse_nat() {
    unsigned long v = 0;
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned long>(text_[pos_] - '0');
      if (v > 1000000UL) {
        throw ParseError("exponent too large", start);
      }
      ++pos_;
    }
    return v;
  }

  Int parse_int_digits() {
    Int v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    return v;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses `text` into a fully expanded sparse polynomial.  Expansion uses
// exact integer arithmetic.  Throws ParseError with the byte offset of the
// first offending character.
inline BivariatePolynomial parse_poly(const std::string& text) {
  return detail::PolyParser(text).parse();
}

// Reduces every coefficient into [0, p) and drops the terms that vanish.
inline BivariatePolynomial reduce_mod_p(const BivariatePolynomial& f,
                                        long long p) {
  require_prime(p, "reduce_mod_p");
  BivariatePolynomial::TermMap m;
  for (const auto& [mono, c] : f.terms()) {
    Int r = c % p;
    if (r < 0) r += p;
    if (r != 0) m[mono] = r;
  }
  return BivariatePolynomial(std::move(m));
}

// Sparse univariate polynomial, exponent -> coefficient.
using UnivariatePolynomial = std::map<int, Int>;

// g(y) = f(1, y^a): the substitution x = 1, y -> y^a, computed exactly.
inline UnivariatePolynomial univariate_restriction(
    const BivariatePolynomial& f, int a) {
  if (a < 1) throw DomainError("univariate_restriction: a must be >= 1");
  UnivariatePolynomial g;
  for (const auto& [mono, c] : f.terms()) {
    Int& slot = g[mono.second * a];
    slot += c;
    if (slot == 0) g.erase(mono.second * a);
  }
  return g;
}

// Weighted decomposition of a polynomial: parts grouped by the value of
// a*i + b*j over the support, listed with strictly increasing weighted
// degrees.  Part 0 is the lowest-degree (initial) part.
struct SqhDecomposition {
  std::pair<int, int> weight;                       // coprime (a, b)
  std::vector<std::pair<long long, BivariatePolynomial>> parts;  // (d_j, f_j)

  long long base_degree() const { return parts.front().first; }
  std::size_t size() const { return parts.size(); }
};

inline SqhDecomposition sqh_decompose(const BivariatePolynomial& f, int a,
                                      int b) {
  if (a < 1 || b < 1) {
    throw DomainError("sqh_decompose: weight components must be >= 1");
  }
  if (gcd_ll(a, b) != 1) {
    throw DomainError("sqh_decompose: weight must be coprime");
  }
  if (f.is_zero()) {
    throw DomainError("sqh_decompose: zero polynomial");
  }
  std::map<long long, BivariatePolynomial::TermMap> grouped;
  for (const auto& [mono, c] : f.terms()) {
    const long long d = static_cast<long long>(a) * mono.first +
                        static_cast<long long>(b) * mono.second;
    grouped[d][mono] = c;
  }
  SqhDecomposition out;
  out.weight = {a, b};
  for (auto& [d, terms] : grouped) {
    out.parts.emplace_back(d, BivariatePolynomial(std::move(terms)));
  }
  return out;
}

}  // namespace izeta
