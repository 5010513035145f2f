#pragma once
// Shared scalar types, error hierarchy, and small numeric helpers.
//
// Every quantity that feeds polygon geometry, pole bookkeeping, or measure
// tables is kept exact: arbitrary-precision integers (Int) and rationals
// (Rat).  Floating point appears only at explicitly marked comparison
// boundaries (complex pairings in the exponential-sum module).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace izeta {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when input text violates the polynomial grammar.  `offset` is the
// 0-based byte position of the first offending character.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Thrown when a well-formed request falls outside an operation's domain
// (non-prime modulus, zero polynomial where nonzero is required, ...).
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation would exceed a configured resource cap.  The
// caller either raises the cap or treats the input as out of reach; results
// are never silently truncated.
class ResourceCapError : public std::runtime_error {
 public:
  explicit ResourceCapError(const std::string& what)
      : std::runtime_error(what) {}
};

inline Int pow_int(const Int& base, unsigned long e) {
  Int r = 1;
  Int b = base;
  while (e > 0) {
    if (e & 1UL) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

inline std::uint64_t pow_u64(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e > 0) {
    if (e & 1U) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline long long gcd_ll(long long a, long long b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

inline void require_prime(long long p, const char* who) {
  if (!is_prime(p)) {
    throw DomainError(std::string(who) + ": modulus " + std::to_string(p) +
                      " is not prime");
  }
}

// Euler phi of p^c for prime p.
inline long long unit_group_order(long long p, int c) {
  long long n = p - 1;
  for (int i = 1; i < c; ++i) n *= p;
  return n;
}

inline std::string rat_string(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace izeta
