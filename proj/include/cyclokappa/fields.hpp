#ifndef CYCLOKAPPA_FIELDS_HPP
#define CYCLOKAPPA_FIELDS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include <gmpxx.h>

namespace cyclokappa {

using Int = mpz_class;
using Rat = mpq_class;

// Exact coefficient fields used throughout: arbitrary-precision rationals
// and prime fields with a runtime modulus.  Elimination code is templated
// on one of the two policy classes below.

struct RationalField {
  using Value = Rat;
  static Value zero() { return Rat(0); }
  static Value one() { return Rat(1); }
  static bool is_zero(const Value& v) { return sgn(v) == 0; }
  static Value add(const Value& a, const Value& b) { return a + b; }
  static Value sub(const Value& a, const Value& b) { return a - b; }
  static Value mul(const Value& a, const Value& b) { return a * b; }
  static Value neg(const Value& a) { return -a; }
  static Value inv(const Value& a) { return Rat(1) / a; }
};

struct PrimeField {
  uint64_t p;

  using Value = uint64_t;
  explicit PrimeField(uint64_t modulus) : p(modulus) {
    if (modulus < 2) throw std::invalid_argument("prime field modulus must be >= 2");
  }
  Value zero() const { return 0; }
  Value one() const { return 1 % p; }
  bool is_zero(Value v) const { return v == 0; }
  Value add(Value a, Value b) const { Value s = a + b; return s >= p ? s - p : s; }
  Value sub(Value a, Value b) const { return a >= b ? a - b : a + p - b; }
  Value mul(Value a, Value b) const { return (unsigned __int128)a * b % p; }
  Value neg(Value a) const { return a == 0 ? 0 : p - a; }
  Value pow(Value a, uint64_t e) const {
    Value r = one(), base = a % p;
    while (e) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }
  Value inv(Value a) const {
    if (a % p == 0) throw std::domain_error("division by zero in prime field");
    return pow(a, p - 2);
  }
  Value from_int(long long v) const {
    long long r = v % (long long)p;
    if (r < 0) r += (long long)p;
    return (Value)r;
  }
  Value from_rat(const Rat& v) const {
    Int num = v.get_num(), den = v.get_den();
    Value n = from_mpz(num), d = from_mpz(den);
    return mul(n, inv(d));
  }
  Value from_mpz(const Int& v) const {
    Int r = v % Int((unsigned long)p);
    if (r < 0) r += Int((unsigned long)p);
    return r.get_ui();
  }
};

// Runtime tag mirroring the two field choices, for interfaces that carry
// the field as data rather than as a template parameter.
struct FieldTag {
  enum Kind { kRationals, kPrimeField } kind = kRationals;
  uint64_t p = 0;  // modulus when kind == kPrimeField

  static FieldTag rationals() { return FieldTag{kRationals, 0}; }
  static FieldTag prime(uint64_t p) { return FieldTag{kPrimeField, p}; }
};

inline bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// The two smallest primes above 2^20 that do not divide `avoid`.
// Used by the modular rank fast path; deterministic by construction.
inline std::pair<uint64_t, uint64_t> modular_rank_primes(uint64_t avoid = 1) {
  uint64_t found[2] = {0, 0};
  int got = 0;
  for (uint64_t c = (1u << 20) + 1; got < 2; ++c) {
    if (!is_prime_u64(c)) continue;
    if (avoid % c == 0) continue;
    found[got++] = c;
  }
  return {found[0], found[1]};
}

}  // namespace cyclokappa

#endif
