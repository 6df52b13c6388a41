#ifndef CYCLOKAPPA_CYCLOTOMIC_HPP
#define CYCLOKAPPA_CYCLOTOMIC_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cyclokappa/fields.hpp"

namespace cyclokappa {

// An N-th root of unity, stored as the exponent of the fixed primitive
// root.  All arithmetic happens on exponents mod N; no floating point.
struct UnityRoot {
  uint32_t exp = 0;
  bool operator==(const UnityRoot&) const = default;
  auto operator<=>(const UnityRoot&) const = default;
};

// Levels of the special shape N = q p^M with p in {2,3}, q = 6 - p.
struct SpecialForm {
  uint32_t p = 0;  // 2 or 3
  uint32_t q = 0;  // 6 - p
  uint32_t M = 0;  // N = q * p^M
};

struct Level {
  uint32_t N = 0;
  std::vector<std::pair<uint32_t, uint32_t>> factorization;  // (prime, exponent)
  uint64_t phi = 0;
  uint32_t nu_count = 0;  // number of distinct prime divisors
  std::optional<SpecialForm> special_form;

  UnityRoot root(int64_t e) const {
    int64_t r = e % (int64_t)N;
    if (r < 0) r += N;
    return UnityRoot{(uint32_t)r};
  }
  UnityRoot one() const { return UnityRoot{0}; }
  UnityRoot mul(UnityRoot a, UnityRoot b) const { return root((int64_t)a.exp + b.exp); }
  UnityRoot div(UnityRoot a, UnityRoot b) const { return root((int64_t)a.exp - b.exp); }
  UnityRoot inv(UnityRoot a) const { return root(-(int64_t)a.exp); }
  UnityRoot pow(UnityRoot a, int64_t k) const { return root((int64_t)a.exp * k); }

  // membership in mu_{N/q} (only meaningful for special levels)
  bool in_mu_over_q(UnityRoot x) const;
  // membership in nu_N = { zeta^m : m = 1 mod q }
  bool in_nu(UnityRoot x) const;
};

Level make_level(uint32_t N);

// p-adic order of the exponent of x; rejects x = 1 and non-special levels.
uint32_t valuation(const Level& lv, UnityRoot x);

// nu_N in ascending exponent order; size N/q = p^M.
std::vector<UnityRoot> nu_elements(const Level& lv);

// U(n) = mu_{p^n} inside mu_N, ascending exponents; requires 0 <= n <= M.
std::vector<UnityRoot> subgroup_U(const Level& lv, uint32_t n);

// Lambda_c(x) = { eps in nu_N : eps^(c p^v(x)) = x } for x in mu_N \ {1}.
std::vector<UnityRoot> lambda_set(const Level& lv, int c, UnityRoot x);
std::vector<UnityRoot> lambda_set_general(const Level& lv, int c, UnityRoot x);

// ---------------------------------------------------------------------------
// Galois group G = { a mod N : gcd(a,N) = 1, a = 1 mod q }, acting on roots
// by exponent multiplication.  Cyclic of order p^M.
// ---------------------------------------------------------------------------

struct GaloisElement {
  uint32_t unit = 1;  // residue mod N
  bool operator==(const GaloisElement&) const = default;
  auto operator<=>(const GaloisElement&) const = default;
};

std::vector<GaloisElement> galois_group(const Level& lv);
// The unique subgroup of order p^n, ascending units; requires 0 <= n <= M.
std::vector<GaloisElement> galois_subgroup(const Level& lv, uint32_t n);

inline UnityRoot galois_apply(const Level& lv, GaloisElement s, UnityRoot x) {
  return lv.root((int64_t)s.unit * x.exp);
}
inline GaloisElement galois_compose(const Level& lv, GaloisElement a, GaloisElement b) {
  return GaloisElement{(uint32_t)((uint64_t)a.unit * b.unit % lv.N)};
}

// Group algebra of G over an exact field; enough structure for products
// and the augmentation map.
template <class F>
struct GroupAlgebra {
  using Value = typename F::Value;
  std::map<GaloisElement, Value> coeffs;

  static GroupAlgebra unit_element(const F& f, GaloisElement g) {
    GroupAlgebra a;
    a.coeffs[g] = f.one();
    return a;
  }
  void add_term(const F& f, GaloisElement g, const Value& c) {
    auto it = coeffs.find(g);
    if (it == coeffs.end()) {
      if (!f.is_zero(c)) coeffs[g] = c;
    } else {
      it->second = f.add(it->second, c);
      if (f.is_zero(it->second)) coeffs.erase(it);
    }
  }
  GroupAlgebra multiply(const F& f, const Level& lv, const GroupAlgebra& o) const {
    GroupAlgebra out;
    for (const auto& [g, c] : coeffs)
      for (const auto& [h, d] : o.coeffs)
        out.add_term(f, galois_compose(lv, g, h), f.mul(c, d));
    return out;
  }
  Value augmentation(const F& f) const {
    Value s = f.zero();
    for (const auto& [g, c] : coeffs) s = f.add(s, c);
    return s;
  }
};

}  // namespace cyclokappa

#endif
