#include "cyclokappa/cyclotomic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cyclokappa {

Level make_level(uint32_t N) {
  if (N == 0) throw std::invalid_argument("level must be a positive integer");
  Level lv;
  lv.N = N;
  uint32_t m = N;
  for (uint32_t d = 2; (uint64_t)d * d <= m; ++d) {
    if (m % d) continue;
    uint32_t e = 0;
    while (m % d == 0) {
      m /= d;
      ++e;
    }
    lv.factorization.emplace_back(d, e);
  }
  if (m > 1) lv.factorization.emplace_back(m, 1);
  lv.phi = 1;
  for (auto [p, e] : lv.factorization) {
    uint64_t pe = 1;
    for (uint32_t i = 0; i + 1 < e; ++i) pe *= p;
    lv.phi *= pe * (p - 1);
  }
  lv.nu_count = (uint32_t)lv.factorization.size();
  for (uint32_t p : {2u, 3u}) {
    uint32_t q = 6 - p;
    if (N % q) continue;
    uint32_t t = N / q, M = 0;
    while (t % p == 0) {
      t /= p;
      ++M;
    }
    if (t == 1) {
      lv.special_form = SpecialForm{p, q, M};
      break;
    }
  }
  return lv;
}

bool Level::in_mu_over_q(UnityRoot x) const {
  if (!special_form) return false;
  return x.exp % special_form->q == 0;
}

bool Level::in_nu(UnityRoot x) const {
  if (!special_form) return false;
  return x.exp % special_form->q == 1 % special_form->q;
}

static const SpecialForm& require_special(const Level& lv) {
  if (!lv.special_form)
    throw std::invalid_argument("level " + std::to_string(lv.N) +
                                " is not of the form q*p^M with p in {2,3}");
  return *lv.special_form;
}

uint32_t valuation(const Level& lv, UnityRoot x) {
  const auto& sf = require_special(lv);
  if (x.exp == 0) throw std::invalid_argument("valuation undefined at the identity root");
  uint32_t m = x.exp, v = 0;
  while (m % sf.p == 0) {
    m /= sf.p;
    ++v;
  }
  return v;
}

std::vector<UnityRoot> nu_elements(const Level& lv) {
  const auto& sf = require_special(lv);
  std::vector<UnityRoot> out;
  out.reserve(lv.N / sf.q);
  for (uint32_t m = 1 % sf.q; m < lv.N; m += sf.q) out.push_back(UnityRoot{m});
  return out;
}

std::vector<UnityRoot> subgroup_U(const Level& lv, uint32_t n) {
  const auto& sf = require_special(lv);
  if (n > sf.M) throw std::invalid_argument("subgroup index exceeds M");
  uint32_t pn = 1;
  for (uint32_t i = 0; i < n; ++i) pn *= sf.p;
  uint32_t step = lv.N / pn;
  std::vector<UnityRoot> out;
  out.reserve(pn);
  for (uint32_t e = 0; e < lv.N; e += step) out.push_back(UnityRoot{e});
  return out;
}

std::vector<UnityRoot> lambda_set_general(const Level& lv, int c, UnityRoot x) {
  const auto& sf = require_special(lv);
  if (x.exp == 0) throw std::invalid_argument("lambda set undefined at the identity root");
  if (c != 1 && c != -1) throw std::invalid_argument("sign must be +1 or -1");
  uint32_t v = valuation(lv, x);
  uint64_t pv = 1;
  for (uint32_t i = 0; i < v; ++i) pv *= sf.p;
  std::vector<UnityRoot> out;
  for (uint32_t m = 1 % sf.q; m < lv.N; m += sf.q) {
    int64_t e = (int64_t)(c) * (int64_t)pv * m;
    if (lv.root(e).exp == x.exp) out.push_back(UnityRoot{m});
  }
  return out;
}

std::vector<UnityRoot> lambda_set(const Level& lv, int c, UnityRoot x) {
  return lambda_set_general(lv, c, x);
}

std::vector<GaloisElement> galois_group(const Level& lv) {
  const auto& sf = require_special(lv);
  std::vector<GaloisElement> out;
  for (uint32_t a = 1; a < lv.N; a += sf.q)
    if (std::gcd(a, lv.N) == 1) out.push_back(GaloisElement{a});
  return out;
}

std::vector<GaloisElement> galois_subgroup(const Level& lv, uint32_t n) {
  const auto& sf = require_special(lv);
  if (n > sf.M) throw std::invalid_argument("subgroup index exceeds M");
  uint64_t pn = 1;
  for (uint32_t i = 0; i < n; ++i) pn *= sf.p;
  std::vector<GaloisElement> out;
  for (const auto& g : galois_group(lv)) {
    // G is cyclic of order p^M, so the order-p^n subgroup is exactly the
    // set of elements killed by p^n
    uint64_t x = 1, base = g.unit, e = pn;
    while (e) {
      if (e & 1) x = x * base % lv.N;
      base = base * base % lv.N;
      e >>= 1;
    }
    if (x == 1) out.push_back(g);
  }
  return out;
}

}  // namespace cyclokappa
