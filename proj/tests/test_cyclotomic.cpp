#include <random>
#include <set>

#include "doctest.h"

#include "cyclokappa/cyclotomic.hpp"

using namespace cyclokappa;

namespace {

// oracle: factor by trial division, independently of make_level
std::vector<std::pair<uint32_t, uint32_t>> trial_factor(uint32_t n) {
  std::vector<std::pair<uint32_t, uint32_t>> out;
  for (uint32_t p = 2; p <= n; ++p) {
    if (n % p) continue;
    uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::set<uint32_t> exps(const std::vector<UnityRoot>& v) {
  std::set<uint32_t> out;
  for (auto r : v) out.insert(r.exp);
  return out;
}

}  // namespace

TEST_CASE("make_level") {
  auto l9 = make_level(9);
  CHECK(l9.phi == 6);
  CHECK(l9.nu_count == 1);
  REQUIRE(l9.special_form.has_value());
  CHECK(l9.special_form->p == 3);
  CHECK(l9.special_form->q == 3);
  CHECK(l9.special_form->M == 1);

  auto l12 = make_level(12);
  CHECK(l12.phi == 4);
  CHECK(l12.nu_count == 2);
  CHECK(!l12.special_form.has_value());

  auto l415 = make_level(415);
  CHECK(l415.phi == 328);
  CHECK(l415.nu_count == 2);
  CHECK(l415.factorization == trial_factor(415));

  CHECK(make_level(4).special_form.has_value());   // 4 * 2^0
  CHECK(make_level(3).special_form.has_value());   // 3 * 3^0
  CHECK(make_level(16).special_form.has_value());  // 4 * 2^2
  CHECK(!make_level(6).special_form.has_value());
  CHECK(!make_level(1).special_form.has_value());

  CHECK_THROWS_AS(make_level(0), std::invalid_argument);

  // phi and factorization consistency across a range
  for (uint32_t n = 1; n <= 100; ++n) {
    auto lv = make_level(n);
    uint64_t prod = 1;
    for (auto [p, e] : lv.factorization)
      for (uint32_t i = 0; i < e; ++i) prod *= p;
    CHECK(prod == n);
    uint64_t phi = 1;
    for (auto [p, e] : lv.factorization) {
      uint64_t pe = 1;
      for (uint32_t i = 0; i + 1 < e; ++i) pe *= p;
      phi *= pe * (p - 1);
    }
    CHECK(lv.phi == phi);
  }
}

TEST_CASE("valuation") {
  CHECK(valuation(make_level(27), UnityRoot{9}) == 2);
  CHECK(valuation(make_level(9), UnityRoot{3}) == 1);
  CHECK(valuation(make_level(8), UnityRoot{6}) == 1);
  CHECK_THROWS_AS(valuation(make_level(9), UnityRoot{0}), std::invalid_argument);
  CHECK_THROWS_AS(valuation(make_level(12), UnityRoot{3}), std::invalid_argument);
}

TEST_CASE("nu_elements") {
  CHECK(exps(nu_elements(make_level(9))) == std::set<uint32_t>{1, 4, 7});
  CHECK(exps(nu_elements(make_level(8))) == std::set<uint32_t>{1, 5});
  CHECK(exps(nu_elements(make_level(3))) == std::set<uint32_t>{1});
  CHECK_THROWS_AS(nu_elements(make_level(10)), std::invalid_argument);
  // sorted ascending
  auto v = nu_elements(make_level(27));
  CHECK(std::is_sorted(v.begin(), v.end()));
  CHECK(v.size() == 9);
}

TEST_CASE("subgroup_U") {
  CHECK(exps(subgroup_U(make_level(27), 1)) == std::set<uint32_t>{0, 9, 18});
  CHECK(exps(subgroup_U(make_level(9), 0)) == std::set<uint32_t>{0});
  CHECK(exps(subgroup_U(make_level(16), 2)) == std::set<uint32_t>{0, 4, 8, 12});
  CHECK_THROWS_AS(subgroup_U(make_level(9), 2), std::invalid_argument);
}

TEST_CASE("lambda sets") {
  auto l9 = make_level(9);
  CHECK(exps(lambda_set(l9, +1, UnityRoot{3})) == std::set<uint32_t>{1, 4, 7});
  CHECK(lambda_set(l9, -1, UnityRoot{3}).empty());
  auto l8 = make_level(8);
  CHECK(exps(lambda_set(l8, +1, UnityRoot{2})) == std::set<uint32_t>{1, 5});
  CHECK_THROWS_AS(lambda_set(l9, +1, UnityRoot{0}), std::invalid_argument);

  // |Lambda_+| + |Lambda_-| equals the brute-force count over nu union nu^{-1}
  for (uint32_t N : {8u, 9u, 16u, 27u, 81u}) {
    auto lv = make_level(N);
    uint32_t q = lv.special_form->q, p = lv.special_form->p;
    for (uint32_t e = q; e < N; e += q) {
      UnityRoot x{e};
      uint32_t v = valuation(lv, x);
      uint64_t pv = 1;
      for (uint32_t i = 0; i < v; ++i) pv *= p;
      size_t brute = 0;
      for (const auto& eps : nu_elements(lv)) {
        if (lv.pow(eps, (int64_t)pv) == x) ++brute;
        if (lv.pow(lv.inv(eps), (int64_t)pv) == x) ++brute;
      }
      CHECK(lambda_set(lv, 1, x).size() + lambda_set(lv, -1, x).size() == brute);
      CHECK(brute > 0);  // the union is never empty
    }
  }
}

TEST_CASE("galois group structure") {
  auto l9 = make_level(9);
  auto g = galois_group(l9);
  REQUIRE(g.size() == 3);  // order N/q = p^M

  // group action: sigma_a(sigma_b(x)) = sigma_ab(x)
  for (auto a : g)
    for (auto b : g)
      for (uint32_t e = 0; e < 9; ++e) {
        UnityRoot x{e};
        CHECK(galois_apply(l9, a, galois_apply(l9, b, x)) ==
              galois_apply(l9, galois_compose(l9, a, b), x));
      }

  // nu_N is stable under every element
  auto nu = exps(nu_elements(l9));
  for (auto a : g) {
    std::set<uint32_t> image;
    for (auto e : nu) image.insert(galois_apply(l9, a, UnityRoot{e}).exp);
    CHECK(image == nu);
  }

  // {eta * eps : eta in U(n)} = {sigma(eps) : sigma in G(n)}
  for (uint32_t N : {9u, 27u, 16u}) {
    auto lv = make_level(N);
    for (uint32_t n = 0; n <= lv.special_form->M; ++n) {
      auto U = subgroup_U(lv, n);
      auto G = galois_subgroup(lv, n);
      CHECK(U.size() == G.size());
      for (const auto& eps : nu_elements(lv)) {
        std::set<uint32_t> lhs, rhs;
        for (auto eta : U) lhs.insert(lv.mul(eta, eps).exp);
        for (auto s : G) rhs.insert(galois_apply(lv, s, eps).exp);
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("group algebra") {
  auto l27 = make_level(27);
  auto g = galois_group(l27);
  REQUIRE(g.size() == 9);
  PrimeField f3(3);

  std::mt19937 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    GroupAlgebra<PrimeField> a, b;
    for (const auto& e : g) {
      a.add_term(f3, e, rng() % 3);
      b.add_term(f3, e, rng() % 3);
    }
    auto prod = a.multiply(f3, l27, b);
    CHECK(prod.augmentation(f3) ==
          f3.mul(a.augmentation(f3), b.augmentation(f3)));
  }

  // associativity spot check
  GroupAlgebra<PrimeField> x = GroupAlgebra<PrimeField>::unit_element(f3, g[1]);
  GroupAlgebra<PrimeField> y = GroupAlgebra<PrimeField>::unit_element(f3, g[2]);
  GroupAlgebra<PrimeField> z = GroupAlgebra<PrimeField>::unit_element(f3, g[4]);
  auto left = x.multiply(f3, l27, y).multiply(f3, l27, z);
  auto right = x.multiply(f3, l27, y.multiply(f3, l27, z));
  CHECK(left.coeffs == right.coeffs);
}
