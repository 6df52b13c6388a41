#include <random>

#include "doctest.h"

#include "cyclokappa/coproduct.hpp"

using namespace cyclokappa;

namespace {

IIWord word(Letter a0, std::vector<Letter> mid, Letter aend) {
  return IIWord{a0, std::move(mid), aend};
}

// independent oracle: recursive subsequence enumeration (no bitmasks),
// normalization applied inline
void oracle_rec(const std::vector<Letter>& a, uint32_t next, std::vector<uint32_t>& picked,
                TensorElement& out) {
  const uint32_t k = (uint32_t)a.size() - 2;
  if (next == k + 1) {
    std::vector<uint32_t> cuts;
    cuts.push_back(0);
    for (uint32_t i : picked) cuts.push_back(i);
    cuts.push_back(k + 1);
    SymbolMonomial left;
    for (size_t j = 0; j + 1 < cuts.size(); ++j) {
      IIWord f;
      f.a0 = a[cuts[j]];
      f.mid.assign(a.begin() + cuts[j] + 1, a.begin() + cuts[j + 1]);
      f.a_end = a[cuts[j + 1]];
      if (f.mid.empty()) continue;
      bool allz = true;
      for (Letter l : f.mid)
        if (!is_zero_letter(l)) allz = false;
      if (allz) return;  // term dies
      left.push(f);
    }
    IIWord right;
    right.a0 = a.front();
    for (uint32_t i : picked) right.mid.push_back(a[i]);
    right.a_end = a.back();
    if (right.mid.empty()) {
      out.add(left, unit_word(), Rat(1));
      return;
    }
    bool allz = true;
    for (Letter l : right.mid)
      if (!is_zero_letter(l)) allz = false;
    if (allz) return;
    out.add(left, right, Rat(1));
    return;
  }
  oracle_rec(a, next + 1, picked, out);  // skip position `next`
  picked.push_back(next);
  oracle_rec(a, next + 1, picked, out);
  picked.pop_back();
}

TensorElement oracle_coproduct(const IIWord& w) {
  TensorElement out;
  std::vector<Letter> a;
  a.push_back(w.a0);
  for (Letter l : w.mid) a.push_back(l);
  a.push_back(w.a_end);
  std::vector<uint32_t> picked;
  oracle_rec(a, 1, picked, out);
  return out;
}

bool coassociative(const IIWord& w) {
  auto d = goncharov_coproduct(w);
  std::map<std::tuple<SymbolMonomial, SymbolMonomial, IIWord>, Rat> lhs, rhs;
  for (const auto& [mw, c] : d.terms) {
    for (const auto& [lr, c2] : coproduct_on_monomial(mw.first)) {
      auto key = std::make_tuple(lr.first, lr.second, mw.second);
      lhs[key] += c * c2;
    }
    if (mw.second == unit_word()) {
      rhs[{mw.first, SymbolMonomial{}, unit_word()}] += c;
      continue;
    }
    for (const auto& [mw2, c2] : goncharov_coproduct(mw.second).terms)
      rhs[{mw.first, mw2.first, mw2.second}] += c * c2;
  }
  for (auto it = lhs.begin(); it != lhs.end();)
    it = sgn(it->second) == 0 ? lhs.erase(it) : std::next(it);
  for (auto it = rhs.begin(); it != rhs.end();)
    it = sgn(it->second) == 0 ? rhs.erase(it) : std::next(it);
  return lhs == rhs;
}

}  // namespace

TEST_CASE("normalize") {
  // empty middle is the unit
  auto u = normalize(word(kZeroLetter, {}, root_letter(0)));
  REQUIRE(u.terms.size() == 1);
  CHECK(u.terms.begin()->first.factors.empty());
  CHECK(u.terms.begin()->second == Rat(1));
  // all-zero middle vanishes
  CHECK(normalize(word(kZeroLetter, {kZeroLetter, kZeroLetter}, root_letter(0)))
            .terms.empty());
  // anything else is kept verbatim
  auto w = word(kZeroLetter, {root_letter(1)}, root_letter(0));
  auto n = normalize(w);
  REQUIRE(n.terms.size() == 1);
  REQUIRE(n.terms.begin()->first.factors.size() == 1);
  CHECK(n.terms.begin()->first.factors[0] == w);
}

TEST_CASE("weight-two coproduct pattern") {
  // generic distinct letters: exactly the four surviving terms
  IIWord w = word(root_letter(1), {root_letter(2), root_letter(3)}, root_letter(4));
  auto d = goncharov_coproduct(w);
  REQUIRE(d.terms.size() == 4);

  SymbolMonomial mw;
  mw.push(w);
  CHECK(d.terms.at({mw, unit_word()}) == Rat(1));  // w (x) 1
  CHECK(d.terms.at({SymbolMonomial{}, w}) == Rat(1));  // 1 (x) w

  SymbolMonomial m1;
  m1.push(word(root_letter(2), {root_letter(3)}, root_letter(4)));
  CHECK(d.terms.at({m1, word(root_letter(1), {root_letter(2)}, root_letter(4))}) ==
        Rat(1));
  SymbolMonomial m2;
  m2.push(word(root_letter(1), {root_letter(2)}, root_letter(3)));
  CHECK(d.terms.at({m2, word(root_letter(1), {root_letter(3)}, root_letter(4))}) ==
        Rat(1));
}

TEST_CASE("coproduct of the unit and of vanishing words") {
  auto d = goncharov_coproduct(word(kZeroLetter, {}, root_letter(0)));
  REQUIRE(d.terms.size() == 1);
  CHECK(d.terms.begin()->first.first.factors.empty());
  CHECK(d.terms.begin()->first.second == unit_word());

  CHECK(goncharov_coproduct(word(kZeroLetter, {kZeroLetter, kZeroLetter}, root_letter(0)))
            .terms.empty());
}

TEST_CASE("full expansion matches an independent enumeration") {
  // I(0; z3, 0, z3^2; 1) at N = 3, plus a batch of random words
  IIWord w = word(kZeroLetter, {root_letter(1), kZeroLetter, root_letter(2)},
                  root_letter(0));
  CHECK(goncharov_coproduct(w) == oracle_coproduct(w));

  std::mt19937 rng(20260811);
  for (int trial = 0; trial < 120; ++trial) {
    uint32_t k = 1 + rng() % 5;
    std::vector<Letter> mid;
    bool nonzero = false;
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t pick = rng() % 9;
      Letter l = pick == 0 ? kZeroLetter : root_letter(pick - 1);
      if (!is_zero_letter(l)) nonzero = true;
      mid.push_back(l);
    }
    if (!nonzero) continue;
    IIWord v = word(rng() % 2 ? kZeroLetter : root_letter(rng() % 8), mid,
                    root_letter(rng() % 8));
    CHECK(goncharov_coproduct(v) == oracle_coproduct(v));
  }
}

TEST_CASE("grading, counit and depth bookkeeping") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 80; ++trial) {
    uint32_t k = 1 + rng() % 5;
    std::vector<Letter> mid;
    bool nonzero = false;
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t pick = rng() % 9;
      Letter l = pick == 0 ? kZeroLetter : root_letter(pick - 1);
      if (!is_zero_letter(l)) nonzero = true;
      mid.push_back(l);
    }
    if (!nonzero) continue;
    IIWord w = word(kZeroLetter, mid, root_letter(0));
    auto d = goncharov_coproduct(w);
    // counit terms
    SymbolMonomial mw;
    mw.push(w);
    CHECK(d.terms.at({SymbolMonomial{}, w}) == Rat(1));
    CHECK(d.terms.at({mw, unit_word()}) == Rat(1));
    for (const auto& [t, c] : d.terms) {
      uint32_t rw = t.second == unit_word() ? 0 : t.second.weight();
      uint32_t rd = t.second == unit_word() ? 0 : t.second.depth();
      CHECK(t.first.weight() + rw == w.weight());
      CHECK(t.first.depth() + rd == w.depth());
    }
  }
}

TEST_CASE("coassociativity") {
  // exhaustive: weight <= 3 over {0} union mu_4
  std::vector<Letter> letters{kZeroLetter, root_letter(0), root_letter(1), root_letter(2),
                              root_letter(3)};
  for (uint32_t k = 0; k <= 3; ++k) {
    std::vector<uint32_t> idx(k, 0);
    while (true) {
      for (Letter a0 : letters)
        for (Letter aend : letters) {
          std::vector<Letter> mid;
          for (uint32_t i : idx) mid.push_back(letters[i]);
          IIWord w = word(a0, mid, aend);
          CHECK(coassociative(w));
        }
      uint32_t i = k;
      while (i > 0 && ++idx[i - 1] == letters.size()) idx[--i] = 0;
      if (i == 0) break;
    }
  }

  // random words of weight <= 5 over {0} union mu_8
  std::mt19937 rng(777);
  int done = 0;
  while (done < 100) {
    uint32_t k = 1 + rng() % 5;
    std::vector<Letter> mid;
    for (uint32_t i = 0; i < k; ++i) {
      uint32_t pick = rng() % 9;
      mid.push_back(pick == 0 ? kZeroLetter : root_letter(pick - 1));
    }
    IIWord w = word(rng() % 2 ? kZeroLetter : root_letter(rng() % 8), mid,
                    root_letter(rng() % 8));
    CHECK(coassociative(w));
    ++done;
  }
}

TEST_CASE("depth-leading truncation") {
  SUBCASE("depth one, no zeros") {
    // I(0; e1; e2) -> 1 (x) w + I(0; e1/e2; 1) (x) 1
    IIWord w = word(kZeroLetter, {root_letter(1)}, root_letter(3));
    auto d = depth_leading_coproduct(5, w);
    REQUIRE(d.terms.size() == 2);
    CHECK(d.terms.at({SymbolMonomial{}, w}) == Rat(1));
    SymbolMonomial m;
    m.push(word(kZeroLetter, {root_letter(3)}, root_letter(0)));  // e1/e2 = e^{1-3} = e3 mod 5
    CHECK(d.terms.at({m, unit_word()}) == Rat(1));
  }
  SUBCASE("depth two, all runs zero: the three-term weight-2 pattern") {
    IIWord w = word(kZeroLetter, {root_letter(1), root_letter(2)}, root_letter(0));
    auto d = depth_leading_coproduct(5, w);
    // 1 (x) w, plus i=1: (e1/e2)(x)I(0;e2;1), i=2: (e2/1)(x)I(0;e1;1),
    // minus i=1 right-cut: (e2/e1)(x)I(0;e1;1)
    REQUIRE(d.terms.size() == 4);
    CHECK(d.terms.at({SymbolMonomial{}, w}) == Rat(1));
    SymbolMonomial l1;
    l1.push(word(kZeroLetter, {root_letter(4)}, root_letter(0)));  // 1-2 mod 5
    CHECK(d.terms.at({l1, word(kZeroLetter, {root_letter(2)}, root_letter(0))}) == Rat(1));
    SymbolMonomial l2;
    l2.push(word(kZeroLetter, {root_letter(2)}, root_letter(0)));  // 2-0
    CHECK(d.terms.at({l2, word(kZeroLetter, {root_letter(1)}, root_letter(0))}) == Rat(1));
    SymbolMonomial l3;
    l3.push(word(kZeroLetter, {root_letter(1)}, root_letter(0)));  // 2-1
    CHECK(d.terms.at({l3, word(kZeroLetter, {root_letter(1)}, root_letter(0))}) ==
          Rat(-1));
  }
  SUBCASE("all-zero middle maps to zero") {
    CHECK(depth_leading_coproduct(
              4, word(kZeroLetter, {kZeroLetter, kZeroLetter}, root_letter(1)))
              .terms.empty());
  }
  SUBCASE("rejects words outside the canonical shape") {
    CHECK_THROWS_AS(
        depth_leading_coproduct(4, word(root_letter(1), {root_letter(2)}, root_letter(0))),
        std::invalid_argument);
    CHECK_THROWS_AS(
        depth_leading_coproduct(4, word(kZeroLetter, {root_letter(2)}, kZeroLetter)),
        std::invalid_argument);
  }
  SUBCASE("weight and depth additivity with binomial runs") {
    IIWord w = word(kZeroLetter,
                    {kZeroLetter, root_letter(1), kZeroLetter, root_letter(3),
                     kZeroLetter, kZeroLetter},
                    root_letter(0));
    auto d = depth_leading_coproduct(8, w);
    for (const auto& [t, c] : d.terms) {
      uint32_t rw = t.second == unit_word() ? 0 : t.second.weight();
      CHECK(t.first.weight() + rw == w.weight());
      // every left factor is a single depth-one word I(0; x, {0}^r; 1)
      if (t.second == w) continue;
      for (const auto& f : t.first.factors) {
        CHECK(f.depth() == 1);
        CHECK(is_zero_letter(f.a0));
        CHECK(f.a_end == root_letter(0));
        CHECK(!is_zero_letter(f.mid[0]));
      }
    }
  }
}

TEST_CASE("word grammar") {
  auto w = parse_word("I(0; e1, 0, e3; 1)", 5);
  CHECK(w.a0 == kZeroLetter);
  REQUIRE(w.mid.size() == 3);
  CHECK(w.mid[0] == root_letter(1));
  CHECK(w.mid[1] == kZeroLetter);
  CHECK(w.mid[2] == root_letter(3));
  CHECK(w.a_end == root_letter(0));
  CHECK(render_word(w) == "I(0; e1, 0, e3; 1)");

  CHECK(parse_word("I(0; ; 1)", 3).mid.empty());
  CHECK_THROWS_AS(parse_word("I(0; e7; 1)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("I(0; x; 1)", 5), std::invalid_argument);
  CHECK_THROWS_AS(parse_word("I(0; e1; 1) junk", 5), std::invalid_argument);

  CHECK(render_tensor(goncharov_coproduct(parse_word("I(0; 0, 0; 1)", 4))) == "0");
  CHECK(render_tensor(goncharov_coproduct(parse_word("I(0; ; 1)", 4))) == "1 (x) 1");
}
