#include <random>

#include "doctest.h"

#include "cyclokappa/elimination.hpp"

using namespace cyclokappa;

namespace {

SparseMat<RationalField> from_dense(const std::vector<std::vector<long>>& d) {
  SparseMat<RationalField> m;
  m.ncols = d.empty() ? 0 : (uint32_t)d[0].size();
  for (const auto& row : d) {
    SparseVec<RationalField> r;
    for (uint32_t j = 0; j < row.size(); ++j)
      if (row[j]) r.entries.emplace_back(j, Rat(row[j]));
    m.rows.push_back(std::move(r));
  }
  return m;
}

// independent oracle: dense fraction Gaussian elimination
uint32_t dense_rank_oracle(std::vector<std::vector<Rat>> a) {
  uint32_t rank = 0;
  const size_t rows = a.size();
  if (rows == 0) return 0;
  const size_t cols = a[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t piv = r;
    while (piv < rows && sgn(a[piv][c]) == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || sgn(a[i][c]) == 0) continue;
      Rat m = a[i][c] / a[r][c];
      for (size_t j = c; j < cols; ++j) a[i][j] -= m * a[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("rank on small matrices") {
  CHECK(rank(from_dense({{1, 2}, {2, 4}})) == 1);

  auto m = from_dense({{1, 1}, {1, -1}});
  CHECK(rank(m) == 2);
  SparseMat<PrimeField> m2;
  m2.ncols = 2;
  PrimeField f2(2);
  for (auto& row : m.rows) {
    SparseVec<PrimeField> r;
    for (auto& [c, v] : row.entries) {
      uint64_t x = f2.from_rat(v);
      if (x) r.entries.emplace_back(c, x);
    }
    m2.rows.push_back(std::move(r));
  }
  CHECK(rank(f2, m2) == 1);  // rows collapse in characteristic 2

  CHECK(rank(SparseMat<RationalField>{4, {}}) == 0);
  CHECK(cokernel_dim(SparseMat<RationalField>{4, {}}) == 4);
  CHECK(cokernel_dim(from_dense({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 0);
}

TEST_CASE("rank handles rational entries by row scaling") {
  SparseMat<RationalField> m;
  m.ncols = 3;
  SparseVec<RationalField> r1, r2;
  r1.entries = {{0, Rat(1, 2)}, {1, Rat(1, 3)}};
  r2.entries = {{0, Rat(3)}, {1, Rat(2)}};
  m.rows = {r1, r2};  // proportional after scaling
  CHECK(rank(m) == 1);
}

TEST_CASE("modular fast path agrees with fraction-free elimination") {
  std::mt19937 rng(20240811);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::uniform_int_distribution<int> dims(1, 60);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  for (int trial = 0; trial < 200; ++trial) {
    uint32_t nr = dims(rng), nc = dims(rng);
    double dens = density(rng);
    std::bernoulli_distribution keep(dens);
    std::vector<std::vector<long>> d(nr, std::vector<long>(nc, 0));
    std::vector<std::vector<Rat>> dd(nr, std::vector<Rat>(nc, Rat(0)));
    for (uint32_t i = 0; i < nr; ++i)
      for (uint32_t j = 0; j < nc; ++j)
        if (keep(rng)) {
          d[i][j] = entry(rng);
          dd[i][j] = Rat(d[i][j]);
        }
    auto m = from_dense(d);
    RankReport fast = rank_with_report(m);
    RankOptions pure;
    pure.force_rational = true;
    RankReport slow = rank_with_report(m, pure);
    uint32_t oracle = dense_rank_oracle(dd);
    CHECK(fast.rank == oracle);
    CHECK(slow.rank == oracle);
    CHECK(slow.method == RankMethod::kRational);
    // rank + kernel dimension = number of columns
    RationalField f;
    CHECK(fast.rank + kernel_basis(f, m).size() == nc);
  }
}

TEST_CASE("kernel basis") {
  RationalField f;
  auto k1 = kernel_basis(f, from_dense({{1, 1}}));
  REQUIRE(k1.size() == 1);
  // (1, -1) up to scale
  REQUIRE(k1[0].entries.size() == 2);
  CHECK(k1[0].entries[0].second == -k1[0].entries[1].second);

  CHECK(kernel_basis(f, from_dense({{1, 0}, {0, 1}})).empty());

  // kernel vectors actually annihilate the rows
  auto m = from_dense({{2, -1, 3, 0}, {1, 1, 1, 1}});
  for (const auto& v : kernel_basis(f, m)) {
    for (const auto& row : m.rows) {
      Rat dot(0);
      for (const auto& [c, rv] : row.entries)
        for (const auto& [c2, vv] : v.entries)
          if (c == c2) dot += rv * vv;
      CHECK(sgn(dot) == 0);
    }
  }
}

TEST_CASE("quotient presentations") {
  RationalField f;
  SUBCASE("single relation") {
    SparseMat<RationalField> rel;
    rel.ncols = 2;
    SparseVec<RationalField> r;
    r.entries = {{0, Rat(1)}, {1, Rat(-1)}};
    rel.rows.push_back(r);
    auto q = quotient(2, rel);
    CHECK(q.basis == std::vector<uint32_t>{0});
    REQUIRE(q.rewrite[1].entries.size() == 1);
    CHECK(q.rewrite[1].entries[0].first == 0);
    CHECK(q.rewrite[1].entries[0].second == Rat(1));
  }
  SUBCASE("cascading relations") {
    SparseMat<RationalField> rel;
    rel.ncols = 3;
    SparseVec<RationalField> r1, r2;
    r1.entries = {{2, Rat(1)}};
    r2.entries = {{1, Rat(1)}, {2, Rat(1)}};
    rel.rows = {r1, r2};
    auto q = quotient(3, rel);
    CHECK(q.basis == std::vector<uint32_t>{0});
    CHECK(q.rewrite[1].empty());
    CHECK(q.rewrite[2].empty());
  }
  SUBCASE("rewrite is idempotent and kills relations") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> entry(-4, 4);
    for (int trial = 0; trial < 50; ++trial) {
      uint32_t ambient = 12;
      SparseMat<RationalField> rel;
      rel.ncols = ambient;
      for (int k = 0; k < 8; ++k) {
        SparseVec<RationalField> r;
        for (uint32_t j = 0; j < ambient; ++j)
          if (rng() % 4 == 0) {
            int v = entry(rng);
            if (v) r.entries.emplace_back(j, Rat(v));
          }
        rel.rows.push_back(std::move(r));
      }
      auto q = quotient(ambient, rel);
      for (const auto& row : rel.rows) CHECK(q.reduce(row).empty());
      for (uint32_t i = 0; i < ambient; ++i) {
        auto once = q.reduce(q.rewrite[i]);
        CHECK(once == q.rewrite[i]);
      }
      for (uint32_t b : q.basis) {
        REQUIRE(q.rewrite[b].entries.size() == 1);
        CHECK(q.rewrite[b].entries[0].first == b);
      }
    }
  }
}

TEST_CASE("nilpotency index") {
  RationalField f;
  using Fn = std::function<SparseVec<RationalField>(const SparseVec<RationalField>&)>;

  Fn zero = [](const SparseVec<RationalField>&) { return SparseVec<RationalField>{}; };
  CHECK(nilpotency_index<RationalField>(f, zero, 5) == 1);

  // single Jordan block of size 3: e0 -> 0, e1 -> e0, e2 -> e1
  Fn shift = [&](const SparseVec<RationalField>& v) {
    SparseVec<RationalField> out;
    for (const auto& [i, c] : v.entries)
      if (i > 0) out.entries.emplace_back(i - 1, c);
    return out;
  };
  CHECK(nilpotency_index<RationalField>(f, shift, 3) == 3);

  Fn identity = [](const SparseVec<RationalField>& v) { return v; };
  CHECK(!nilpotency_index<RationalField>(f, identity, 4).has_value());

  // random strictly upper triangular matrices are always nilpotent
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    uint32_t n = 8;
    std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
    for (uint32_t i = 0; i < n; ++i)
      for (uint32_t j = i + 1; j < n; ++j) a[i][j] = (long)(rng() % 5) - 2;
    Fn apply = [&, a](const SparseVec<RationalField>& v) {
      std::vector<Rat> acc(n, Rat(0));
      for (const auto& [j, c] : v.entries)
        for (uint32_t i = 0; i < n; ++i)
          if (a[i][j]) acc[i] += c * Rat(a[i][j]);
      SparseVec<RationalField> out;
      for (uint32_t i = 0; i < n; ++i)
        if (sgn(acc[i]) != 0) out.entries.emplace_back(i, acc[i]);
      return out;
    };
    auto idx = nilpotency_index<RationalField>(f, apply, n);
    REQUIRE(idx.has_value());
    CHECK(*idx <= n);
  }
}

TEST_CASE("deterministic results") {
  std::mt19937 rng(5150);
  std::vector<std::vector<long>> d(40, std::vector<long>(35, 0));
  for (auto& row : d)
    for (auto& v : row)
      if (rng() % 3 == 0) v = (long)(rng() % 19) - 9;
  auto m = from_dense(d);
  auto a = rank_with_report(m);
  auto b = rank_with_report(m);
  CHECK(a.rank == b.rank);
  CHECK(a.method == b.method);
}
