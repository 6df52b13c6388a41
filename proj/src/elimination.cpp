#include "cyclokappa/elimination.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <numeric>
#include <thread>

namespace cyclokappa {

ZMat to_integer_rows(const SparseMat<RationalField>& m) {
  ZMat z;
  z.ncols = m.ncols;
  z.rows.reserve(m.rows.size());
  for (const auto& row : m.rows) {
    Int den(1);
    for (const auto& e : row.entries) den = lcm(den, Int(e.second.get_den()));
    std::vector<std::pair<uint32_t, Int>> out;
    out.reserve(row.entries.size());
    Int content(0);
    for (const auto& e : row.entries) {
      Int v = Int(e.second.get_num()) * (den / Int(e.second.get_den()));
      content = gcd(content, v);
      out.emplace_back(e.first, std::move(v));
    }
    if (content > 1)
      for (auto& e : out) e.second /= content;
    z.rows.push_back(std::move(out));
  }
  return z;
}

namespace {

// Shared column-sweep elimination over F_p.  Rows are (col, value) lists
// sorted by column; buckets group rows by current leading column.
struct FpRow {
  std::vector<std::pair<uint32_t, uint64_t>> e;
  uint32_t id = 0;
};

FpRankResult fp_sweep(std::vector<FpRow>& rows, uint32_t ncols, uint64_t p,
                      std::vector<std::pair<uint32_t, uint32_t>>* pivots_out = nullptr) {
  PrimeField f(p);
  std::vector<std::vector<uint32_t>> bucket(ncols);
  for (uint32_t i = 0; i < rows.size(); ++i)
    if (!rows[i].e.empty()) bucket[rows[i].e.front().first].push_back(i);

  FpRankResult res;
  std::vector<std::pair<uint32_t, uint64_t>> merged;
  for (uint32_t c = 0; c < ncols; ++c) {
    auto& cand = bucket[c];
    if (cand.empty()) continue;
    // pivot: fewest nonzeros, then earliest row
    uint32_t best = cand[0];
    for (uint32_t ri : cand) {
      if (rows[ri].e.size() < rows[best].e.size() ||
          (rows[ri].e.size() == rows[best].e.size() && rows[ri].id < rows[best].id))
        best = ri;
    }
    const uint64_t inv_lead = f.inv(rows[best].e.front().second);
    for (uint32_t ri : cand) {
      if (ri == best) continue;
      auto& t = rows[ri].e;
      const auto& pv = rows[best].e;
      const uint64_t mult = f.mul(t.front().second, inv_lead);
      merged.clear();
      merged.reserve(t.size() + pv.size());
      size_t i = 1, j = 1;  // leading entries cancel by construction
      while (i < t.size() || j < pv.size()) {
        if (j == pv.size() || (i < t.size() && t[i].first < pv[j].first)) {
          merged.push_back(t[i++]);
        } else if (i == t.size() || pv[j].first < t[i].first) {
          merged.emplace_back(pv[j].first, f.mul(f.neg(mult), pv[j].second));
          ++j;
        } else {
          uint64_t v = f.sub(t[i].second, f.mul(mult, pv[j].second));
          if (v) merged.emplace_back(t[i].first, v);
          ++i;
          ++j;
        }
      }
      t.swap(merged);
      if (!t.empty()) bucket[t.front().first].push_back(ri);
    }
    cand.clear();
    ++res.rank;
    res.pivot_row_ids.push_back(rows[best].id);
    if (pivots_out) pivots_out->emplace_back(c, best);
  }
  std::sort(res.pivot_row_ids.begin(), res.pivot_row_ids.end());
  return res;
}

}  // namespace

FpKernelData fp_kernel_data(const ZMat& m, uint64_t p) {
  PrimeField f(p);
  std::vector<FpRow> rows(m.rows.size());
  for (uint32_t i = 0; i < m.rows.size(); ++i) {
    rows[i].id = i;
    for (const auto& e : m.rows[i]) {
      uint64_t v = f.from_mpz(e.second);
      if (v) rows[i].e.emplace_back(e.first, v);
    }
  }
  std::vector<std::pair<uint32_t, uint32_t>> pivots;  // (col, row slot), col ascending
  FpKernelData out;
  out.rank = fp_sweep(rows, m.ncols, p, &pivots).rank;

  std::vector<int32_t> reduced_at_col(m.ncols, -1);
  // Back-substitute in descending pivot order; fully reduced rows keep
  // entries only at their own pivot column and at free columns.
  std::vector<std::vector<std::pair<uint32_t, uint64_t>>> reduced(pivots.size());
  std::vector<std::pair<uint32_t, uint64_t>> merged;
  for (size_t idx = pivots.size(); idx-- > 0;) {
    auto [c, ri] = pivots[idx];
    auto& row = rows[ri].e;
    // normalize lead to 1
    const uint64_t inv_lead = f.inv(row.front().second);
    for (auto& e : row) e.second = f.mul(e.second, inv_lead);
    // eliminate entries at later pivot columns (their rows are already
    // fully reduced, so each pass only introduces free-column entries)
    std::vector<std::pair<uint32_t, uint64_t>> cur(row.begin(), row.end());
    for (size_t i = 1; i < cur.size();) {
      int32_t pr = reduced_at_col[cur[i].first];
      if (pr < 0) {
        ++i;
        continue;
      }
      const auto& pv = reduced[pr];
      const uint64_t mult = cur[i].second;
      merged.clear();
      merged.reserve(cur.size() + pv.size());
      size_t a = 0, b = 0;
      while (a < cur.size() || b < pv.size()) {
        if (b == pv.size() || (a < cur.size() && cur[a].first < pv[b].first)) {
          merged.push_back(cur[a++]);
        } else if (a == cur.size() || pv[b].first < cur[a].first) {
          merged.emplace_back(pv[b].first, f.mul(f.neg(mult), pv[b].second));
          ++b;
        } else {
          uint64_t v = f.sub(cur[a].second, f.mul(mult, pv[b].second));
          if (v) merged.emplace_back(cur[a].first, v);
          ++a;
          ++b;
        }
      }
      cur.swap(merged);
      i = 1;
      while (i < cur.size() && reduced_at_col[cur[i].first] < 0) ++i;
    }
    reduced[idx] = std::move(cur);
    reduced_at_col[c] = (int32_t)idx;
  }

  out.pivot_cols.reserve(pivots.size());
  for (const auto& [c, ri] : pivots) out.pivot_cols.push_back(c);
  std::vector<bool> is_pivot_col(m.ncols, false);
  for (uint32_t c : out.pivot_cols) is_pivot_col[c] = true;
  std::vector<int32_t> free_index(m.ncols, -1);
  for (uint32_t c = 0; c < m.ncols; ++c) {
    if (is_pivot_col[c]) continue;
    free_index[c] = (int32_t)out.free_cols.size();
    out.free_cols.push_back(c);
  }
  out.columns.resize(out.free_cols.size());
  for (size_t idx = 0; idx < pivots.size(); ++idx) {
    uint32_t pc = pivots[idx].first;
    for (const auto& [c, v] : reduced[idx]) {
      if (c == pc) continue;
      out.columns[free_index[c]].emplace_back(pc, v);
    }
  }
  for (auto& col : out.columns)
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

FpRankResult fp_rank(const ZMat& m, uint64_t p) {
  PrimeField f(p);
  std::vector<FpRow> rows(m.rows.size());
  for (uint32_t i = 0; i < m.rows.size(); ++i) {
    rows[i].id = i;
    rows[i].e.reserve(m.rows[i].size());
    for (const auto& e : m.rows[i]) {
      uint64_t v = f.from_mpz(e.second);
      if (v) rows[i].e.emplace_back(e.first, v);
    }
  }
  return fp_sweep(rows, m.ncols, p);
}

uint32_t rank(const PrimeField& f, const SparseMat<PrimeField>& m) {
  std::vector<FpRow> rows(m.rows.size());
  for (uint32_t i = 0; i < m.rows.size(); ++i) {
    rows[i].id = i;
    for (const auto& e : m.rows[i].entries) {
      uint64_t v = e.second % f.p;
      if (v) rows[i].e.emplace_back(e.first, v);
    }
  }
  return fp_sweep(rows, m.ncols, f.p).rank;
}

namespace {

// Hybrid integer rows: machine words while they fit, arbitrary precision
// after the first overflow.  Cross-multiplied updates with content removal
// keep entries small in practice, so the mpz path is rarely taken.
struct HRow {
  std::vector<std::pair<uint32_t, long long>> s;
  std::vector<std::pair<uint32_t, Int>> b;
  bool big = false;

  bool empty() const { return big ? b.empty() : s.empty(); }
  size_t size() const { return big ? b.size() : s.size(); }
  uint32_t lead() const { return big ? b.front().first : s.front().first; }
  void clear() {
    s.clear();
    b.clear();
    big = false;
  }
  void promote() {
    if (big) return;
    b.reserve(s.size());
    for (const auto& [c, v] : s) b.emplace_back(c, Int((long)v));
    s.clear();
    big = true;
  }
};

HRow to_hrow(const std::vector<std::pair<uint32_t, Int>>& row) {
  HRow h;
  for (const auto& [c, v] : row) {
    if (!h.big && v.fits_slong_p()) {
      h.s.emplace_back(c, (long long)v.get_si());
    } else {
      h.promote();
      h.b.emplace_back(c, v);
    }
  }
  if (h.big)  // keep column order if promotion happened mid-row
    std::sort(h.b.begin(), h.b.end(),
              [](const auto& a, const auto& b2) { return a.first < b2.first; });
  return h;
}

void strip_content_small(std::vector<std::pair<uint32_t, long long>>& r) {
  if (r.empty()) return;
  unsigned long long g = 0;
  for (const auto& e : r) {
    g = std::gcd(g, (unsigned long long)(e.second < 0 ? -e.second : e.second));
    if (g == 1) return;
  }
  for (auto& e : r) e.second /= (long long)g;
}

void strip_content_big(std::vector<std::pair<uint32_t, Int>>& r) {
  if (r.empty()) return;
  Int g(0);
  for (const auto& e : r) {
    g = gcd(g, e.second);
    if (g == 1) return;
  }
  for (auto& e : r)
    mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
}

struct HScratch {
  std::vector<std::pair<uint32_t, long long>> s;
  std::vector<std::pair<uint32_t, Int>> b;
};

// t := (b/g) t - (a/g) piv with a = lead(t), b = lead(piv); leads cancel.
// Small-path arithmetic checks for overflow and falls back to mpz.
void h_eliminate(HRow& t, const HRow& piv, HScratch& scratch) {
  if (!t.big && !piv.big) {
    const long long a = t.s.front().second, b = piv.s.front().second;
    const long long g = (long long)std::gcd((unsigned long long)(a < 0 ? -a : a),
                                            (unsigned long long)(b < 0 ? -b : b));
    const long long bf = b / g, af = a / g;
    auto& out = scratch.s;
    out.clear();
    out.reserve(t.s.size() + piv.s.size());
    bool overflow = false;
    size_t i = 1, j = 1;
    while (i < t.s.size() || j < piv.s.size()) {
      long long v;
      uint32_t c;
      if (j == piv.s.size() ||
          (i < t.s.size() && t.s[i].first < piv.s[j].first)) {
        c = t.s[i].first;
        if (__builtin_mul_overflow(t.s[i].second, bf, &v)) {
          overflow = true;
          break;
        }
        ++i;
      } else if (i == t.s.size() || piv.s[j].first < t.s[i].first) {
        c = piv.s[j].first;
        if (__builtin_mul_overflow(piv.s[j].second, -af, &v)) {
          overflow = true;
          break;
        }
        ++j;
      } else {
        c = t.s[i].first;
        long long x, y;
        if (__builtin_mul_overflow(t.s[i].second, bf, &x) ||
            __builtin_mul_overflow(piv.s[j].second, af, &y) ||
            __builtin_sub_overflow(x, y, &v)) {
          overflow = true;
          break;
        }
        ++i;
        ++j;
      }
      if (v) out.emplace_back(c, v);
    }
    if (!overflow) {
      t.s.swap(out);
      strip_content_small(t.s);
      return;
    }
    t.promote();  // redo below in full precision
  }
  // big path (pivot converted on the fly when still small)
  t.promote();
  Int a = t.b.front().second;
  Int b = piv.big ? piv.b.front().second : Int((long)piv.s.front().second);
  Int g = gcd(a, b);
  Int bf = b / g, af = a / g;
  auto& out = scratch.b;
  out.clear();
  out.reserve(t.b.size() + piv.size());
  size_t i = 1, j = 1;
  Int v;
  auto piv_col = [&](size_t jj) { return piv.big ? piv.b[jj].first : piv.s[jj].first; };
  auto piv_val = [&](size_t jj) {
    return piv.big ? piv.b[jj] .second : Int((long)piv.s[jj].second);
  };
  while (i < t.b.size() || j < piv.size()) {
    if (j == piv.size() || (i < t.b.size() && t.b[i].first < piv_col(j))) {
      out.emplace_back(t.b[i].first, t.b[i].second * bf);
      ++i;
    } else if (i == t.b.size() || piv_col(j) < t.b[i].first) {
      out.emplace_back(piv_col(j), piv_val(j) * -af);
      ++j;
    } else {
      v = t.b[i].second * bf;
      Int pv = piv_val(j);
      mpz_submul(v.get_mpz_t(), af.get_mpz_t(), pv.get_mpz_t());
      if (v != 0) out.emplace_back(t.b[i].first, v);
      ++i;
      ++j;
    }
  }
  t.b.swap(out);
  strip_content_big(t.b);
  // drop back to machine words when entries allow it
  bool fits = true;
  for (const auto& e : t.b)
    if (!e.second.fits_slong_p()) {
      fits = false;
      break;
    }
  if (fits) {
    t.s.clear();
    t.s.reserve(t.b.size());
    for (const auto& e : t.b) t.s.emplace_back(e.first, (long long)e.second.get_si());
    t.b.clear();
    t.big = false;
  }
}

uint32_t zz_sweep(std::vector<HRow>& rows, uint32_t ncols) {
  std::vector<std::vector<uint32_t>> bucket(ncols);
  for (uint32_t i = 0; i < rows.size(); ++i)
    if (!rows[i].empty()) bucket[rows[i].lead()].push_back(i);
  uint32_t rank = 0;
  HScratch scratch;
  for (uint32_t c = 0; c < ncols; ++c) {
    auto& cand = bucket[c];
    if (cand.empty()) continue;
    uint32_t best = cand[0];
    for (uint32_t ri : cand)
      if (rows[ri].size() < rows[best].size() ||
          (rows[ri].size() == rows[best].size() && ri < best))
        best = ri;
    for (uint32_t ri : cand) {
      if (ri == best) continue;
      h_eliminate(rows[ri], rows[best], scratch);
      if (!rows[ri].empty()) bucket[rows[ri].lead()].push_back(ri);
    }
    cand.clear();
    ++rank;
  }
  return rank;
}

}  // namespace

uint32_t zz_rank(const ZMat& m) {
  std::vector<HRow> rows;
  rows.reserve(m.rows.size());
  for (const auto& r : m.rows) rows.push_back(to_hrow(r));
  return zz_sweep(rows, m.ncols);
}

bool zz_span_certificate(const ZMat& m, const std::vector<uint32_t>& pivot_ids,
                         unsigned threads) {
  // Echelonize the pivot rows, then reduce every other row to zero.
  std::vector<HRow> ech(pivot_ids.size());
  for (size_t i = 0; i < pivot_ids.size(); ++i) ech[i] = to_hrow(m.rows[pivot_ids[i]]);
  std::vector<int32_t> pivot_at_col(m.ncols, -1);
  {
    HScratch scratch;
    for (size_t i = 0; i < ech.size(); ++i) {
      auto& r = ech[i];
      while (!r.empty()) {
        int32_t pi = pivot_at_col[r.lead()];
        if (pi < 0) break;
        h_eliminate(r, ech[pi], scratch);
      }
      if (r.empty()) return false;  // pivot rows not independent over Q: bail out
      pivot_at_col[r.lead()] = (int32_t)i;
    }
  }
  std::vector<bool> is_pivot(m.rows.size(), false);
  for (uint32_t id : pivot_ids) is_pivot[id] = true;

  // Reducing the remaining rows is independent per row; the echelon is
  // read-only from here on.
  std::atomic<uint32_t> next{0};
  std::atomic<bool> ok{true};
  auto work = [&]() {
    HScratch scratch;
    while (ok.load(std::memory_order_relaxed)) {
      uint32_t i = next.fetch_add(1);
      if (i >= m.rows.size()) return;
      if (is_pivot[i]) continue;
      HRow r = to_hrow(m.rows[i]);
      while (!r.empty()) {
        int32_t pi = pivot_at_col[r.lead()];
        if (pi < 0) {
          ok.store(false);  // leading column has no pivot: outside the span
          return;
        }
        h_eliminate(r, ech[pi], scratch);
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return ok.load();
}

namespace {

// Rational reconstruction of m mod M: the unique n/d with |n|, d <= sqrt(M/2),
// n = m d (mod M), gcd(n, d) = 1, if it exists.
std::optional<std::pair<long long, long long>> rat_reconstruct(unsigned long long m,
                                                               unsigned long long M) {
  const long long bound = (long long)sqrtl((long double)M / 2);
  __int128 r0 = (__int128)M, r1 = (__int128)m;
  __int128 t0 = 0, t1 = 1;
  while (r1 > bound) {
    __int128 qq = r0 / r1;
    __int128 r2 = r0 - qq * r1;
    __int128 t2 = t0 - qq * t1;
    r0 = r1;
    r1 = r2;
    t0 = t1;
    t1 = t2;
  }
  long long num = (long long)r1;
  long long den = (long long)t1;
  if (den == 0) return std::nullopt;
  if (den < 0) {
    den = -den;
    num = -num;
  }
  if (den > bound) return std::nullopt;
  if (std::gcd((unsigned long long)(num < 0 ? -num : num), (unsigned long long)den) != 1)
    return std::nullopt;
  return std::make_pair(num, den);
}

// Certify rank <= ncols - #free by exhibiting exact rational kernel vectors:
// the unique reduced-echelon kernel basis is recovered from its images mod
// two primes and each candidate is verified against the integer matrix.
bool zz_kernel_certificate(const ZMat& z, const FpKernelData& k1, const FpKernelData& k2,
                           uint64_t p1, uint64_t p2, unsigned threads) {
  if (k1.pivot_cols != k2.pivot_cols) return false;
  const unsigned long long M = (unsigned long long)p1 * p2;
  // p1^{-1} mod p2 for CRT
  unsigned long long inv_p1 = 1;
  {
    PrimeField f2(p2);
    inv_p1 = f2.inv(p1 % p2);
  }
  // int64 fast path needs small matrix entries
  bool small_entries = true;
  for (const auto& row : z.rows) {
    for (const auto& e : row)
      if (!e.second.fits_sint_p()) {
        small_entries = false;
        break;
      }
    if (!small_entries) break;
  }
  if (!small_entries) return false;

  std::atomic<bool> ok{true};
  std::atomic<uint32_t> next{0};
  auto work = [&]() {
    std::vector<long long> dense(z.ncols, 0);
    std::vector<uint32_t> touched;
    while (ok.load(std::memory_order_relaxed)) {
      uint32_t fi = next.fetch_add(1);
      if (fi >= k1.free_cols.size()) return;
      const auto& c1 = k1.columns[fi];
      const auto& c2 = k2.columns[fi];
      // reconstruct each entry of the kernel vector from its two residues
      std::vector<std::pair<uint32_t, std::pair<long long, long long>>> vals;
      vals.reserve(c1.size() + 1);
      size_t a = 0, b = 0;
      bool good = true;
      long long den_lcm = 1;
      auto push_entry = [&](uint32_t col, unsigned long long x1, unsigned long long x2) {
        unsigned long long diff = (x2 + p2 - x1 % p2) % p2;
        unsigned long long crt =
            x1 + (unsigned long long)p1 *
                     ((unsigned __int128)diff * inv_p1 % p2);
        auto rec = rat_reconstruct(crt, M);
        if (!rec) {
          good = false;
          return;
        }
        vals.emplace_back(col, *rec);
        long long g = std::gcd(den_lcm, rec->second);
        if (__builtin_mul_overflow(den_lcm / g, rec->second, &den_lcm)) good = false;
      };
      while (good && (a < c1.size() || b < c2.size())) {
        if (b == c2.size() || (a < c1.size() && c1[a].first < c2[b].first)) {
          push_entry(c1[a].first, c1[a].second, 0);
          ++a;
        } else if (a == c1.size() || c2[b].first < c1[a].first) {
          push_entry(c2[b].first, 0, c2[b].second);
          ++b;
        } else {
          push_entry(c1[a].first, c1[a].second, c2[b].second);
          ++a;
          ++b;
        }
      }
      if (good && den_lcm > (1ll << 40)) good = false;
      if (!good) {
        ok.store(false);
        return;
      }
      // integer vector: v = den_lcm * e_f - sum (num * den_lcm / den) e_pc
      touched.clear();
      const uint32_t f = k1.free_cols[fi];
      dense[f] = den_lcm;
      touched.push_back(f);
      bool overflow = false;
      for (const auto& [col, nd] : vals) {
        long long scaled;
        if (__builtin_mul_overflow(nd.first, den_lcm / nd.second, &scaled)) {
          overflow = true;
          break;
        }
        dense[col] = -scaled;
        touched.push_back(col);
      }
      if (overflow) {
        for (uint32_t c : touched) dense[c] = 0;
        ok.store(false);
        return;
      }
      // verify A v = 0 exactly
      for (const auto& row : z.rows) {
        __int128 acc = 0;
        for (const auto& e : row) {
          long long w = dense[e.first];
          if (w) acc += (__int128)e.second.get_si() * w;
        }
        if (acc != 0) {
          for (uint32_t c : touched) dense[c] = 0;
          ok.store(false);
          return;
        }
      }
      for (uint32_t c : touched) dense[c] = 0;
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  return ok.load();
}

}  // namespace

RankReport rank_with_report(const SparseMat<RationalField>& m, RankOptions opt) {
  ZMat z = to_integer_rows(m);
  if (opt.force_rational) return {zz_rank(z), RankMethod::kRational};

  auto [p1, p2] = modular_rank_primes(opt.avoid);
  FpKernelData k1 = fp_kernel_data(z, p1);
  FpKernelData k2 = fp_kernel_data(z, p2);
  if (k1.rank == k2.rank) {
    uint32_t nonzero_rows = 0;
    for (const auto& r : z.rows)
      if (!r.empty()) ++nonzero_rows;
    // Modular rank is a lower bound for the rational rank; when it meets an
    // a-priori upper bound there is nothing left to certify.
    if (k1.rank == z.ncols || k1.rank == nonzero_rows)
      return {k1.rank, RankMethod::kModularVerified};
    // Primary certificate: exact kernel vectors lifted from the two modular
    // reduced echelon forms give the matching upper bound on the rank.
    if (zz_kernel_certificate(z, k1, k2, p1, p2, 2))
      return {k1.rank, RankMethod::kModularVerified};
    // Secondary certificate: check the modular pivot rows span everything.
    FpRankResult r1 = fp_rank(z, p1);
    if (zz_span_certificate(z, r1.pivot_row_ids))
      return {r1.rank, RankMethod::kModularVerified};
  }
  return {zz_rank(z), RankMethod::kRational};
}

SparseVec<RationalField> QuotientPresentation::reduce(
    const SparseVec<RationalField>& v) const {
  SparseVec<RationalField> out;
  RationalField f;
  for (const auto& e : v.entries) axpy(f, out, e.second, rewrite[e.first]);
  return out;
}

SparseVec<RationalField> QuotientPresentation::reduce_to_basis_coords(
    const SparseVec<RationalField>& v) const {
  SparseVec<RationalField> amb = reduce(v);
  for (auto& e : amb.entries) {
    assert(basis_pos[e.first] >= 0);
    e.first = (uint32_t)basis_pos[e.first];
  }
  return amb;
}

QuotientPresentation quotient(uint32_t ambient_dim,
                              const SparseMat<RationalField>& relations) {
  // rew[i] set iff index i has been eliminated; entries point only at
  // indices that are still free.
  std::vector<bool> eliminated(ambient_dim, false);
  std::vector<SparseVec<RationalField>> rew(ambient_dim);
  std::vector<uint32_t> elim_order;

  std::vector<Rat> vals(ambient_dim, Rat(0));
  std::vector<uint32_t> touched;
  RationalField f;

  for (const auto& rel : relations.rows) {
    touched.clear();
    for (const auto& e : rel.entries) {
      if (sgn(vals[e.first]) == 0 && sgn(e.second) != 0) touched.push_back(e.first);
      vals[e.first] += e.second;
    }
    // substitute eliminated indices (their rewrites only hit free indices)
    for (size_t t = 0; t < touched.size(); ++t) {
      uint32_t idx = touched[t];
      if (!eliminated[idx] || sgn(vals[idx]) == 0) continue;
      Rat c = vals[idx];
      vals[idx] = 0;
      for (const auto& e : rew[idx].entries) {
        if (sgn(vals[e.first]) == 0) touched.push_back(e.first);
        vals[e.first] += c * e.second;
      }
    }
    uint32_t piv = 0;
    bool found = false;
    for (uint32_t idx : touched) {
      if (eliminated[idx] || sgn(vals[idx]) == 0) continue;
      if (!found || idx > piv) {
        piv = idx;
        found = true;
      }
    }
    if (!found) {
      for (uint32_t idx : touched) vals[idx] = 0;
      continue;  // dependent relation
    }
    Rat c = vals[piv];
    SparseVec<RationalField> repl;
    for (uint32_t idx : touched) {
      if (idx == piv || sgn(vals[idx]) == 0) {
        vals[idx] = 0;
        continue;
      }
      repl.entries.emplace_back(idx, -vals[idx] / c);
      vals[idx] = 0;
    }
    vals[piv] = 0;
    repl.sort_and_combine(f);
    eliminated[piv] = true;
    rew[piv] = std::move(repl);
    elim_order.push_back(piv);
    // keep older rewrites fully reduced
    for (uint32_t idx : elim_order) {
      if (idx == piv) continue;
      auto& w = rew[idx];
      for (size_t i = 0; i < w.entries.size(); ++i) {
        if (w.entries[i].first == piv) {
          Rat cc = w.entries[i].second;
          w.entries.erase(w.entries.begin() + (ptrdiff_t)i);
          axpy(f, w, cc, rew[piv]);
          break;
        }
      }
    }
  }

  QuotientPresentation q;
  q.ambient_dim = ambient_dim;
  q.basis_pos.assign(ambient_dim, -1);
  q.rewrite.resize(ambient_dim);
  for (uint32_t i = 0; i < ambient_dim; ++i) {
    if (eliminated[i]) {
      q.rewrite[i] = std::move(rew[i]);
    } else {
      q.basis_pos[i] = (int32_t)q.basis.size();
      q.basis.push_back(i);
      q.rewrite[i].entries.emplace_back(i, Rat(1));
    }
  }
  return q;
}

}  // namespace cyclokappa
