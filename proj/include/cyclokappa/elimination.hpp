#ifndef CYCLOKAPPA_ELIMINATION_HPP
#define CYCLOKAPPA_ELIMINATION_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "cyclokappa/fields.hpp"
#include "cyclokappa/sparse.hpp"

namespace cyclokappa {

// ---------------------------------------------------------------------------
// Rank
//
// Over a prime field: sparse Gaussian elimination with a deterministic
// pivot rule (columns swept in ascending order; within a column the row
// with fewest nonzeros wins, ties broken by arrival order).
//
// Over the rationals: rows are scaled to integers, then either
//   * the modular fast path: rank modulo two distinct primes > 2^20; if both
//     agree, the result is certified by an exact integer pass that checks the
//     surviving pivot rows span every remaining row; or
//   * full fraction-free integer elimination (also the fallback, and forced
//     by RankOptions::force_rational).
// ---------------------------------------------------------------------------

enum class RankMethod { kRational, kModularVerified };

struct RankOptions {
  bool force_rational = false;
  // Fast-path primes are the two smallest primes > 2^20 not dividing this.
  uint64_t avoid = 1;
};

struct RankReport {
  uint32_t rank = 0;
  RankMethod method = RankMethod::kRational;
};

// Integer matrix with rows scaled to be denominator-free.
struct ZMat {
  uint32_t ncols = 0;
  std::vector<std::vector<std::pair<uint32_t, Int>>> rows;
};

ZMat to_integer_rows(const SparseMat<RationalField>& m);

struct FpRankResult {
  uint32_t rank = 0;
  std::vector<uint32_t> pivot_row_ids;  // original row indices that became pivots
};

FpRankResult fp_rank(const ZMat& m, uint64_t p);
uint32_t rank(const PrimeField& f, const SparseMat<PrimeField>& m);

// Reduced-echelon kernel data mod p: for each non-pivot column f the RREF
// column above it, i.e. the pairs (pivot column, value) with
//   v_f = e_f - sum value * e_{pivot column}
// spanning the mod-p kernel.  The reduced form is unique, so entries can be
// combined across primes by CRT.
struct FpKernelData {
  uint32_t rank = 0;
  std::vector<uint32_t> pivot_cols;  // sorted
  std::vector<uint32_t> free_cols;   // sorted
  std::vector<std::vector<std::pair<uint32_t, uint64_t>>> columns;  // per free col
};

FpKernelData fp_kernel_data(const ZMat& m, uint64_t p);

// Full fraction-free integer elimination (content-stripped row updates).
uint32_t zz_rank(const ZMat& m);

// True iff every row of m whose index is not in pivot_ids lies in the
// rational span of the pivot_ids rows.  Exact integer arithmetic; the
// per-row reductions may fan out across threads (the result is a single
// boolean, so scheduling cannot affect it).
bool zz_span_certificate(const ZMat& m, const std::vector<uint32_t>& pivot_ids,
                         unsigned threads = 2);

RankReport rank_with_report(const SparseMat<RationalField>& m, RankOptions opt = {});
inline uint32_t rank(const SparseMat<RationalField>& m, RankOptions opt = {}) {
  return rank_with_report(m, opt).rank;
}

// Rows span the image inside the codomain basis; the cokernel dimension is
// ncols - rank.
inline uint32_t cokernel_dim(const SparseMat<RationalField>& m, RankOptions opt = {}) {
  return m.ncols - rank(m, opt);
}
inline uint32_t cokernel_dim(const PrimeField& f, const SparseMat<PrimeField>& m) {
  return m.ncols - rank(f, m);
}

// ---------------------------------------------------------------------------
// Kernel (right null space) basis via reduced row echelon form.  Vectors are
// returned in free-column order; each has a unit entry at its free column.
// ---------------------------------------------------------------------------

template <class F>
std::vector<SparseVec<F>> kernel_basis(const F& f, const SparseMat<F>& m) {
  std::vector<SparseVec<F>> pivot_rows;
  std::vector<int32_t> pivot_of_col(m.ncols, -1);
  for (const auto& row_in : m.rows) {
    SparseVec<F> r = row_in;
    while (!r.empty()) {
      uint32_t c = r.lead();
      int32_t pi = pivot_of_col[c];
      if (pi < 0) break;
      axpy(f, r, f.neg(r.lead_value()), pivot_rows[pi]);
    }
    if (r.empty()) continue;
    uint32_t lead = r.lead();
    scale(f, r, f.inv(r.lead_value()));
    // full reduction of the tail against existing pivots
    for (size_t i = 1; i < r.entries.size();) {
      int32_t pi = pivot_of_col[r.entries[i].first];
      if (pi >= 0)
        axpy(f, r, f.neg(r.entries[i].second), pivot_rows[pi]);
      else
        ++i;
    }
    // back-substitute into existing rows
    for (auto& pr : pivot_rows) {
      for (size_t i = 0; i < pr.entries.size(); ++i) {
        if (pr.entries[i].first == lead) {
          auto c = pr.entries[i].second;
          axpy(f, pr, f.neg(c), r);
          break;
        }
        if (pr.entries[i].first > lead) break;
      }
    }
    pivot_of_col[lead] = (int32_t)pivot_rows.size();
    pivot_rows.push_back(std::move(r));
  }
  std::vector<SparseVec<F>> kernel;
  for (uint32_t c = 0; c < m.ncols; ++c) {
    if (pivot_of_col[c] >= 0) continue;
    SparseVec<F> v;
    v.entries.emplace_back(c, f.one());
    for (uint32_t lead = 0; lead < m.ncols; ++lead) {
      int32_t pi = pivot_of_col[lead];
      if (pi < 0) continue;
      for (const auto& e : pivot_rows[pi].entries)
        if (e.first == c) {
          v.entries.emplace_back(lead, f.neg(e.second));
          break;
        }
    }
    v.sort_and_combine(f);
    kernel.push_back(std::move(v));
  }
  return kernel;
}

// ---------------------------------------------------------------------------
// Quotient presentation: ambient space modulo the span of relation rows.
// Pivots prefer the largest index inside each relation, so low indices
// survive as the quotient basis.  The rewrite map is fully reduced.
// ---------------------------------------------------------------------------

struct QuotientPresentation {
  uint32_t ambient_dim = 0;
  std::vector<uint32_t> basis;  // sorted surviving indices
  // One vector per ambient index, supported on basis indices.  Basis
  // indices rewrite to themselves.
  std::vector<SparseVec<RationalField>> rewrite;
  std::vector<int32_t> basis_pos;  // ambient index -> position in basis, or -1

  uint32_t dim() const { return (uint32_t)basis.size(); }

  // Class of an ambient vector, still indexed by ambient indices.
  SparseVec<RationalField> reduce(const SparseVec<RationalField>& v) const;
  // Same, re-indexed by position in `basis`.
  SparseVec<RationalField> reduce_to_basis_coords(const SparseVec<RationalField>& v) const;
};

QuotientPresentation quotient(uint32_t ambient_dim, const SparseMat<RationalField>& relations);

// ---------------------------------------------------------------------------
// Nilpotency: least n <= dim with op^n = 0 on the whole space, or nullopt
// (not nilpotent).  The operator maps coordinates [0, dim) to themselves.
// ---------------------------------------------------------------------------

template <class F>
std::optional<uint32_t> nilpotency_index(
    const F& f, const std::function<SparseVec<F>(const SparseVec<F>&)>& op, uint32_t dim) {
  if (dim == 0) return 0u;
  // Basis of the current iterated image, kept in echelon form.
  std::vector<SparseVec<F>> cur;
  for (uint32_t i = 0; i < dim; ++i) {
    SparseVec<F> e;
    e.entries.emplace_back(i, f.one());
    cur.push_back(std::move(e));
  }
  uint32_t n = 0;
  while (true) {
    std::vector<SparseVec<F>> pivot_rows;
    std::vector<int32_t> pivot_of_col(dim, -1);
    for (const auto& v : cur) {
      SparseVec<F> r = op(v);
      while (!r.empty()) {
        int32_t pi = pivot_of_col[r.lead()];
        if (pi < 0) break;
        axpy(f, r, f.neg(r.lead_value()), pivot_rows[pi]);
      }
      if (r.empty()) continue;
      scale(f, r, f.inv(r.lead_value()));
      pivot_of_col[r.lead()] = (int32_t)pivot_rows.size();
      pivot_rows.push_back(std::move(r));
    }
    ++n;
    if (pivot_rows.empty()) return n;
    if (pivot_rows.size() == cur.size()) return std::nullopt;  // image stabilized
    cur = std::move(pivot_rows);
  }
}

}  // namespace cyclokappa

#endif
