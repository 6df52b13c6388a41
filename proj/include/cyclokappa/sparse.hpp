#ifndef CYCLOKAPPA_SPARSE_HPP
#define CYCLOKAPPA_SPARSE_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "cyclokappa/fields.hpp"

namespace cyclokappa {

// Finitely supported vector over an exact field.  Entries are kept sorted
// by index with no explicit zeros.
template <class F>
struct SparseVec {
  using Value = typename F::Value;
  std::vector<std::pair<uint32_t, Value>> entries;

  bool empty() const { return entries.empty(); }
  size_t nnz() const { return entries.size(); }
  uint32_t lead() const { return entries.front().first; }
  const Value& lead_value() const { return entries.front().second; }

  void sort_and_combine(const F& f) {
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    size_t w = 0;
    for (size_t i = 0; i < entries.size();) {
      uint32_t c = entries[i].first;
      Value v = std::move(entries[i].second);
      size_t j = i + 1;
      while (j < entries.size() && entries[j].first == c) {
        v = f.add(v, entries[j].second);
        ++j;
      }
      if (!f.is_zero(v)) {
        entries[w].first = c;
        entries[w].second = std::move(v);
        ++w;
      }
      i = j;
    }
    entries.resize(w);
  }

  bool operator==(const SparseVec& o) const { return entries == o.entries; }
};

// dst := dst + c * src
template <class F>
void axpy(const F& f, SparseVec<F>& dst, const typename F::Value& c,
          const SparseVec<F>& src) {
  if (f.is_zero(c)) return;
  std::vector<std::pair<uint32_t, typename F::Value>> out;
  out.reserve(dst.entries.size() + src.entries.size());
  size_t i = 0, j = 0;
  while (i < dst.entries.size() || j < src.entries.size()) {
    if (j == src.entries.size() ||
        (i < dst.entries.size() && dst.entries[i].first < src.entries[j].first)) {
      out.push_back(std::move(dst.entries[i++]));
    } else if (i == dst.entries.size() || src.entries[j].first < dst.entries[i].first) {
      out.emplace_back(src.entries[j].first, f.mul(c, src.entries[j].second));
      ++j;
    } else {
      auto v = f.add(dst.entries[i].second, f.mul(c, src.entries[j].second));
      if (!f.is_zero(v)) out.emplace_back(dst.entries[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  // drop zeros introduced by the scaled source
  size_t w = 0;
  for (auto& e : out)
    if (!f.is_zero(e.second)) out[w++] = std::move(e);
  out.resize(w);
  dst.entries = std::move(out);
}

template <class F>
void scale(const F& f, SparseVec<F>& v, const typename F::Value& c) {
  if (f.is_zero(c)) {
    v.entries.clear();
    return;
  }
  for (auto& e : v.entries) e.second = f.mul(e.second, c);
}

template <class F>
struct SparseMat {
  uint32_t ncols = 0;
  std::vector<SparseVec<F>> rows;

  size_t nrows() const { return rows.size(); }
};

// Static-field convenience overloads (rationals need no field state).
inline void axpy(SparseVec<RationalField>& dst, const Rat& c,
                 const SparseVec<RationalField>& src) {
  axpy(RationalField{}, dst, c, src);
}

}  // namespace cyclokappa

#endif
