#include "cyclokappa/depthgraded.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <stdexcept>

namespace cyclokappa {

void qvec_add(QVec& dst, const BiSeq& key, const Rat& c) {
  if (sgn(c) == 0) return;
  auto it = dst.find(key);
  if (it == dst.end()) {
    dst.emplace(key, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) dst.erase(it);
  }
}

void pvec_add(const PrimeField& f, PVec& dst, const BiSeq& key, uint64_t c) {
  c %= f.p;
  if (!c) return;
  auto it = dst.find(key);
  if (it == dst.end()) {
    dst.emplace(key, c);
  } else {
    it->second = f.add(it->second, c);
    if (!it->second) dst.erase(it);
  }
}

// --- symbol spaces ---------------------------------------------------------

static void compositions(uint32_t total, uint32_t parts,
                         std::vector<std::vector<uint32_t>>& out) {
  // all (l_1..l_parts) of nonnegative integers summing to total, lex order
  std::vector<uint32_t> cur(parts, 0);
  std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t pos, uint32_t left) {
    if (pos + 1 == parts) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (uint32_t v = 0; v <= left; ++v) {
      cur[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  if (parts == 0) {
    if (total == 0) out.push_back({});
    return;
  }
  rec(0, total);
}

SymbolSpace::SymbolSpace(const Level& lv, uint32_t d, uint32_t k, Alphabet alphabet)
    : d(d), k(k) {
  if (k < d) throw std::invalid_argument("weight must be at least the depth");
  std::vector<uint32_t> letters;
  if (alphabet == Alphabet::kNu) {
    for (const auto& r : nu_elements(lv)) letters.push_back(r.exp);
  } else {
    for (uint32_t e = 0; e < lv.N; ++e) letters.push_back(e);
  }
  std::vector<std::vector<uint32_t>> ls_list;
  compositions(k - d, d, ls_list);
  std::vector<uint32_t> eps(d);
  for (const auto& ls : ls_list) {
    std::function<void(uint32_t)> rec = [&](uint32_t pos) {
      if (pos == d) {
        symbols.push_back(BiSeq{eps, ls});
        return;
      }
      for (uint32_t e : letters) {
        eps[pos] = e;
        rec(pos + 1);
      }
    };
    rec(0);
  }
  for (uint32_t i = 0; i < symbols.size(); ++i) index.emplace(symbols[i], i);
}

uint32_t SymbolSpace::index_of(const BiSeq& s) const {
  auto it = index.find(s);
  if (it == index.end()) throw std::out_of_range("symbol outside the indexed space");
  return it->second;
}

SparseVec<PrimeField> SymbolSpace::to_coords(const PrimeField& f, const PVec& v) const {
  SparseVec<PrimeField> out;
  for (const auto& [s, c] : v) {
    uint64_t cv = c % f.p;
    if (cv) out.entries.emplace_back(index_of(s), cv);
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

PVec SymbolSpace::from_coords(const SparseVec<PrimeField>& v) const {
  PVec out;
  for (const auto& [i, c] : v.entries)
    if (c) out.emplace(symbols[i], c);
  return out;
}

// --- the depth-one quotient --------------------------------------------------

SparseMat<RationalField> y_relations(const Level& lv, uint32_t l) {
  const uint32_t N = lv.N;
  SparseMat<RationalField> rels;
  rels.ncols = N;
  RationalField f;
  auto push = [&](SparseVec<RationalField> v) {
    v.sort_and_combine(f);
    if (!v.empty()) rels.rows.push_back(std::move(v));
  };
  if (l == 0) {
    SparseVec<RationalField> r;
    r.entries.emplace_back(0, Rat(1));
    push(std::move(r));
  }
  const Rat sign = (l % 2) ? Rat(-1) : Rat(1);
  for (uint32_t e = 0; e < N; ++e) {
    SparseVec<RationalField> r;
    r.entries.emplace_back(e, Rat(1));
    r.entries.emplace_back((N - e) % N, -sign);
    push(std::move(r));
  }
  for (uint32_t M = 2; M <= N; ++M) {
    if (N % M) continue;
    const uint32_t step = N / M;
    Rat ml(1);
    for (uint32_t i = 0; i < l; ++i) ml *= M;
    for (uint32_t e = 0; e < step; ++e) {
      const uint32_t lhs = (uint32_t)((uint64_t)M * e % N);
      if (lhs == 0 && l == 0) continue;
      SparseVec<RationalField> r;
      r.entries.emplace_back(lhs, Rat(1));
      for (uint32_t j = 0; j < M; ++j) r.entries.emplace_back(e + j * step, -ml);
      push(std::move(r));
    }
  }
  return rels;
}

const QuotientPresentation& YSpace::presentation(uint32_t k) {
  if (k == 0) throw std::invalid_argument("depth-one weights start at 1");
  auto it = cache_.find(k);
  if (it == cache_.end())
    it = cache_.emplace(k, quotient(lv_.N, y_relations(lv_, k - 1))).first;
  return it->second;
}

SparseVec<RationalField> YSpace::reduce_root(UnityRoot x, uint32_t l) {
  const auto& pres = presentation(l + 1);
  SparseVec<RationalField> v;
  v.entries.emplace_back(x.exp, Rat(1));
  return pres.reduce_to_basis_coords(v);
}

// --- section maps ------------------------------------------------------------

static BiSeq depth1(uint32_t exp, uint32_t l) { return BiSeq{{exp}, {l}}; }

QVec theta_cap(const Level& lv, UnityRoot x, uint32_t l) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("theta requires a special level");
  QVec out;
  if (x.exp == 0) {
    if (l == 0) return out;
    Int Nl(1), pl(1);
    for (uint32_t i = 0; i < l; ++i) {
      Nl *= lv.N;
      pl *= sf->p;
    }
    Int num = Nl + ((l % 2) ? -Nl : Nl);
    Rat coef = Rat(num) / Rat(Int(1) - pl);
    for (const auto& eps : nu_elements(lv)) qvec_add(out, depth1(eps.exp, l), coef);
    return out;
  }
  const uint32_t v = valuation(lv, x);
  Int pvl(1);
  for (uint32_t i = 0; i < (uint32_t)v * l; ++i) pvl *= sf->p;
  for (int c : {1, -1}) {
    Rat coef = Rat(((c == -1) && (l % 2)) ? -pvl : pvl);
    for (const auto& eps : lambda_set_general(lv, c, x))
      qvec_add(out, depth1(eps.exp, l), coef);
  }
  return out;
}

PVec theta_small(const Level& lv, UnityRoot x) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("theta requires a special level");
  if (!lv.in_mu_over_q(x))
    throw std::invalid_argument("theta is only defined on mu_{N/q}");
  PrimeField f(sf->p);
  PVec out;
  if (x.exp == 0) return out;
  for (int c : {1, -1})
    for (const auto& eps : lambda_set_general(lv, c, x))
      pvec_add(f, out, depth1(eps.exp, 0), 1);
  return out;
}

PVec theta_tilde(const Level& lv, UnityRoot x) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("theta requires a special level");
  if (!lv.in_mu_over_q(x))
    throw std::invalid_argument("theta is only defined on mu_{N/q}");
  if (x.exp != 0) return theta_small(lv, x);
  PrimeField f(sf->p);
  PVec out;
  for (uint32_t e = 0; e < lv.N; e += sf->q)
    for (const auto& [s, c] : theta_small(lv, UnityRoot{e}))
      pvec_add(f, out, s, f.neg(c));
  return out;
}

// --- derivation maps -----------------------------------------------------------

static long binom_ll(uint32_t n, uint32_t k) {
  long r = 1;
  for (uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<DTerm> d_map_terms(const Level& lv, const BiSeq& s) {
  const uint32_t d = s.depth();
  if (d == 0) throw std::invalid_argument("depth must be at least 1");
  std::vector<DTerm> out;
  auto diff = [&](uint32_t a, uint32_t b) { return lv.div(UnityRoot{a}, UnityRoot{b}).exp; };
  if (d == 1) {
    out.push_back(DTerm{1, s.eps[0], s.ls[0], BiSeq{}});
    return out;
  }
  const auto& eps = s.eps;
  const auto& l = s.ls;
  // leading cut
  {
    DTerm t;
    t.coef = 1;
    t.y_exp = diff(eps[0], eps[1]);
    t.y_l = l[0];
    t.rest.eps.assign(eps.begin() + 1, eps.end());
    t.rest.ls.assign(l.begin() + 1, l.end());
    out.push_back(std::move(t));
  }
  // interior left cuts (delete slot i, 2 <= i <= d-1, 1-based)
  for (uint32_t i = 2; i < d; ++i) {
    const uint32_t li = l[i - 1], lim1 = l[i - 2];
    for (uint32_t r = li; r <= lim1 + li; ++r) {
      DTerm t;
      t.coef = ((r - li) % 2 ? -1 : 1) * binom_ll(r, li);
      t.y_exp = diff(eps[i - 1], eps[i]);
      t.y_l = r;
      t.rest.eps = eps;
      t.rest.eps.erase(t.rest.eps.begin() + (i - 1));
      t.rest.ls = l;
      t.rest.ls.erase(t.rest.ls.begin() + (i - 1));
      t.rest.ls[i - 2] = lim1 + li - r;
      out.push_back(std::move(t));
    }
  }
  // right cuts (delete slot i+1, 1 <= i <= d-1)
  for (uint32_t i = 1; i < d; ++i) {
    const uint32_t li = l[i - 1], lip1 = l[i];
    for (uint32_t r = li; r <= li + lip1; ++r) {
      DTerm t;
      t.coef = -(li % 2 ? -1 : 1) * binom_ll(r, li);
      t.y_exp = diff(eps[i], eps[i - 1]);
      t.y_l = r;
      t.rest.eps = eps;
      t.rest.eps.erase(t.rest.eps.begin() + i);
      t.rest.ls = l;
      t.rest.ls.erase(t.rest.ls.begin() + i);
      t.rest.ls[i - 1] = li + lip1 - r;
      out.push_back(std::move(t));
    }
  }
  // trailing cut
  {
    const uint32_t ld = l[d - 1], ldm1 = l[d - 2];
    for (uint32_t r = ld; r <= ldm1 + ld; ++r) {
      DTerm t;
      t.coef = ((r - ld) % 2 ? -1 : 1) * binom_ll(r, ld);
      t.y_exp = eps[d - 1];
      t.y_l = r;
      t.rest.eps.assign(eps.begin(), eps.end() - 1);
      t.rest.ls.assign(l.begin(), l.end() - 1);
      t.rest.ls[d - 2] = ldm1 + ld - r;
      out.push_back(std::move(t));
    }
  }
  return out;
}

QVec e_map(const Level& lv, const QVec& v) {
  if (!lv.special_form) throw std::invalid_argument("E_d requires a special level");
  QVec out;
  for (const auto& [s, coef] : v) {
    for (uint32_t e : s.eps)
      if (!lv.in_nu(UnityRoot{e}))
        throw std::invalid_argument("E_d is defined on nu_N-supported vectors");
    for (const auto& t : d_map_terms(lv, s)) {
      QVec th = theta_cap(lv, UnityRoot{t.y_exp}, t.y_l);
      for (const auto& [w1, tv] : th) {
        BiSeq key = t.rest;
        key.eps.push_back(w1.eps[0]);
        key.ls.push_back(w1.ls[0]);
        qvec_add(out, key, coef * Rat(t.coef) * tv);
      }
    }
  }
  return out;
}

PVec e_map_modp(const Level& lv, const PVec& v) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("E_d requires a special level");
  PrimeField f(sf->p);
  PVec out;
  for (const auto& [s, coef] : v) {
    for (uint32_t e : s.eps)
      if (!lv.in_nu(UnityRoot{e}))
        throw std::invalid_argument("E_d is defined on nu_N-supported vectors");
    const uint32_t d = s.depth();
    const auto& eps = s.eps;
    const auto& l = s.ls;
    if (d == 1) {
      pvec_add(f, out, s, coef);
      continue;
    }
    for (uint32_t i = 1; i < d; ++i) {
      if (l[i - 1] != 0) continue;
      BiSeq rest_l = s;
      rest_l.eps.erase(rest_l.eps.begin() + (i - 1));
      rest_l.ls.erase(rest_l.ls.begin() + (i - 1));
      for (const auto& [w1, tv] : theta_small(lv, lv.div(UnityRoot{eps[i - 1]}, UnityRoot{eps[i]}))) {
        BiSeq key = rest_l;
        key.eps.push_back(w1.eps[0]);
        key.ls.push_back(0);
        pvec_add(f, out, key, f.mul(coef, tv));
      }
      BiSeq rest_r = s;
      rest_r.eps.erase(rest_r.eps.begin() + i);
      rest_r.ls.erase(rest_r.ls.begin() + (i - 1));
      for (const auto& [w1, tv] : theta_small(lv, lv.div(UnityRoot{eps[i]}, UnityRoot{eps[i - 1]}))) {
        BiSeq key = rest_r;
        key.eps.push_back(w1.eps[0]);
        key.ls.push_back(0);
        pvec_add(f, out, key, f.mul(coef, f.neg(tv)));
      }
    }
    const uint32_t ld = l[d - 1], ldm1 = l[d - 2];
    for (uint32_t r = ld; r <= ldm1 + ld; ++r) {
      long c = ((r - ld) % 2 ? -1 : 1) * binom_ll(r, ld);
      BiSeq key = s;
      key.ls[d - 2] = ldm1 + ld - r;
      key.ls[d - 1] = r;
      pvec_add(f, out, key, f.mul(coef, f.from_int(c)));
    }
  }
  return out;
}

PVec op_L(const Level& lv, uint32_t i, const PVec& v) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("operators require a special level");
  PrimeField f(sf->p);
  PVec out;
  for (const auto& [s, coef] : v) {
    const uint32_t d = s.depth();
    if (i < 1 || i >= d) throw std::out_of_range("operator slot out of range");
    if (s.ls[i - 1] != 0) continue;
    BiSeq rest = s;
    rest.eps.erase(rest.eps.begin() + (i - 1));
    rest.ls.erase(rest.ls.begin() + (i - 1));
    for (const auto& [w1, tv] :
         theta_tilde(lv, lv.div(UnityRoot{s.eps[i - 1]}, UnityRoot{s.eps[i]}))) {
      BiSeq key = rest;
      key.eps.push_back(w1.eps[0]);
      key.ls.push_back(0);
      pvec_add(f, out, key, f.mul(coef, tv));
    }
  }
  return out;
}

PVec op_R(const Level& lv, uint32_t i, const PVec& v) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("operators require a special level");
  PrimeField f(sf->p);
  PVec out;
  for (const auto& [s, coef] : v) {
    const uint32_t d = s.depth();
    if (i < 1 || i >= d) throw std::out_of_range("operator slot out of range");
    if (s.ls[i - 1] != 0) continue;
    BiSeq rest = s;
    rest.eps.erase(rest.eps.begin() + i);
    rest.ls.erase(rest.ls.begin() + (i - 1));
    for (const auto& [w1, tv] :
         theta_tilde(lv, lv.div(UnityRoot{s.eps[i]}, UnityRoot{s.eps[i - 1]}))) {
      BiSeq key = rest;
      key.eps.push_back(w1.eps[0]);
      key.ls.push_back(0);
      pvec_add(f, out, key, f.mul(coef, tv));
    }
  }
  return out;
}

PVec op_S(const Level& lv, const PVec& v) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("operators require a special level");
  PrimeField f(sf->p);
  PVec out;
  for (const auto& [s, coef] : v) {
    const uint32_t d = s.depth();
    if (d < 2) continue;  // empty redistribution range
    const uint32_t ld = s.ls[d - 1], ldm1 = s.ls[d - 2];
    for (uint32_t r = ld + 1; r <= ldm1 + ld; ++r) {
      long c = ((r - ld) % 2 ? -1 : 1) * binom_ll(r, ld);
      BiSeq key = s;
      key.ls[d - 2] = ldm1 + ld - r;
      key.ls[d - 1] = r;
      pvec_add(f, out, key, f.mul(coef, f.from_int(c)));
    }
  }
  return out;
}

PVec galois_apply(const Level& lv, GaloisElement g, const PVec& v) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("Galois action requires a special level");
  PrimeField f(sf->p);
  PVec out;
  for (const auto& [s, c] : v) {
    BiSeq t = s;
    for (auto& e : t.eps) e = galois_apply(lv, g, UnityRoot{e}).exp;
    pvec_add(f, out, t, c);
  }
  return out;
}

// --- theorem checkers -----------------------------------------------------------

YTensorSpace::YTensorSpace(YSpace& ys, uint32_t d, uint32_t k) : d(d), k(k) {
  if (d == 0) return;
  std::vector<std::vector<uint32_t>> ls_list;
  compositions(k - d, d, ls_list);
  for (const auto& ls : ls_list) {
    std::vector<uint32_t> dims(d);
    bool empty = false;
    for (uint32_t i = 0; i < d; ++i) {
      dims[i] = ys.dim(ls[i] + 1);
      if (dims[i] == 0) empty = true;
    }
    if (empty) continue;
    std::vector<uint32_t> pos(d, 0);
    while (true) {
      std::vector<std::pair<uint32_t, uint32_t>> key(d);
      for (uint32_t i = 0; i < d; ++i) key[i] = {ls[i], pos[i]};
      index.emplace(std::move(key), total_dim++);
      uint32_t i = d;
      while (i > 0 && ++pos[i - 1] == dims[i - 1]) pos[--i] = 0;
      if (i == 0) break;
    }
  }
}

namespace {

void d_iter_expand(const Level& lv, YSpace& ys, const YTensorSpace& codomain,
                   const BiSeq& s, const Rat& coef,
                   std::vector<std::pair<uint32_t, uint32_t>>& prefix,
                   std::map<uint32_t, Rat>& out) {
  if (s.depth() == 0) {
    auto it = codomain.index.find(prefix);
    if (it == codomain.index.end())
      throw std::logic_error("iterated derivation left the graded codomain");
    auto [oit, fresh] = out.emplace(it->second, coef);
    if (!fresh) oit->second += coef;
    return;
  }
  for (const auto& t : d_map_terms(lv, s)) {
    auto yv = ys.reduce_root(UnityRoot{t.y_exp}, t.y_l);
    if (yv.empty()) continue;
    for (const auto& [pos, c] : yv.entries) {
      prefix.emplace_back(t.y_l, pos);
      d_iter_expand(lv, ys, codomain, t.rest, coef * Rat(t.coef) * c, prefix, out);
      prefix.pop_back();
    }
  }
}

}  // namespace

SparseVec<RationalField> d_iter_on_symbol(const Level& lv, YSpace& ys,
                                          const YTensorSpace& codomain, const BiSeq& s) {
  if (s.weight() != codomain.k || s.depth() != codomain.d)
    throw std::invalid_argument("symbol weight/depth does not match the codomain");
  std::map<uint32_t, Rat> acc;
  std::vector<std::pair<uint32_t, uint32_t>> prefix;
  d_iter_expand(lv, ys, codomain, s, Rat(1), prefix, acc);
  SparseVec<RationalField> out;
  for (auto& [i, c] : acc)
    if (sgn(c) != 0) out.entries.emplace_back(i, std::move(c));
  return out;
}

uint32_t surjectivity_check(const Level& lv, uint32_t k, uint32_t d, bool force_rational) {
  YSpace ys(lv);
  YTensorSpace cod(ys, d, k);
  if (cod.total_dim == 0) return 0;
  SymbolSpace dom(lv, d, k, Alphabet::kFull);
  SparseMat<RationalField> m;
  m.ncols = cod.total_dim;
  m.rows.reserve(dom.dim());
  for (const auto& s : dom.symbols) {
    auto row = d_iter_on_symbol(lv, ys, cod, s);
    if (!row.empty()) m.rows.push_back(std::move(row));
  }
  RankOptions opt;
  opt.force_rational = force_rational;
  opt.avoid = lv.N;
  return cokernel_dim(m, opt);
}

BasisCheck basis_bijectivity_check(const Level& lv, uint32_t k, uint32_t d,
                                   bool force_rational) {
  if (!lv.special_form)
    throw std::invalid_argument("the basis theorem concerns special levels");
  BasisCheck res;
  YSpace ys(lv);
  YTensorSpace cod(ys, d, k);
  SymbolSpace dom(lv, d, k, Alphabet::kNu);
  res.dim_domain = dom.dim();
  res.dim_codomain = cod.total_dim;
  res.stable = true;
  SparseMat<RationalField> m;
  m.ncols = cod.total_dim;
  for (const auto& s : dom.symbols) {
    for (const auto& t : d_map_terms(lv, s))
      for (uint32_t e : t.rest.eps)
        if (!lv.in_nu(UnityRoot{e})) res.stable = false;
    m.rows.push_back(d_iter_on_symbol(lv, ys, cod, s));
  }
  if (res.dim_domain != res.dim_codomain) {
    res.bijective = false;
    return res;
  }
  RankOptions opt;
  opt.force_rational = force_rational;
  opt.avoid = lv.N;
  res.bijective = (rank(m, opt) == res.dim_domain);
  return res;
}

bool decomposition_check(const Level& lv, uint32_t k, uint32_t d) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("the decomposition concerns special levels");
  PrimeField f(sf->p);
  SymbolSpace space(lv, d, k, Alphabet::kNu);
  for (const auto& s : space.symbols) {
    PVec u{{s, 1}};
    PVec lhs = e_map_modp(lv, u);
    pvec_add(f, lhs, s, f.neg(1 % f.p));
    PVec rhs;
    for (uint32_t i = 1; i < d; ++i) {
      for (const auto& [key, c] : op_L(lv, i, u)) pvec_add(f, rhs, key, c);
      for (const auto& [key, c] : op_R(lv, i, u)) pvec_add(f, rhs, key, f.neg(c));
    }
    for (const auto& [key, c] : op_S(lv, u)) pvec_add(f, rhs, key, c);
    if (lhs != rhs) return false;
  }
  return true;
}

std::optional<uint32_t> unipotence_check(const Level& lv, uint32_t k, uint32_t d) {
  const auto& sf = lv.special_form;
  if (!sf) throw std::invalid_argument("unipotence concerns special levels");
  PrimeField f(sf->p);
  SymbolSpace space(lv, d, k, Alphabet::kNu);
  auto op = [&](const SparseVec<PrimeField>& v) {
    PVec u = space.from_coords(v);
    PVec w = e_map_modp(lv, u);
    for (const auto& [s, c] : u) pvec_add(f, w, s, f.neg(c));
    return space.to_coords(f, w);
  };
  return nilpotency_index<PrimeField>(f, op, space.dim());
}

}  // namespace cyclokappa
