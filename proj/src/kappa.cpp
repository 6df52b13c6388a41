#include "cyclokappa/kappa.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <set>
#include <stdexcept>

#include "cyclokappa/elimination.hpp"

namespace cyclokappa {

KappaResult kappa(uint32_t N, bool force_rational) {
  const auto t0 = std::chrono::steady_clock::now();
  Level lv = make_level(N);
  YSpace ys(lv);
  const uint32_t dim = ys.dim(1);

  // classes of the N depth-one generators at l = 0, in basis coordinates
  std::vector<SparseVec<RationalField>> cls(N);
  for (uint32_t e = 0; e < N; ++e) cls[e] = ys.reduce_root(UnityRoot{e}, 0);

  KappaResult res;
  res.N = N;
  res.dimY1 = dim;
  res.domain_dim = (uint64_t)N * N;
  res.codomain_dim = (uint64_t)dim * dim;

  SparseMat<RationalField> m;
  m.ncols = dim * dim;
  std::set<std::vector<std::pair<uint32_t, Rat>>> seen;
  RationalField f;
  for (uint32_t e1 = 0; e1 < N; ++e1) {
    for (uint32_t e2 = 0; e2 < N; ++e2) {
      // <e1-e2> (x) <e2> - <e2-e1> (x) <e1> + <e2> (x) <e1>
      SparseVec<RationalField> row;
      const uint32_t x1 = (uint32_t)(((int64_t)e1 - e2) % (int64_t)N + N) % N;
      const uint32_t x2 = (N - x1) % N;
      struct Part {
        uint32_t a, b;
        int sign;
      } parts[3] = {{x1, e2, +1}, {x2, e1, -1}, {e2, e1, +1}};
      for (const auto& part : parts) {
        for (const auto& [i, ci] : cls[part.a].entries)
          for (const auto& [j, cj] : cls[part.b].entries)
            row.entries.emplace_back(i * dim + j,
                                     part.sign > 0 ? ci * cj : Rat(-ci * cj));
      }
      row.sort_and_combine(f);
      if (row.empty()) continue;
      if (seen.insert(row.entries).second) m.rows.push_back(std::move(row));
    }
  }

  RankOptions opt;
  opt.force_rational = force_rational;
  opt.avoid = N;
  RankReport rr = rank_with_report(m, opt);
  res.rank = rr.rank;
  res.kappa = dim * dim - rr.rank;
  res.method = rr.method == RankMethod::kRational ? "rational" : "modular-verified";
  res.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return res;
}

uint64_t kappa_prime_formula(uint64_t p) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("the closed form applies to primes p >= 5");
  return (p * p - 1) / 24;
}

namespace {

// subgroup of (Z/pZ)^x generated by q and -1
std::set<uint64_t> subgroup_q_minus1(uint64_t p, uint64_t q) {
  std::set<uint64_t> H{1};
  std::vector<uint64_t> stack{1};
  const uint64_t gens[2] = {q % p, p - 1};
  while (!stack.empty()) {
    uint64_t x = stack.back();
    stack.pop_back();
    for (uint64_t g : gens) {
      uint64_t y = x * g % p;
      if (H.insert(y).second) stack.push_back(y);
    }
  }
  return H;
}

}  // namespace

uint32_t n_q(uint64_t p, uint64_t q) {
  if (p == q) throw std::invalid_argument("p and q must be distinct");
  if (!is_prime_u64(p) || !is_prime_u64(q))
    throw std::invalid_argument("p and q must be prime");
  auto H = subgroup_q_minus1(p, q);
  return (uint32_t)((p - 1) / H.size());
}

ConjectureReport conjecture_report(uint32_t N, bool force_rational) {
  ConjectureReport rep;
  rep.N = N;
  rep.shape = "none";

  Level lv = make_level(N);
  const auto& fac = lv.factorization;
  if (fac.size() == 1 && fac[0].second == 2 && fac[0].first >= 5) {
    const uint64_t p = fac[0].first;
    rep.shape = "p^2";
    rep.predicted = (int64_t)(p * (p - 1) * (p - 2) * (p - 3) / 24);
    rep.shape_ok = true;
  } else if (fac.size() == 1 && fac[0].second == 3 && fac[0].first >= 5) {
    const uint64_t p = fac[0].first;
    rep.shape = "p^3";
    rep.predicted = (int64_t)(p * p * (p - 1) * (p - 2) * (p - 3) / 24);
    rep.shape_ok = true;
  } else if (std::all_of(fac.begin(), fac.end(),
                         [](const auto& pe) { return pe.first == 2 || pe.first == 3; })) {
    rep.shape = "2^a3^b";
    rep.predicted = 0;
    rep.shape_ok = true;
  } else if (fac.size() == 2 && fac[0].second == 1 && fac[1].second == 1 &&
             (fac[0].first == 2 || fac[0].first == 3) && fac[1].first >= 5) {
    rep.shape = "qp";
    rep.predicted = (int64_t)n_q(fac[1].first, fac[0].first) - 1;
    rep.shape_ok = true;
  }
  if (!rep.shape_ok) return rep;
  rep.computed = kappa(N, force_rational).kappa;
  rep.match = ((int64_t)rep.computed == rep.predicted);
  return rep;
}

SparseMat<RationalField> lambda_conditions(uint32_t p, uint32_t q) {
  const uint32_t N = p * q;
  SparseMat<RationalField> conds;
  conds.ncols = N;
  RationalField f;
  auto push = [&](SparseVec<RationalField> v) {
    v.sort_and_combine(f);
    if (!v.empty()) conds.rows.push_back(std::move(v));
  };
  {
    SparseVec<RationalField> r;
    r.entries.emplace_back(0, Rat(1));
    push(std::move(r));
  }
  for (uint32_t i = 0; i < N; ++i) {
    SparseVec<RationalField> r;
    r.entries.emplace_back(i, Rat(1));
    r.entries.emplace_back((N - i) % N, Rat(-1));
    push(std::move(r));
  }
  for (uint32_t m = 1; m < p; ++m) {
    SparseVec<RationalField> r;
    r.entries.emplace_back((uint32_t)((uint64_t)m * q % N), Rat(1));
    for (uint32_t i = 0; i < q; ++i)
      r.entries.emplace_back((uint32_t)(((uint64_t)m + (uint64_t)i * p) % N), Rat(-1));
    push(std::move(r));
  }
  for (uint32_t n = 1; n < q; ++n) {
    SparseVec<RationalField> r;
    r.entries.emplace_back((uint32_t)((uint64_t)n * p % N), Rat(1));
    for (uint32_t i = 0; i < p; ++i)
      r.entries.emplace_back((uint32_t)(((uint64_t)n + (uint64_t)i * q) % N), Rat(-1));
    push(std::move(r));
  }
  return conds;
}

namespace {

// beta([x] (x) [y]) = [x+y] (x) [y] - [y] (x) [x+y] + [y] (x) [x]
std::map<std::pair<uint32_t, uint32_t>, Rat> beta_apply(
    uint32_t N, const std::map<std::pair<uint32_t, uint32_t>, Rat>& tensor) {
  std::map<std::pair<uint32_t, uint32_t>, Rat> out;
  auto add = [&](uint32_t u, uint32_t v, const Rat& c) {
    auto key = std::make_pair(u, v);
    auto it = out.find(key);
    if (it == out.end()) {
      out.emplace(key, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) out.erase(it);
    }
  };
  for (const auto& [xy, c] : tensor) {
    const uint32_t x = xy.first, y = xy.second, s = (x + y) % N;
    add(s, y, c);
    add(y, s, -c);
    add(y, x, c);
  }
  return out;
}

}  // namespace

DualCheck dual_kernel_check(uint32_t p, uint32_t q, bool force_rational) {
  if (p == q || !is_prime_u64(p) || !is_prime_u64(q))
    throw std::invalid_argument("the dual check needs distinct primes");
  DualCheck res;
  res.p = p;
  res.q = q;
  res.N = p * q;
  const uint32_t N = res.N;

  RationalField f;
  auto lambda = kernel_basis(f, lambda_conditions(p, q));
  res.dim_lambda = (uint32_t)lambda.size();
  Level lv = make_level(N);
  res.dim_y1 = (uint32_t)(lv.phi / 2 + lv.nu_count - 1);

  const uint32_t t = res.dim_lambda;
  SparseMat<RationalField> img;
  img.ncols = N * N;
  img.rows.reserve((size_t)t * t);
  for (uint32_t a = 0; a < t; ++a) {
    for (uint32_t b = 0; b < t; ++b) {
      std::map<std::pair<uint32_t, uint32_t>, Rat> tensor;
      for (const auto& [x, cx] : lambda[a].entries)
        for (const auto& [y, cy] : lambda[b].entries) tensor[{x, y}] = cx * cy;
      auto out = beta_apply(N, tensor);
      SparseVec<RationalField> row;
      for (const auto& [uv, c] : out)
        row.entries.emplace_back(uv.first * N + uv.second, c);
      img.rows.push_back(std::move(row));
    }
  }
  RankOptions opt;
  opt.force_rational = force_rational;
  opt.avoid = N;
  res.kernel_dim = t * t - rank(img, opt);
  res.kappa_value = kappa(N, force_rational).kappa;
  res.agree = (res.kernel_dim == res.kappa_value);
  return res;
}

WitnessReport lower_bound_witnesses(uint32_t p, uint32_t q) {
  if (p == q || !is_prime_u64(p) || !is_prime_u64(q))
    throw std::invalid_argument("witnesses need distinct primes");
  WitnessReport rep;
  rep.p = p;
  rep.q = q;
  rep.N = p * q;
  const uint32_t N = rep.N;

  auto H = subgroup_q_minus1(p, q);
  std::vector<std::vector<uint64_t>> cosets;
  std::set<uint64_t> used;
  for (uint64_t x = 1; x < p; ++x) {
    if (used.count(x)) continue;
    std::vector<uint64_t> c;
    for (uint64_t h : H) c.push_back(x * h % p);
    std::sort(c.begin(), c.end());
    for (uint64_t y : c) used.insert(y);
    cosets.push_back(std::move(c));
  }
  // Gamma_0 is the coset of 1; the others give the witnesses
  auto f_N = [&](uint64_t x) {
    std::map<std::pair<uint32_t, uint32_t>, Rat> out;
    for (uint64_t y = 1; y < p; ++y) {
      uint32_t qx = (uint32_t)((uint64_t)q * x % N), qy = (uint32_t)((uint64_t)q * y % N);
      out[{qx, qy}] += 1;
      out[{qy, qx}] -= 1;
    }
    return out;
  };
  size_t gamma0 = 0;
  for (size_t i = 0; i < cosets.size(); ++i)
    if (std::find(cosets[i].begin(), cosets[i].end(), 1u) != cosets[i].end()) gamma0 = i;

  rep.in_lambda_tensor = true;
  rep.in_kernel = true;
  rep.independent = true;
  auto conds = lambda_conditions(p, q);
  for (size_t i = 0; i < cosets.size(); ++i) {
    if (i == gamma0) continue;
    std::map<std::pair<uint32_t, uint32_t>, Rat> g;
    for (uint64_t x : cosets[i])
      for (const auto& [xy, c] : f_N(x)) {
        g[xy] += c;
        if (sgn(g[xy]) == 0) g.erase(xy);
      }
    // membership in Lambda (x) Lambda: every condition annihilates each slot
    for (const auto& cond : conds.rows) {
      std::map<uint32_t, Rat> left, right;
      for (const auto& [xy, c] : g) {
        for (const auto& [idx, cv] : cond.entries) {
          if (idx == xy.first) left[xy.second] += cv * c;
          if (idx == xy.second) right[xy.first] += cv * c;
        }
      }
      for (const auto& [k2, v] : left)
        if (sgn(v) != 0) rep.in_lambda_tensor = false;
      for (const auto& [k2, v] : right)
        if (sgn(v) != 0) rep.in_lambda_tensor = false;
    }
    if (!beta_apply(N, g).empty()) rep.in_kernel = false;
    // projection onto the Gamma_0 slice recovers (#H) sum_{x in Gamma} [qx]
    std::map<uint32_t, Rat> proj;
    for (const auto& [xy, c] : g) {
      // y must be q * (element of Gamma_0)
      for (uint64_t y0 : cosets[gamma0])
        if (xy.second == (uint32_t)((uint64_t)q * y0 % N)) proj[xy.first] += c;
    }
    std::map<uint32_t, Rat> expect;
    for (uint64_t x : cosets[i]) expect[(uint32_t)((uint64_t)q * x % N)] = Rat((long)H.size());
    for (auto it = proj.begin(); it != proj.end();)
      it = sgn(it->second) == 0 ? proj.erase(it) : std::next(it);
    if (proj != expect) rep.independent = false;
    rep.witnesses.push_back(std::move(g));
  }
  rep.count = (uint32_t)rep.witnesses.size();
  return rep;
}

uint64_t weight2_dimension(uint32_t N, bool force_rational) {
  if (N < 3) throw std::invalid_argument("the dimension formula needs N >= 3");
  Level lv = make_level(N);
  const uint64_t base = lv.phi / 2 + lv.nu_count - 1;
  return base * base + lv.phi + lv.nu_count - kappa(N, force_rational).kappa;
}

}  // namespace cyclokappa
