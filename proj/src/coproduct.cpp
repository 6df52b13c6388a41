#include "cyclokappa/coproduct.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace cyclokappa {

SymbolMonomial monomial_product(const SymbolMonomial& a, const SymbolMonomial& b) {
  SymbolMonomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  std::merge(a.factors.begin(), a.factors.end(), b.factors.begin(), b.factors.end(),
             std::back_inserter(out.factors));
  return out;
}

void AlgebraElement::add(const SymbolMonomial& m, const Rat& c) {
  if (sgn(c) == 0) return;
  auto it = terms.find(m);
  if (it == terms.end()) {
    terms.emplace(m, c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
  }
}

void TensorElement::add(const SymbolMonomial& m, const IIWord& w, const Rat& c) {
  if (sgn(c) == 0) return;
  auto key = std::make_pair(m, w);
  auto it = terms.find(key);
  if (it == terms.end()) {
    terms.emplace(std::move(key), c);
  } else {
    it->second += c;
    if (sgn(it->second) == 0) terms.erase(it);
  }
}

AlgebraElement normalize(const IIWord& w) {
  AlgebraElement out;
  if (w.mid.empty()) {
    out.add(SymbolMonomial{}, Rat(1));
    return out;
  }
  bool all_zero = true;
  for (Letter l : w.mid)
    if (!is_zero_letter(l)) all_zero = false;
  if (all_zero) return out;  // I(a; 0,...,0; b) = 0
  SymbolMonomial m;
  m.push(w);
  out.add(m, Rat(1));
  return out;
}

TensorElement goncharov_coproduct(const IIWord& w) {
  TensorElement out;
  AlgebraElement nw = normalize(w);
  if (nw.terms.empty()) return out;  // Delta(0) = 0
  if (nw.terms.begin()->first.factors.empty()) {
    out.add(SymbolMonomial{}, unit_word(), Rat(1));  // Delta(1) = 1 (x) 1
    return out;
  }

  const uint32_t k = w.weight();
  std::vector<Letter> a(k + 2);
  a[0] = w.a0;
  for (uint32_t i = 0; i < k; ++i) a[i + 1] = w.mid[i];
  a[k + 1] = w.a_end;

  // iterate over all subsequences 0 = i_0 < i_1 < ... < i_l < i_{l+1} = k+1
  // of interior points, encoded as bitmasks over {1,...,k}
  for (uint64_t mask = 0; mask < (1ull << k); ++mask) {
    std::vector<uint32_t> idx;
    idx.push_back(0);
    for (uint32_t j = 0; j < k; ++j)
      if (mask & (1ull << j)) idx.push_back(j + 1);
    idx.push_back(k + 1);

    SymbolMonomial left;
    bool dead = false;
    for (size_t j = 0; j + 1 < idx.size(); ++j) {
      IIWord f;
      f.a0 = a[idx[j]];
      f.mid.assign(a.begin() + idx[j] + 1, a.begin() + idx[j + 1]);
      f.a_end = a[idx[j + 1]];
      AlgebraElement nf = normalize(f);
      if (nf.terms.empty()) {
        dead = true;
        break;
      }
      const SymbolMonomial& fm = nf.terms.begin()->first;
      if (!fm.factors.empty()) left.push(fm.factors[0]);
    }
    if (dead) continue;

    IIWord right;
    right.a0 = w.a0;
    for (size_t j = 1; j + 1 < idx.size(); ++j) right.mid.push_back(a[idx[j]]);
    right.a_end = w.a_end;
    AlgebraElement nr = normalize(right);
    if (nr.terms.empty()) continue;
    if (nr.terms.begin()->first.factors.empty())
      out.add(left, unit_word(), Rat(1));
    else
      out.add(left, right, Rat(1));
  }
  return out;
}

std::map<std::pair<SymbolMonomial, SymbolMonomial>, Rat> coproduct_on_monomial(
    const SymbolMonomial& m) {
  std::map<std::pair<SymbolMonomial, SymbolMonomial>, Rat> acc;
  acc[{SymbolMonomial{}, SymbolMonomial{}}] = Rat(1);
  for (const auto& f : m.factors) {
    TensorElement d = goncharov_coproduct(f);
    std::map<std::pair<SymbolMonomial, SymbolMonomial>, Rat> next;
    for (const auto& [lr, c] : acc) {
      for (const auto& [mw, c2] : d.terms) {
        SymbolMonomial rm = lr.second;
        if (!(mw.second == unit_word())) rm.push(mw.second);
        auto key = std::make_pair(monomial_product(lr.first, mw.first), std::move(rm));
        auto it = next.find(key);
        if (it == next.end())
          next.emplace(std::move(key), c * c2);
        else
          it->second += c * c2;
      }
    }
    for (auto it = next.begin(); it != next.end();)
      it = sgn(it->second) == 0 ? next.erase(it) : std::next(it);
    acc = std::move(next);
  }
  return acc;
}

namespace {

struct CanonicalShape {
  std::vector<uint32_t> runs;   // l_0, ..., l_d
  std::vector<Letter> eps;      // e_1, ..., e_d (nonzero letters)
  Letter eps_end = 0;           // e_{d+1}
};

// I(0; {0}^l0, e1, {0}^l1, ..., ed, {0}^ld; e_{d+1}) with all e in mu_N
bool match_canonical(const IIWord& w, CanonicalShape& out) {
  if (!is_zero_letter(w.a0) || is_zero_letter(w.a_end)) return false;
  out = CanonicalShape{};
  out.eps_end = w.a_end;
  uint32_t run = 0;
  for (Letter l : w.mid) {
    if (is_zero_letter(l)) {
      ++run;
    } else {
      out.runs.push_back(run);
      run = 0;
      out.eps.push_back(l);
    }
  }
  out.runs.push_back(run);
  return true;
}

long binom_ll(uint32_t n, uint32_t k) {
  long r = 1;
  for (uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

IIWord left_factor(uint32_t N, Letter num, Letter den, uint32_t r) {
  IIWord f;
  f.a0 = kZeroLetter;
  int64_t e = (int64_t)num - (int64_t)den;
  e %= (int64_t)N;
  if (e < 0) e += N;
  f.mid.push_back(root_letter((uint32_t)e));
  for (uint32_t i = 0; i < r; ++i) f.mid.push_back(kZeroLetter);
  f.a_end = root_letter(0);
  return f;
}

IIWord rebuild(const CanonicalShape& s) {
  IIWord w;
  w.a0 = kZeroLetter;
  for (size_t i = 0; i < s.eps.size(); ++i) {
    for (uint32_t z = 0; z < s.runs[i]; ++z) w.mid.push_back(kZeroLetter);
    w.mid.push_back(s.eps[i]);
  }
  for (uint32_t z = 0; z < s.runs.back(); ++z) w.mid.push_back(kZeroLetter);
  w.a_end = s.eps_end;
  return w;
}

void add_right(TensorElement& out, const SymbolMonomial& left, const IIWord& right,
               const Rat& c) {
  AlgebraElement nr = normalize(right);
  if (nr.terms.empty()) return;
  if (nr.terms.begin()->first.factors.empty())
    out.add(left, unit_word(), c);
  else
    out.add(left, right, c);
}

}  // namespace

TensorElement depth_leading_coproduct(uint32_t N, const IIWord& w) {
  CanonicalShape s;
  if (!match_canonical(w, s))
    throw std::invalid_argument(
        "word is not of the canonical shape I(0; {0}^l0, e1, ..., ed, {0}^ld; e)");
  const uint32_t d = (uint32_t)s.eps.size();
  TensorElement out;
  if (d == 0) return out;  // all-zero middle normalizes to 0

  out.add(SymbolMonomial{}, w, Rat(1));

  // epsfull[i] = e_{i+1} including the right endpoint as e_{d+1}
  std::vector<Letter> epsfull = s.eps;
  epsfull.push_back(s.eps_end);
  const std::vector<uint32_t>& l = s.runs;  // l[0..d]

  for (uint32_t i = 1; i <= d; ++i) {
    uint32_t li = l[i], lim1 = l[i - 1];
    for (uint32_t r = li; r <= lim1 + li; ++r) {
      long coef = ((r - li) % 2 ? -1 : 1) * binom_ll(r, li);
      SymbolMonomial mono;
      mono.push(left_factor(N, epsfull[i - 1], epsfull[i], r));
      CanonicalShape t;
      t.eps_end = s.eps_end;
      for (uint32_t j = 1; j <= d; ++j)
        if (j != i) t.eps.push_back(s.eps[j - 1]);
      for (uint32_t j = 0; j <= d; ++j) {
        if (j == i - 1)
          t.runs.push_back(lim1 + li - r);
        else if (j != i)
          t.runs.push_back(l[j]);
      }
      add_right(out, mono, rebuild(t), Rat(coef));
    }
  }
  for (uint32_t i = 1; i < d; ++i) {
    uint32_t li = l[i], lip1 = l[i + 1];
    for (uint32_t r = li; r <= li + lip1; ++r) {
      long coef = -(li % 2 ? -1 : 1) * binom_ll(r, li);
      SymbolMonomial mono;
      mono.push(left_factor(N, epsfull[i], epsfull[i - 1], r));
      CanonicalShape t;
      t.eps_end = s.eps_end;
      for (uint32_t j = 1; j <= d; ++j)
        if (j != i + 1) t.eps.push_back(s.eps[j - 1]);
      for (uint32_t j = 0; j <= d; ++j) {
        if (j == i)
          t.runs.push_back(li + lip1 - r);
        else if (j != i + 1)
          t.runs.push_back(l[j]);
      }
      add_right(out, mono, rebuild(t), Rat(coef));
    }
  }
  return out;
}

// --- textual grammar -------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at position " + std::to_string(pos) + ": " +
                                msg);
  }
  void skip_ws() {
    while (pos < s.size() && isspace((unsigned char)s[pos])) ++pos;
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) fail(std::string("expected '") + c + "'");
    ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < s.size() && s[pos] == c;
  }
  Letter letter(uint32_t N) {
    skip_ws();
    if (pos >= s.size()) fail("expected a letter");
    if (s[pos] == '0') {
      ++pos;
      return kZeroLetter;
    }
    if (s[pos] == '1') {
      ++pos;
      return root_letter(0);
    }
    if (s[pos] == 'e' || s[pos] == 'E') {
      ++pos;
      size_t start = pos;
      while (pos < s.size() && isdigit((unsigned char)s[pos])) ++pos;
      if (pos == start) fail("expected an exponent after 'e'");
      unsigned long k = std::stoul(s.substr(start, pos - start));
      if (k >= N) fail("exponent " + std::to_string(k) + " is not a letter at level " +
                       std::to_string(N));
      return root_letter((uint32_t)k);
    }
    fail("letters are '0', '1' or 'eK'");
  }
};

}  // namespace

IIWord parse_word(const std::string& text, uint32_t N) {
  if (N == 0) throw std::invalid_argument("level must be positive");
  Parser p{text};
  p.skip_ws();
  if (p.pos >= text.size() || (text[p.pos] != 'I' && text[p.pos] != 'i'))
    p.fail("expected 'I'");
  ++p.pos;
  p.expect('(');
  IIWord w;
  w.a0 = p.letter(N);
  p.expect(';');
  if (!p.peek(';')) {
    w.mid.push_back(p.letter(N));
    while (p.peek(',')) {
      p.expect(',');
      w.mid.push_back(p.letter(N));
    }
  }
  p.expect(';');
  w.a_end = p.letter(N);
  p.expect(')');
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return w;
}

static std::string render_letter(Letter l) {
  if (is_zero_letter(l)) return "0";
  if (l == 0) return "1";
  return "e" + std::to_string(l);
}

std::string render_word(const IIWord& w) {
  std::string out = "I(" + render_letter(w.a0) + "; ";
  for (size_t i = 0; i < w.mid.size(); ++i) {
    if (i) out += ", ";
    out += render_letter(w.mid[i]);
  }
  out += "; " + render_letter(w.a_end) + ")";
  return out;
}

static std::string render_monomial(const SymbolMonomial& m) {
  if (m.factors.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < m.factors.size(); ++i) {
    if (i) out += "*";
    out += render_word(m.factors[i]);
  }
  return out;
}

std::string render_tensor(const TensorElement& t) {
  if (t.terms.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mw, c] : t.terms) {
    Rat coef = c;
    if (first) {
      if (coef < 0) {
        out << "- ";
        coef = -coef;
      }
      first = false;
    } else {
      out << (coef < 0 ? " - " : " + ");
      if (coef < 0) coef = -coef;
    }
    if (coef != 1) out << coef.get_str() << "*";
    const auto& right = mw.second;
    out << render_monomial(mw.first) << " (x) "
        << (right == unit_word() ? std::string("1") : render_word(right));
  }
  return out.str();
}

}  // namespace cyclokappa
