#ifndef CYCLOKAPPA_COPRODUCT_HPP
#define CYCLOKAPPA_COPRODUCT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyclokappa/fields.hpp"

namespace cyclokappa {

// Letters of the iterated-integral alphabet {0} union mu_N: the zero letter
// is kZeroLetter, roots are stored by exponent.
using Letter = int32_t;
constexpr Letter kZeroLetter = -1;
inline Letter root_letter(uint32_t exp) { return (Letter)exp; }
inline bool is_zero_letter(Letter l) { return l == kZeroLetter; }

// Formal iterated-integral symbol I(a0; a1,...,ak; a_{k+1}).
struct IIWord {
  Letter a0 = kZeroLetter;
  std::vector<Letter> mid;
  Letter a_end = 0;

  uint32_t weight() const { return (uint32_t)mid.size(); }
  uint32_t depth() const {
    uint32_t d = 0;
    for (Letter l : mid)
      if (!is_zero_letter(l)) ++d;
    return d;
  }
  bool operator==(const IIWord&) const = default;
  auto operator<=>(const IIWord&) const = default;
};

// Canonical representative for the unit (any empty-middle word equals 1).
inline IIWord unit_word() { return IIWord{kZeroLetter, {}, 0}; }

// Commutative product of words; the empty multiset is the unit.
struct SymbolMonomial {
  std::vector<IIWord> factors;  // kept sorted

  void push(IIWord w) {
    factors.push_back(std::move(w));
    std::sort(factors.begin(), factors.end());
  }
  uint32_t weight() const {
    uint32_t s = 0;
    for (const auto& f : factors) s += f.weight();
    return s;
  }
  uint32_t depth() const {
    uint32_t s = 0;
    for (const auto& f : factors) s += f.depth();
    return s;
  }
  bool operator==(const SymbolMonomial&) const = default;
  auto operator<=>(const SymbolMonomial&) const = default;
};

SymbolMonomial monomial_product(const SymbolMonomial& a, const SymbolMonomial& b);

struct AlgebraElement {
  std::map<SymbolMonomial, Rat> terms;

  void add(const SymbolMonomial& m, const Rat& c);
  bool operator==(const AlgebraElement&) const = default;
};

struct TensorElement {
  std::map<std::pair<SymbolMonomial, IIWord>, Rat> terms;

  void add(const SymbolMonomial& m, const IIWord& w, const Rat& c);
  bool operator==(const TensorElement&) const = default;
};

// Normal form of a single word: empty middle -> 1; a nonempty all-zero
// middle -> 0; anything else is kept verbatim.
AlgebraElement normalize(const IIWord& w);

// Full Goncharov coproduct of a word (left factors normalized; vanishing
// terms dropped; right slot reduced to the canonical unit word when empty).
TensorElement goncharov_coproduct(const IIWord& w);

// Coproduct extended multiplicatively to a monomial; the right slots of the
// factors multiply into a monomial.  Used for coassociativity checking.
std::map<std::pair<SymbolMonomial, SymbolMonomial>, Rat> coproduct_on_monomial(
    const SymbolMonomial& m);

// The depth-leading truncation: for a word of the canonical shape
// I(0; {0}^l0, e1, {0}^l1, ..., ed, {0}^ld; e_{d+1}) returns the 1 (x) w
// term plus the two binomial sums, with every left factor of the shape
// I(0; x, {0}^r; 1).  Rejects words not of that shape.
TensorElement depth_leading_coproduct(uint32_t N, const IIWord& w);

// Textual grammar used by the CLI: `I(0; e1, 0, e3; 1)` with `eK` the root
// of exponent K, `1` shorthand for e0, and `0` the zero letter.
IIWord parse_word(const std::string& text, uint32_t N);
std::string render_word(const IIWord& w);
std::string render_tensor(const TensorElement& t);

}  // namespace cyclokappa

#endif
