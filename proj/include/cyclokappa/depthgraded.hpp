#ifndef CYCLOKAPPA_DEPTHGRADED_HPP
#define CYCLOKAPPA_DEPTHGRADED_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cyclokappa/cyclotomic.hpp"
#include "cyclokappa/elimination.hpp"
#include "cyclokappa/fields.hpp"
#include "cyclokappa/sparse.hpp"

namespace cyclokappa {

// Basis symbol of the depth-graded model: d roots paired with d zero-run
// lengths; weight = d + sum of run lengths.
struct BiSeq {
  std::vector<uint32_t> eps;  // root exponents
  std::vector<uint32_t> ls;   // nonnegative run lengths

  uint32_t depth() const { return (uint32_t)eps.size(); }
  uint32_t weight() const {
    uint32_t w = depth();
    for (uint32_t l : ls) w += l;
    return w;
  }
  bool operator==(const BiSeq&) const = default;
  auto operator<=>(const BiSeq& o) const {
    if (auto c = ls <=> o.ls; c != 0) return c;
    return eps <=> o.eps;
  }
};

// Symbol-indexed vectors over the two coefficient fields.
using QVec = std::map<BiSeq, Rat>;       // over the rationals
using PVec = std::map<BiSeq, uint64_t>;  // over F_p, entries reduced mod p

void qvec_add(QVec& dst, const BiSeq& key, const Rat& c);
void pvec_add(const PrimeField& f, PVec& dst, const BiSeq& key, uint64_t c);

enum class Alphabet { kFull, kNu };  // mu_N or nu_N letters

// Enumeration of all BiSeq of given depth and weight over the chosen
// alphabet, in lexicographic (ls, eps) order; bijective index <-> symbol.
struct SymbolSpace {
  uint32_t d = 0, k = 0;
  std::vector<BiSeq> symbols;
  std::map<BiSeq, uint32_t> index;

  SymbolSpace() = default;
  SymbolSpace(const Level& lv, uint32_t d, uint32_t k, Alphabet alphabet);
  uint32_t dim() const { return (uint32_t)symbols.size(); }
  uint32_t index_of(const BiSeq& s) const;

  SparseVec<PrimeField> to_coords(const PrimeField& f, const PVec& v) const;
  PVec from_coords(const SparseVec<PrimeField>& v) const;
};

// The depth-one quotient space: for each weight k, the span of the N root
// symbols at l = k-1 modulo the three relation families
//   (i)   <1;0> = 0
//   (ii)  <a;l> = (-1)^l <a^{-1};l>
//   (iii) <a^M;l> = M^l sum_{b in mu_M} <ab;l>   for M | N, (a^M,l) != (1,0).
// Presentations are built per weight on first use; build them up front if an
// instance is shared across threads.
class YSpace {
 public:
  explicit YSpace(const Level& lv) : lv_(lv) {}

  const Level& level() const { return lv_; }
  const QuotientPresentation& presentation(uint32_t k);
  uint32_t dim(uint32_t k) { return presentation(k).dim(); }

  // Class of <x;l> in the weight-(l+1) quotient, in basis coordinates.
  SparseVec<RationalField> reduce_root(UnityRoot x, uint32_t l);

 private:
  Level lv_;
  std::map<uint32_t, QuotientPresentation> cache_;
};

SparseMat<RationalField> y_relations(const Level& lv, uint32_t l);

// ---------------------------------------------------------------------------
// Section maps from the quotient back into nu_N-supported vectors.
// ---------------------------------------------------------------------------

// Theta(<x;l>): the inverse of W -> Y, with values over Q.
QVec theta_cap(const Level& lv, UnityRoot x, uint32_t l);
// theta(x): its weight-1 shadow mod p, for x in mu_{N/q}.
PVec theta_small(const Level& lv, UnityRoot x);
// theta~(x): theta(x) for x != 1, and -sum_{y in mu_{N/q}} theta(y) at x = 1.
PVec theta_tilde(const Level& lv, UnityRoot x);

// ---------------------------------------------------------------------------
// The derivation maps.
// ---------------------------------------------------------------------------

// One expansion term of D_d: coefficient, the depth-one output <y;r> and the
// residual depth-(d-1) symbol.
struct DTerm {
  long coef = 0;
  uint32_t y_exp = 0;
  uint32_t y_l = 0;
  BiSeq rest;
};

std::vector<DTerm> d_map_terms(const Level& lv, const BiSeq& s);

// E_d = iota_d o D_d as an endomorphism of nu-supported vectors over Q.
QVec e_map(const Level& lv, const QVec& v);
// Its mod-p reduction, implemented directly from the explicit mod-p formula.
PVec e_map_modp(const Level& lv, const PVec& v);

// The three operator families whose signed sum is E_d - id mod p.
PVec op_L(const Level& lv, uint32_t i, const PVec& v);
PVec op_R(const Level& lv, uint32_t i, const PVec& v);
PVec op_S(const Level& lv, const PVec& v);

// Diagonal Galois action on symbols.
PVec galois_apply(const Level& lv, GaloisElement s, const PVec& v);

// ---------------------------------------------------------------------------
// Theorem checkers.
// ---------------------------------------------------------------------------

// Coordinates of (Y^{(x)d})_k: per weight composition (k_1..k_d), one block
// of product dimensions of the per-slot quotients.
struct YTensorSpace {
  uint32_t d = 0, k = 0;
  uint32_t total_dim = 0;
  // key: per-slot (l_i, basis position); value: coordinate index
  std::map<std::vector<std::pair<uint32_t, uint32_t>>, uint32_t> index;

  YTensorSpace() = default;
  YTensorSpace(YSpace& ys, uint32_t d, uint32_t k);
};

// D_d^iter of a single symbol, in YTensorSpace coordinates.
SparseVec<RationalField> d_iter_on_symbol(const Level& lv, YSpace& ys,
                                          const YTensorSpace& codomain, const BiSeq& s);

// Cokernel dimension of (X^{(x)d})_k -> (Y^{(x)d})_k; zero iff the span
// statement P(N,k,d) holds.
uint32_t surjectivity_check(const Level& lv, uint32_t k, uint32_t d,
                            bool force_rational = false);

struct BasisCheck {
  bool bijective = false;
  bool stable = false;  // D_d keeps nu-supported vectors nu-supported
  uint32_t dim_domain = 0;
  uint32_t dim_codomain = 0;
};
BasisCheck basis_bijectivity_check(const Level& lv, uint32_t k, uint32_t d,
                                   bool force_rational = false);

// E_d - id = sum_i L_i - sum_i R_i + S on every basis symbol of weight k.
bool decomposition_check(const Level& lv, uint32_t k, uint32_t d);

// Nilpotency index of E_d - id mod p on the weight-k part, or nullopt if the
// map fails to be unipotent (a falsification).
std::optional<uint32_t> unipotence_check(const Level& lv, uint32_t k, uint32_t d);

}  // namespace cyclokappa

#endif
