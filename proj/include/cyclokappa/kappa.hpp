#ifndef CYCLOKAPPA_KAPPA_HPP
#define CYCLOKAPPA_KAPPA_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclokappa/depthgraded.hpp"
#include "cyclokappa/fields.hpp"

namespace cyclokappa {

struct KappaResult {
  uint32_t N = 0;
  uint32_t kappa = 0;
  uint32_t dimY1 = 0;
  uint64_t domain_dim = 0;    // N^2 generators
  uint64_t codomain_dim = 0;  // dimY1^2
  uint32_t rank = 0;
  int64_t elapsed_ms = 0;
  std::string method;  // "rational" | "modular-verified"
};

// Dimension of the cokernel of the weight-2 iterated derivation map.
KappaResult kappa(uint32_t N, bool force_rational = false);

// kappa(p) = (p^2 - 1)/24 for primes p >= 5.
uint64_t kappa_prime_formula(uint64_t p);

// Index in (Z/pZ)^x of the subgroup generated by q and -1.
uint32_t n_q(uint64_t p, uint64_t q);

struct ConjectureReport {
  uint32_t N = 0;
  std::string shape;  // "p^2", "p^3", "2^a3^b", "qp", or "none"
  bool shape_ok = false;
  int64_t predicted = 0;
  uint32_t computed = 0;
  bool match = false;
};
ConjectureReport conjecture_report(uint32_t N, bool force_rational = false);

// Dual-side cross-check for N = p*q, distinct primes: the kernel of the
// bilinear shift map on Lambda_N (x) Lambda_N has dimension kappa(pq).
struct DualCheck {
  uint32_t p = 0, q = 0, N = 0;
  uint32_t dim_lambda = 0;
  uint32_t dim_y1 = 0;
  uint32_t kernel_dim = 0;
  uint32_t kappa_value = 0;
  bool agree = false;
};
DualCheck dual_kernel_check(uint32_t p, uint32_t q, bool force_rational = false);

// Explicit kernel vectors g_N(Gamma), one per nontrivial coset of <q,-1>.
struct WitnessReport {
  uint32_t p = 0, q = 0, N = 0;
  uint32_t count = 0;  // n_q(p) - 1
  bool in_lambda_tensor = false;
  bool in_kernel = false;
  bool independent = false;
  std::vector<std::map<std::pair<uint32_t, uint32_t>, Rat>> witnesses;
};
WitnessReport lower_bound_witnesses(uint32_t p, uint32_t q);

// Dimension of the weight-2 space: (phi/2 + nu - 1)^2 + phi + nu - kappa(N).
uint64_t weight2_dimension(uint32_t N, bool force_rational = false);

// Embedded copy of the published kappa table for non-prime N <= 415.
const std::vector<std::pair<uint32_t, uint32_t>>& table1();
std::optional<uint32_t> table1_lookup(uint32_t N);

// The Lambda_N conditions as rows of functionals on Q[Z/NZ] (used by the
// dual check and its tests).
SparseMat<RationalField> lambda_conditions(uint32_t p, uint32_t q);

}  // namespace cyclokappa

#endif
