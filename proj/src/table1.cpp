#include "cyclokappa/kappa.hpp"

namespace cyclokappa {

// Published kappa values for every non-prime N up to 415, keyed by N.
// Data file is generated from the source table; do not edit by hand.
const std::vector<std::pair<uint32_t, uint32_t>>& table1() {
  static const std::vector<std::pair<uint32_t, uint32_t>> data = {
#include "table1_data.inc"
  };
  return data;
}

std::optional<uint32_t> table1_lookup(uint32_t N) {
  const auto& t = table1();
  auto it = std::lower_bound(t.begin(), t.end(), std::make_pair(N, 0u));
  if (it != t.end() && it->first == N) return it->second;
  return std::nullopt;
}

}  // namespace cyclokappa
