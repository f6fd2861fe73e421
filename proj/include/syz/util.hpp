#pragma once

#include <cstdint>
#include <vector>

namespace syz {

// C(n, k) exactly; 0 outside the Pascal triangle. Every window this tool
// touches keeps n below 40, so int64 never overflows here.
inline int64_t binom(int64_t n, int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  int64_t r = 1;
  for (int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// All k-element subsets of {0,...,n-1} as increasing index tuples, in
// lexicographic order.
std::vector<std::vector<uint32_t>> subsets_lex(uint32_t n, uint32_t k);

}  // namespace syz
