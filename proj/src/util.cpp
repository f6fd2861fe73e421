#include "syz/util.hpp"

namespace syz {

std::vector<std::vector<uint32_t>> subsets_lex(uint32_t n, uint32_t k) {
  std::vector<std::vector<uint32_t>> out;
  if (k > n) return out;
  std::vector<uint32_t> cur(k);
  for (uint32_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    if (k == 0) break;
    // advance to the next combination in lex order
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (uint32_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

}  // namespace syz
