#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "syz/ring.hpp"

namespace syz {

// Betti numbers inside a finite window: entries with 0 <= p <= p_max and
// 0 <= q <= q_max are computed; anything outside is uncomputed, not zero.
struct BettiDiagram {
  uint32_t num_vars = 0;
  int p_max = -1, q_max = -1;
  std::map<std::pair<int, int>, int64_t> entries;

  bool in_window(int p, int q) const { return p >= 0 && p <= p_max && q >= 0 && q <= q_max; }
  int64_t at(int p, int q) const;  // throws outside the window
};

// Matrix of d_{p,q}: wedge^p V (x) M_q -> wedge^{p-1} V (x) M_{q+1} in the
// bases e_S (x) m_k with S the p-subsets of variables in lex order. Signs
// follow d(f_1 ^ ... ^ f_p (x) u) = sum_l (-1)^l f_1 ^..f_l-hat..^ f_p (x) u f_l.
FpMatrix koszul_differential(const GradedModule& M, int p, int q);

// b_{p,q} = dim ker d_{p,q} - rank d_{p+1,q-1}
int64_t koszul_dim(const GradedModule& M, int p, int q, int threads = 0);

struct StrandStats {
  int p = 0, q = 0;
  uint32_t out_rows = 0, out_cols = 0;
  uint64_t out_nnz = 0;
  uint64_t rank_out = 0, rank_in = 0;
  bool complex_zero = true;  // d_{p,q} composed with d_{p+1,q-1} vanishes
  double seconds = 0.0;
};

struct BettiOptions {
  int threads = 0;
  bool verify_complex = true;
  std::vector<StrandStats>* stats = nullptr;
};

// Fills every entry with p <= p_max, q <= q_max. Strands are assembled one
// at a time and dropped after rank extraction; differential ranks are shared
// between the two strands that use them.
BettiDiagram betti_diagram(const GradedModule& M, int p_max, int q_max,
                           const BettiOptions& opt = {});

// sum_{p,q} (-1)^p b_{p,q} C(d + r - p - q, r); reproduces dim M_d whenever
// the whole resolution sits inside the window
int64_t hilbert_from_diagram(const BettiDiagram& D, int d);

// B_0 = h(0); B_k = h(k) - sum_{l<k} B_l C(r + k - l, r). Equals the
// alternating diagonal sums sum_p (-1)^p b_{p,k-p} of the diagram.
std::vector<int64_t> diagonal_sums(const std::vector<int64_t>& h, uint32_t r, int k_max);

}  // namespace syz
