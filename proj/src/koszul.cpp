#include "syz/koszul.hpp"

#include <chrono>
#include <map>
#include <stdexcept>

#include "syz/linalg.hpp"
#include "syz/util.hpp"

namespace syz {

int64_t BettiDiagram::at(int p, int q) const {
  if (!in_window(p, q)) throw std::out_of_range("betti entry outside the computed window");
  auto it = entries.find({p, q});
  return it == entries.end() ? 0 : it->second;
}

FpMatrix koszul_differential(const GradedModule& M, int p, int q) {
  const uint32_t nv = M.ring.num_vars;
  if (p < 0 || p > static_cast<int>(nv) + 1) throw std::invalid_argument("wedge degree out of range");
  if (q + 1 > M.max_degree)
    throw std::out_of_range("strand needs the piece above the module truncation");
  const PrimeField& F = M.ring.field;
  const uint32_t dq = M.dim(q), dq1 = M.dim(q + 1);
  const uint64_t nrows = static_cast<uint64_t>(binom(nv, p - 1)) * dq1;
  const uint64_t ncols = static_cast<uint64_t>(binom(nv, p)) * dq;
  FpMatrix out(static_cast<uint32_t>(nrows), static_cast<uint32_t>(ncols));
  if (p >= 1 && p <= static_cast<int>(nv) && dq > 0 && dq1 > 0) {
    auto subs = subsets_lex(nv, p);
    auto subs1 = subsets_lex(nv, p - 1);
    std::map<std::vector<uint32_t>, uint32_t> rank_of;
    for (uint32_t i = 0; i < subs1.size(); ++i) rank_of[subs1[i]] = i;

    for (uint32_t s = 0; s < subs.size(); ++s) {
      for (int l = 0; l < p; ++l) {
        std::vector<uint32_t> T = subs[s];
        T.erase(T.begin() + l);
        const uint32_t t = rank_of.at(T);
        const bool negative = (l % 2 == 0);  // sign (-1)^(l+1), l zero-based
        const FpMatrix& mm = M.mult(subs[s][l], q);
        for (const Entry& e : mm.entries())
          out.add(t * dq1 + e.row, s * dq + e.col, negative ? F.p - e.val : e.val);
      }
    }
  }
  out.finalize(F);
  return out;
}

int64_t koszul_dim(const GradedModule& M, int p, int q, int threads) {
  const PrimeField& F = M.ring.field;
  FpMatrix d_out = koszul_differential(M, p, q);
  FpMatrix d_in = koszul_differential(M, p + 1, q - 1);
  int64_t b = static_cast<int64_t>(d_out.cols()) - static_cast<int64_t>(rank(d_out, F, threads)) -
              static_cast<int64_t>(rank(d_in, F, threads));
  if (b < 0) throw std::logic_error("negative Koszul dimension: differential assembly bug");
  return b;
}

BettiDiagram betti_diagram(const GradedModule& M, int p_max, int q_max, const BettiOptions& opt) {
  if (p_max < 0 || q_max < 0) throw std::invalid_argument("empty window");
  if (q_max + 1 > M.max_degree)
    throw std::out_of_range("window row q_max needs module pieces through q_max + 1");
  const PrimeField& F = M.ring.field;
  BettiDiagram D;
  D.num_vars = M.ring.num_vars;
  D.p_max = p_max;
  D.q_max = q_max;

  std::map<std::pair<int, int>, uint64_t> rank_cache;
  auto rank_cached = [&](int p, int q, const FpMatrix& d) {
    auto it = rank_cache.find({p, q});
    if (it != rank_cache.end()) return it->second;
    uint64_t r = rank(d, F, opt.threads);
    rank_cache[{p, q}] = r;
    return r;
  };

  for (int q = 0; q <= q_max; ++q) {
    for (int p = 0; p <= p_max; ++p) {
      auto t0 = std::chrono::steady_clock::now();
      FpMatrix d_out = koszul_differential(M, p, q);
      FpMatrix d_in = koszul_differential(M, p + 1, q - 1);
      StrandStats st;
      st.p = p;
      st.q = q;
      st.out_rows = d_out.rows();
      st.out_cols = d_out.cols();
      st.out_nnz = d_out.nnz();
      if (opt.verify_complex) {
        st.complex_zero = FpMatrix::mul(d_out, d_in, F).is_zero();
        if (!st.complex_zero) throw std::logic_error("koszul differentials do not compose to zero");
      }
      st.rank_out = rank_cached(p, q, d_out);
      st.rank_in = rank_cached(p + 1, q - 1, d_in);
      int64_t b = static_cast<int64_t>(d_out.cols()) - static_cast<int64_t>(st.rank_out) -
                  static_cast<int64_t>(st.rank_in);
      if (b < 0) throw std::logic_error("negative Koszul dimension: differential assembly bug");
      D.entries[{p, q}] = b;
      st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (opt.stats) opt.stats->push_back(st);
    }
  }
  return D;
}

int64_t hilbert_from_diagram(const BettiDiagram& D, int d) {
  const int r = static_cast<int>(D.num_vars) - 1;
  int64_t h = 0;
  for (const auto& [pq, b] : D.entries) {
    const auto& [p, q] = pq;
    const int64_t c = binom(d + r - p - q, r);
    h += (p % 2 == 0 ? 1 : -1) * b * c;
  }
  return h;
}

std::vector<int64_t> diagonal_sums(const std::vector<int64_t>& h, uint32_t r, int k_max) {
  if (static_cast<int>(h.size()) < k_max + 1) throw std::invalid_argument("need h(0..k_max)");
  std::vector<int64_t> B(k_max + 1, 0);
  for (int k = 0; k <= k_max; ++k) {
    int64_t acc = h[k];
    for (int l = 0; l < k; ++l) acc -= B[l] * binom(r + k - l, r);
    B[k] = acc;
  }
  return B;
}

}  // namespace syz
