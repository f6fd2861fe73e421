#include "syz/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace syz {

int hardware_threads() {
  unsigned n = std::thread::hardware_concurrency();
  return n ? static_cast<int>(n) : 1;
}

namespace {

// Row-major dense workspace. Values are allowed to drift above p between
// reductions: with p < 2^31, each unreduced axpy adds at most (p-1)^2, so
// axpy_budget() pivot steps fit in uint64 before a global re-reduction.
struct Dense {
  uint32_t m = 0, n = 0;
  std::vector<uint64_t> store;
  std::vector<uint64_t*> row;

  Dense(uint32_t m_, uint32_t n_) : m(m_), n(n_), store(size_t(m_) * n_, 0), row(m_) {
    for (uint32_t i = 0; i < m; ++i) row[i] = store.data() + size_t(i) * n;
  }
};

uint64_t axpy_budget(uint64_t p) { return (UINT64_MAX - (p - 1)) / ((p - 1) * (p - 1)); }

void axpy_range(uint64_t* dst, const uint64_t* src, uint64_t c, uint32_t lo, uint32_t hi) {
  for (uint32_t j = lo; j < hi; ++j) dst[j] += c * src[j];
}

uint64_t dense_rank(Dense& d, const PrimeField& F, int threads) {
  const uint64_t p = F.p;
  const uint64_t budget = axpy_budget(p);
  uint64_t pending = 0;
  uint32_t rank = 0;
  for (uint32_t col = 0; col < d.n && rank < d.m; ++col) {
    uint32_t pr = UINT32_MAX;
    for (uint32_t i = rank; i < d.m; ++i) {
      if (d.row[i][col] % p != 0) {
        pr = i;
        break;
      }
    }
    if (pr == UINT32_MAX) continue;
    std::swap(d.row[rank], d.row[pr]);
    uint64_t* prow = d.row[rank];
    for (uint32_t j = col; j < d.n; ++j) prow[j] %= p;
    const uint64_t pinv = F.inv(prow[col]);
    for (uint32_t j = col; j < d.n; ++j) prow[j] = prow[j] * pinv % p;

    auto eliminate = [&](uint32_t ilo, uint32_t ihi) {
      for (uint32_t i = ilo; i < ihi; ++i) {
        uint64_t c = d.row[i][col] % p;
        if (c == 0) continue;
        c = p - c;
        axpy_range(d.row[i], prow, c, col + 1, d.n);
        d.row[i][col] = 0;
      }
    };
    const uint32_t below = d.m - (rank + 1);
    const uint64_t work = uint64_t(below) * (d.n - col);
    if (threads > 1 && work > (1u << 21) && below >= 2 * static_cast<uint32_t>(threads)) {
      std::vector<std::thread> pool;
      uint32_t chunk = (below + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        uint32_t lo = rank + 1 + t * chunk;
        uint32_t hi = std::min(d.m, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(eliminate, lo, hi);
      }
      for (auto& th : pool) th.join();
    } else {
      eliminate(rank + 1, d.m);
    }
    ++rank;
    if (++pending >= budget) {
      for (uint32_t i = rank; i < d.m; ++i)
        for (uint32_t j = col; j < d.n; ++j) d.row[i][j] %= p;
      pending = 0;
    }
  }
  return rank;
}

using SparseRow = std::vector<std::pair<uint32_t, uint64_t>>;  // (col, val) ascending

// Markowitz-style elimination. Bails out to dense_rank on the active
// submatrix when fill-in crosses 30%.
uint64_t sparse_rank(const FpMatrix& m, const PrimeField& F, int threads) {
  const uint32_t nrows = m.rows(), ncols = m.cols();
  std::vector<SparseRow> rows(nrows);
  for (const Entry& e : m.entries()) rows[e.row].push_back({e.col, e.val});

  std::vector<uint32_t> col_nnz(ncols, 0);
  std::vector<std::vector<uint32_t>> col_rows(ncols);  // may hold stale ids
  for (const Entry& e : m.entries()) {
    ++col_nnz[e.col];
    col_rows[e.col].push_back(e.row);
  }
  std::vector<char> row_active(nrows, 1), col_active(ncols, 1);
  uint64_t nnz = m.nnz();
  uint32_t active_rows = nrows, active_cols = ncols;
  uint64_t rank = 0;

  auto row_has = [&](uint32_t r, uint32_t c) -> const std::pair<uint32_t, uint64_t>* {
    const SparseRow& row = rows[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& e, uint32_t c_) { return e.first < c_; });
    return (it != row.end() && it->first == c) ? &*it : nullptr;
  };

  while (true) {
    if (nnz == 0 || active_rows == 0 || active_cols == 0) return rank;
    if (nnz * 10 > uint64_t(active_rows) * active_cols * 3) break;  // fill-in > 30%: go dense

    // cheapest active column, lowest index on ties
    uint32_t pc = UINT32_MAX, best = UINT32_MAX;
    for (uint32_t c = 0; c < ncols; ++c) {
      if (col_active[c] && col_nnz[c] > 0 && col_nnz[c] < best) {
        best = col_nnz[c];
        pc = c;
      }
    }
    if (pc == UINT32_MAX) return rank;

    // cheapest row among those meeting the column, lowest index on ties
    std::vector<uint32_t> hits;
    for (uint32_t r : col_rows[pc]) {
      if (row_active[r] && row_has(r, pc)) hits.push_back(r);
    }
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    col_rows[pc] = hits;
    if (hits.empty()) {
      col_nnz[pc] = 0;
      continue;
    }
    uint32_t pr = hits[0];
    for (uint32_t r : hits) {
      if (rows[r].size() < rows[pr].size()) pr = r;
    }

    const uint64_t pval = row_has(pr, pc)->second;
    const uint64_t pinv = F.inv(pval);
    SparseRow prow = rows[pr];

    for (uint32_t r : hits) {
      if (r == pr) continue;
      const auto* hit = row_has(r, pc);
      const uint64_t factor = F.mul(hit->second, pinv);  // row_r -= factor * prow
      SparseRow merged;
      merged.reserve(rows[r].size() + prow.size());
      auto a = rows[r].begin(), aend = rows[r].end();
      auto b = prow.begin(), bend = prow.end();
      while (a != aend || b != bend) {
        if (b == bend || (a != aend && a->first < b->first)) {
          merged.push_back(*a++);
        } else if (a == aend || b->first < a->first) {
          uint64_t v = F.neg(F.mul(factor, b->second));
          if (v) {
            merged.push_back({b->first, v});
            ++col_nnz[b->first];
            ++nnz;
            col_rows[b->first].push_back(r);
          }
          ++b;
        } else {
          uint64_t v = F.sub(a->second, F.mul(factor, b->second));
          if (v) {
            merged.push_back({a->first, v});
          } else {
            --col_nnz[a->first];
            --nnz;
          }
          ++a;
          ++b;
        }
      }
      rows[r] = std::move(merged);
    }

    // retire the pivot row and column
    for (const auto& [c, v] : rows[pr]) {
      --col_nnz[c];
      --nnz;
    }
    row_active[pr] = 0;
    col_active[pc] = 0;
    rows[pr].clear();
    rows[pr].shrink_to_fit();
    --active_rows;
    --active_cols;
    ++rank;
  }

  // dense fallback on the active submatrix, original index order
  std::vector<uint32_t> live_cols;
  live_cols.reserve(active_cols);
  std::vector<uint32_t> col_map(ncols, UINT32_MAX);
  for (uint32_t c = 0; c < ncols; ++c) {
    if (col_active[c]) {
      col_map[c] = static_cast<uint32_t>(live_cols.size());
      live_cols.push_back(c);
    }
  }
  Dense d(active_rows, static_cast<uint32_t>(live_cols.size()));
  uint32_t di = 0;
  for (uint32_t r = 0; r < nrows; ++r) {
    if (!row_active[r]) continue;
    for (const auto& [c, v] : rows[r]) d.row[di][col_map[c]] = v;
    ++di;
  }
  return rank + dense_rank(d, F, threads);
}

Dense to_dense_work(const FpMatrix& m) {
  Dense d(m.rows(), m.cols());
  for (const Entry& e : m.entries()) d.row[e.row][e.col] = e.val;
  return d;
}

}  // namespace

uint64_t rank(const FpMatrix& m, const PrimeField& F, int threads) {
  if (threads <= 0) threads = hardware_threads();
  if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) return 0;
  const uint64_t cells = uint64_t(m.rows()) * m.cols();
  if (cells <= (1u << 16) || m.density() >= 0.3) {
    Dense d = to_dense_work(m);
    return dense_rank(d, F, threads);
  }
  return sparse_rank(m, F, threads);
}

Rref rref_rows(std::vector<std::vector<uint64_t>> rows, uint32_t n, const PrimeField& F) {
  const uint64_t p = F.p;
  for (auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("ragged rref input");
    for (auto& v : r) v %= p;
  }
  Rref out;
  out.n = n;
  uint32_t r = 0;
  const uint32_t m = static_cast<uint32_t>(rows.size());
  for (uint32_t col = 0; col < n && r < m; ++col) {
    uint32_t pr = UINT32_MAX;
    for (uint32_t i = r; i < m; ++i) {
      if (rows[i][col]) {
        pr = i;
        break;
      }
    }
    if (pr == UINT32_MAX) continue;
    std::swap(rows[r], rows[pr]);
    const uint64_t pinv = F.inv(rows[r][col]);
    for (uint32_t j = col; j < n; ++j) rows[r][j] = rows[r][j] * pinv % p;
    for (uint32_t i = 0; i < m; ++i) {
      if (i == r || rows[i][col] == 0) continue;
      const uint64_t c = p - rows[i][col];
      for (uint32_t j = col; j < n; ++j) rows[i][j] = (rows[i][j] + c * rows[r][j]) % p;
    }
    out.pivot_cols.push_back(col);
    ++r;
  }
  rows.resize(r);
  out.rows = std::move(rows);
  return out;
}

std::vector<std::vector<uint64_t>> kernel_basis(const FpMatrix& m, const PrimeField& F) {
  Rref R = rref_rows(m.to_dense(), m.cols(), F);
  std::vector<char> is_pivot(m.cols(), 0);
  for (uint32_t c : R.pivot_cols) is_pivot[c] = 1;
  std::vector<std::vector<uint64_t>> basis;
  for (uint32_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<uint64_t> v(m.cols(), 0);
    v[f] = 1;
    for (size_t k = 0; k < R.pivot_cols.size(); ++k) v[R.pivot_cols[k]] = F.neg(R.rows[k][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<uint64_t>> solve_membership(const FpMatrix& m,
                                                      const std::vector<uint64_t>& v,
                                                      const PrimeField& F) {
  if (v.size() != m.rows()) throw std::invalid_argument("rhs length != rows");
  std::vector<std::vector<uint64_t>> aug = m.to_dense();
  for (uint32_t i = 0; i < m.rows(); ++i) aug[i].push_back(v[i] % F.p);
  Rref R = rref_rows(std::move(aug), m.cols() + 1, F);
  if (!R.pivot_cols.empty() && R.pivot_cols.back() == m.cols()) return std::nullopt;
  std::vector<uint64_t> x(m.cols(), 0);
  for (size_t k = 0; k < R.pivot_cols.size(); ++k) x[R.pivot_cols[k]] = R.rows[k][m.cols()];
  return x;
}

}  // namespace syz
