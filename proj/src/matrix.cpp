#include "syz/matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace syz {

FpMatrix FpMatrix::identity(uint32_t n) {
  FpMatrix m(n, n);
  for (uint32_t i = 0; i < n; ++i) m.entries_.push_back({i, i, 1});
  return m;
}

FpMatrix FpMatrix::from_dense(const std::vector<std::vector<uint64_t>>& a, const PrimeField& F) {
  uint32_t rows = static_cast<uint32_t>(a.size());
  uint32_t cols = rows ? static_cast<uint32_t>(a[0].size()) : 0;
  FpMatrix m(rows, cols);
  for (uint32_t i = 0; i < rows; ++i) {
    if (a[i].size() != cols) throw std::invalid_argument("ragged dense matrix");
    for (uint32_t j = 0; j < cols; ++j) {
      uint64_t v = a[i][j] % F.p;
      if (v) m.entries_.push_back({i, j, v});
    }
  }
  return m;
}

double FpMatrix::density() const {
  if (rows_ == 0 || cols_ == 0) return 0.0;
  return static_cast<double>(entries_.size()) / (static_cast<double>(rows_) * cols_);
}

void FpMatrix::finalize(const PrimeField& F) {
  for (const Entry& e : entries_) {
    if (e.row >= rows_ || e.col >= cols_) throw std::out_of_range("entry outside matrix");
  }
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Entry> merged;
  merged.reserve(entries_.size());
  for (const Entry& e : entries_) {
    if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col) {
      merged.back().val = F.add(merged.back().val, e.val % F.p);
    } else {
      merged.push_back({e.row, e.col, e.val % F.p});
    }
  }
  merged.erase(std::remove_if(merged.begin(), merged.end(), [](const Entry& e) { return e.val == 0; }),
               merged.end());
  entries_ = std::move(merged);
}

std::vector<std::vector<uint64_t>> FpMatrix::to_dense() const {
  std::vector<std::vector<uint64_t>> a(rows_, std::vector<uint64_t>(cols_, 0));
  for (const Entry& e : entries_) a[e.row][e.col] = e.val;
  return a;
}

std::vector<uint64_t> FpMatrix::apply(const std::vector<uint64_t>& x, const PrimeField& F) const {
  if (x.size() != cols_) throw std::invalid_argument("vector length != cols");
  std::vector<uint64_t> y(rows_, 0);
  for (const Entry& e : entries_) y[e.row] = (y[e.row] + e.val * (x[e.col] % F.p)) % F.p;
  return y;
}

FpMatrix FpMatrix::mul(const FpMatrix& a, const FpMatrix& b, const PrimeField& F) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("inner dimensions differ");
  // a indexed by column once, then one sparse axpy pass per column of b
  std::vector<std::vector<std::pair<uint32_t, uint64_t>>> acol(a.cols_);
  for (const Entry& e : a.entries_) acol[e.col].push_back({e.row, e.val});
  std::vector<std::vector<std::pair<uint32_t, uint64_t>>> bcol(b.cols_);
  for (const Entry& e : b.entries_) bcol[e.col].push_back({e.row, e.val});

  FpMatrix out(a.rows_, b.cols_);
  std::vector<uint64_t> acc(a.rows_, 0);
  std::vector<uint32_t> touched;
  for (uint32_t j = 0; j < b.cols_; ++j) {
    touched.clear();
    for (const auto& [k, bv] : bcol[j]) {
      for (const auto& [i, av] : acol[k]) {
        if (acc[i] == 0 && av * bv % F.p != 0) touched.push_back(i);
        acc[i] = (acc[i] + av * bv) % F.p;
      }
    }
    std::sort(touched.begin(), touched.end());
    for (uint32_t i : touched) {
      if (acc[i]) out.entries_.push_back({i, j, acc[i]});
      acc[i] = 0;
    }
  }
  // already sorted by (row within col, col ascending)? No: sorted per column;
  // normalize to the canonical (row, col) order
  out.finalize(F);
  return out;
}

bool FpMatrix::operator==(const FpMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || entries_.size() != o.entries_.size()) return false;
  for (size_t i = 0; i < entries_.size(); ++i) {
    const Entry &a = entries_[i], &b = o.entries_[i];
    if (a.row != b.row || a.col != b.col || a.val != b.val) return false;
  }
  return true;
}

}  // namespace syz
