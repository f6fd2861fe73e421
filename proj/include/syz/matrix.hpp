#pragma once

#include <cstdint>
#include <vector>

#include "syz/field.hpp"

namespace syz {

struct Entry {
  uint32_t row;
  uint32_t col;
  uint64_t val;
};

// Sparse matrix over F_p. After finalize(), entries are sorted by (row, col),
// unique per position, nonzero and reduced mod p - so equal matrices have
// byte-equal entry lists no matter how they were assembled.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(uint32_t rows, uint32_t cols) : rows_(rows), cols_(cols) {}

  static FpMatrix identity(uint32_t n);
  static FpMatrix from_dense(const std::vector<std::vector<uint64_t>>& a, const PrimeField& F);

  uint32_t rows() const { return rows_; }
  uint32_t cols() const { return cols_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool is_zero() const { return entries_.empty(); }
  uint64_t nnz() const { return entries_.size(); }
  double density() const;

  // Accumulates a term; finalize() sums duplicates mod p and drops zeros.
  void add(uint32_t r, uint32_t c, uint64_t v) { entries_.push_back({r, c, v}); }
  void finalize(const PrimeField& F);

  std::vector<std::vector<uint64_t>> to_dense() const;
  std::vector<uint64_t> apply(const std::vector<uint64_t>& x, const PrimeField& F) const;

  static FpMatrix mul(const FpMatrix& a, const FpMatrix& b, const PrimeField& F);

  bool operator==(const FpMatrix& o) const;

 private:
  uint32_t rows_ = 0, cols_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace syz
