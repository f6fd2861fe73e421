#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "syz/field.hpp"
#include "syz/matrix.hpp"

namespace syz {

// Rank over F_p. Markowitz-style sparse elimination (cheapest column, then
// cheapest row within it, ties to the lowest index) with a dense fallback as
// soon as fill-in passes 30% of the active submatrix. Deterministic for a
// fixed finalized input, independent of the thread count.
uint64_t rank(const FpMatrix& m, const PrimeField& F, int threads = 0);

// Reduced row echelon form of a dense row list with n columns.
struct Rref {
  uint32_t n = 0;
  std::vector<uint32_t> pivot_cols;              // ascending
  std::vector<std::vector<uint64_t>> rows;       // one reduced row per pivot
};
Rref rref_rows(std::vector<std::vector<uint64_t>> rows, uint32_t n, const PrimeField& F);

// Canonical basis of the right null space: reduced echelon coordinates with
// one basis vector per non-pivot column, in ascending column order.
std::vector<std::vector<uint64_t>> kernel_basis(const FpMatrix& m, const PrimeField& F);

// Coefficients x with m x = v and free variables zero; nullopt when v lies
// outside the column span. Throws on a length mismatch.
std::optional<std::vector<uint64_t>> solve_membership(const FpMatrix& m,
                                                      const std::vector<uint64_t>& v,
                                                      const PrimeField& F);

int hardware_threads();

}  // namespace syz
