#pragma once

#include <cstdint>
#include <vector>

#include "syz/field.hpp"
#include "syz/matrix.hpp"

namespace syz {

struct RingSpec {
  uint32_t num_vars = 0;  // r + 1
  PrimeField field;
};

// Exponent tuples of total degree d with earlier variables weighted first
// (x0^d comes first, xr^d last); length C(d + r, r).
std::vector<std::vector<uint32_t>> monomial_basis(uint32_t num_vars, uint32_t d);
int64_t monomial_count(uint32_t num_vars, uint32_t d);

struct HomogeneousIdeal {
  RingSpec ring;
  // (degree, coefficient vector over monomial_basis(num_vars, degree))
  std::vector<std::pair<uint32_t, std::vector<uint64_t>>> generators;
};

// Degree-d piece of I: rows = monomials of degree d, one column per
// monomial multiple of a generator; the column span is I_d.
FpMatrix ideal_piece(const HomogeneousIdeal& I, uint32_t d);

// Graded module with pieces [0, max_degree] given as coordinate spaces and
// multiplication-by-variable maps M_q -> M_{q+1}.
class GradedModule {
 public:
  RingSpec ring;
  int min_degree = 0;
  int max_degree = -1;
  std::vector<uint32_t> piece_dims;          // index q in [0, max_degree]
  std::vector<std::vector<FpMatrix>> mult_;  // [var][q], dim M_{q+1} x dim M_q

  uint32_t dim(int q) const {
    return (q < min_degree || q > max_degree) ? 0 : piece_dims[q];
  }
  const FpMatrix& mult(uint32_t var, int q) const;

  // the S-module axiom, checked by direct multiplication
  bool commutes() const;
};

// S/I truncated at max_degree. Piece q is coordinatized by the non-pivot
// monomials of the echelonized I_q; multiplication reduces mod I_{q+1}.
GradedModule quotient_module(const HomogeneousIdeal& I, int max_degree);

// M_0 one-dimensional, everything else zero.
GradedModule residue_field_module(const RingSpec& ring, int max_degree = 4);

// x0 x2 - x1^2, x0 x3 - x1 x2, x1 x3 - x2^2: the degree-3 rational normal
// curve in P^3.
HomogeneousIdeal twisted_cubic_ideal(const PrimeField& F);

}  // namespace syz
