#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "syz/curves.hpp"
#include "syz/koszul.hpp"

namespace syz {

// Predicates are decided inside a finite diagram window, so "cannot tell" is
// a real outcome, distinct from failure.
enum class Verdict { pass, fail, undecidable };

const char* verdict_name(Verdict v);

enum class Family {
  canonical_odd,
  canonical_even,
  paracanonical_odd,
  paracanonical_even,
};

const char* family_name(Family f);
Family family_from_name(const std::string& name);

// Closed-form Betti table predicted for a general curve of the given genus,
// filled over the family's full interesting window (every in-window cell is
// present, zeros included).
struct ExpectedTable {
  Family family = Family::canonical_odd;
  uint32_t genus = 0;
  BettiDiagram diagram;
};

ExpectedTable expected_table(Family family, uint32_t genus);

struct PredicateResult {
  Verdict verdict = Verdict::undecidable;
  int p = -1, q = -1;  // witnessing cell when verdict == fail
  std::string detail;
};

// Natural resolution: for every p at most one of b_{p,2}, b_{p+1,1} is
// nonzero. On failure, p is the first column where both survive.
PredicateResult is_natural(const BettiDiagram& D);

// Row 2 vanishes strictly below `cliff` and switches on at `cliff`.
// cliff < 1 (hyperelliptic territory) is rejected outright.
PredicateResult green_predicate(const BettiDiagram& D, int cliff);

// Property N_p: the coordinate-ring dimension audit passed and every
// in-window b_{j,q} with j <= p, q >= 2 vanishes.
PredicateResult np_property(const BettiDiagram& D, bool normality_audit, int p);

// b_{p,q} == b_{g-2-p,3-q} for every pair of cells that both sit in the
// window.
bool duality_check(const BettiDiagram& D, uint32_t g);

// Exact value of b_{p+1,1} - b_{p,2} for a degree-d model of a genus-g curve
// embedded by a nonspecial bundle: (p+1) C(d-g, p+1) ((d+1-g)/(p+2) - d/(d-g)),
// evaluated in integers.
int64_t diagonal_identity_value(int64_t d, uint32_t g, int p);

struct DiagonalIdentityResult {
  bool ok = true;
  int first_bad_p = -1;
};

DiagonalIdentityResult diagonal_identity_check(const BettiDiagram& D, int64_t d, uint32_t g);

// Explicit Koszul class produced from a factorization L = L1 (x) L2: with
// r1 = dim<sigma> - 1 and r2 = dim<tau> - 1 it lives in homological degree
// p = r1 + r2 - 1 of the linear strand. Coordinates use the same
// (p-subset, degree-1 basis) layout as the columns of koszul_differential.
struct WitnessSyzygy {
  int p = 0;
  std::vector<uint64_t> coordinates;
  bool cocycle_ok = false;
  bool coboundary = true;
};

// basis1/basis2 are section value rows over the model's sample points.
// Throws invalid_argument when either system has fewer than two sections or
// a pointwise product fails to lie in the degree-1 piece, logic_error when
// the assembled class is not a cocycle, and redraw_needed when it collapses
// to zero or turns out to be a coboundary (degenerate section choice).
WitnessSyzygy gl_witness(const EmbeddedModel& M,
                         const std::vector<std::vector<uint64_t>>& basis1,
                         const std::vector<std::vector<uint64_t>>& basis2);

}  // namespace syz
