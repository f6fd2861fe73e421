#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "syz/field.hpp"
#include "syz/ring.hpp"

namespace syz {

// A random model came out degenerate (dependent conditions, failed node
// certification, audit mismatch); the caller should retry with the next seed.
struct redraw_needed : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NodalRationalCurve {
  uint32_t genus = 0;
  uint64_t seed = 0;
  PrimeField field;
  std::vector<std::pair<uint64_t, uint64_t>> nodes;  // g pairs, 2g values pairwise distinct
};

NodalRationalCurve rational_nodal_curve(uint32_t g, uint64_t seed, const PrimeField& F);

// First `count` values of the curve's deterministic evaluation stream:
// pairwise distinct and disjoint from the node parameters.
std::vector<uint64_t> curve_sample_points(const NodalRationalCurve& C, uint32_t count);

struct TorsionBundle {
  uint32_t level = 1;
  std::vector<uint64_t> gluing;  // one constant per node, each with c^level = 1
};

TorsionBundle random_torsion(const PrimeField& F, uint32_t g, uint32_t level, Rng& rng);
uint32_t torsion_order(const TorsionBundle& eta, const PrimeField& F);

enum class BundleKind { canonical, paracanonical, twist, custom };

struct LineBundleData {
  BundleKind kind = BundleKind::custom;
  uint32_t genus = 0;   // of the underlying curve
  int64_t degree = 0;   // degree of the bundle
  uint32_t level = 1;   // torsion level when kind == paracanonical
  PrimeField field;
  std::vector<uint64_t> sample_points;          // empty for plane-curve models
  std::vector<std::vector<uint64_t>> sections;  // h^0 value rows, one column per sample point
};

LineBundleData canonical_sections(const NodalRationalCurve& C);
LineBundleData paracanonical_sections(const NodalRationalCurve& C, const TorsionBundle& eta);
LineBundleData twist_sections(const NodalRationalCurve& C, uint32_t d,
                              const std::optional<TorsionBundle>& eta = std::nullopt);

// Value rows of the degree-d sections glued by f(a_i) = u_i f(b_i) at every
// node, evaluated on `points`. No degree restriction; shared by the wrappers
// above and by split witness models.
std::vector<std::vector<uint64_t>> glued_section_values(const NodalRationalCurve& C, uint32_t d,
                                                        const std::vector<uint64_t>& gluing,
                                                        const std::vector<uint64_t>& points);

struct NodalPlaneCurve {
  uint32_t degree = 0;  // d
  uint32_t genus = 0;   // (d-1)(d-2)/2 - delta
  PrimeField field;
  std::vector<uint64_t> form;  // coefficients over monomial_basis(3, degree)
  std::vector<std::pair<uint64_t, uint64_t>> node_points;    // affine (x, y)
  std::vector<std::pair<uint64_t, uint64_t>> sample_points;  // affine smooth curve points
};

NodalPlaneCurve plane_curve_with_nodes(uint32_t d, uint32_t delta, uint64_t seed,
                                       const PrimeField& F);
LineBundleData adjoint_canonical_sections(const NodalPlaneCurve& C);

// Value of the form at (x : y : 1).
uint64_t ternary_form_value(const std::vector<uint64_t>& form, uint32_t degree, uint64_t x,
                            uint64_t y, const PrimeField& F);

// Coordinate ring of the embedded curve, degrees 0..q_max, as a graded module
// over the polynomial ring on the h^0 sections. Piece q is the span of the
// q-fold pointwise products; its basis rows are in reduced echelon form over
// the sample columns, so coordinates are read off at the pivot columns. Each
// audit flag records whether dim M_q equals the Riemann-Roch count.
struct EmbeddedModel {
  GradedModule module;
  std::vector<char> audit;
  bool audit_pass = false;
  std::vector<std::vector<uint32_t>> pivots;              // per degree
  std::vector<std::vector<std::vector<uint64_t>>> basis;  // per degree, value rows
  // degree-1 coordinates of each ring variable (input section); the change
  // of basis between the generators and the echelonized degree-1 basis
  std::vector<std::vector<uint64_t>> generator_coords;

  // Coordinates in the degree-q basis of a value row known to lie in M_q.
  std::vector<uint64_t> coordinates(uint32_t q, const std::vector<uint64_t>& values) const;
};

EmbeddedModel coordinate_ring(const LineBundleData& L, uint32_t q_max);

// Retry drivers: attempt seeds seed, seed+1, ... until the model audit passes,
// giving up after 32 attempts with the accumulated failure chain.
EmbeddedModel build_canonical_model(const PrimeField& F, uint32_t g, uint64_t seed,
                                    uint32_t q_max);
EmbeddedModel build_paracanonical_model(const PrimeField& F, uint32_t g, uint32_t level,
                                        uint64_t seed, uint32_t q_max);
EmbeddedModel build_twist_model(const PrimeField& F, uint32_t g, uint32_t d, uint64_t seed,
                                uint32_t q_max);
EmbeddedModel build_plane_model(const PrimeField& F, uint32_t d, uint32_t delta, uint64_t seed,
                                uint32_t q_max);

// Model of a product bundle L1 (x) L2 together with section bases of both
// factors on the shared sample points, for explicit syzygy construction.
struct SplitModel {
  EmbeddedModel model;
  std::vector<std::vector<uint64_t>> sigma;  // H^0(L1) value rows
  std::vector<std::vector<uint64_t>> tau;    // H^0(L2) value rows
};

SplitModel build_split_model(const PrimeField& F, uint32_t g, uint32_t d1, uint32_t d2,
                             uint64_t seed, uint32_t q_max);

}  // namespace syz
