#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "syz/conjectures.hpp"
#include "syz/curves.hpp"
#include "syz/koszul.hpp"
#include "syz/linalg.hpp"
#include "syz/matrix.hpp"
#include "syz/util.hpp"

using namespace syz;

namespace {
const PrimeField F = make_field(1000003);

// each column of the diagram has at most one nonzero row
bool is_pure(const BettiDiagram& D) {
  for (int p = 0; p <= D.p_max; ++p) {
    int hits = 0;
    for (int q = 0; q <= D.q_max; ++q)
      if (D.at(p, q) != 0) ++hits;
    if (hits > 1) return false;
  }
  return true;
}

BettiDiagram trigonal_genus5_table() {
  BettiDiagram D;
  D.num_vars = 5;
  D.p_max = 3;
  D.q_max = 3;
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) D.entries[{p, q}] = 0;
  D.entries[{0, 0}] = 1;
  D.entries[{1, 1}] = 3;
  D.entries[{2, 1}] = 2;
  D.entries[{1, 2}] = 2;
  D.entries[{2, 2}] = 3;
  D.entries[{3, 3}] = 1;
  return D;
}
}  // namespace

TEST_CASE("expected canonical tables: frozen values") {
  ExpectedTable t7 = expected_table(Family::canonical_odd, 7);
  CHECK(t7.diagram.num_vars == 7);
  CHECK(t7.diagram.p_max == 5);
  CHECK(t7.diagram.q_max == 3);
  CHECK(t7.diagram.at(0, 0) == 1);
  CHECK(t7.diagram.at(1, 1) == 10);
  CHECK(t7.diagram.at(2, 1) == 16);
  CHECK(t7.diagram.at(3, 1) == 0);
  CHECK(t7.diagram.at(2, 2) == 0);
  CHECK(t7.diagram.at(3, 2) == 16);
  CHECK(t7.diagram.at(4, 2) == 10);
  CHECK(t7.diagram.at(5, 3) == 1);
  CHECK(t7.diagram.at(5, 2) == 0);

  ExpectedTable t5 = expected_table(Family::canonical_odd, 5);
  CHECK(t5.diagram.at(1, 1) == 3);
  CHECK(t5.diagram.at(2, 1) == 0);
  CHECK(t5.diagram.at(1, 2) == 0);
  CHECK(t5.diagram.at(2, 2) == 3);
  CHECK(t5.diagram.at(3, 3) == 1);

  ExpectedTable t6 = expected_table(Family::canonical_even, 6);
  CHECK(t6.diagram.at(1, 1) == 6);
  CHECK(t6.diagram.at(2, 1) == 5);
  CHECK(t6.diagram.at(2, 2) == 5);
  CHECK(t6.diagram.at(3, 2) == 6);
  CHECK(t6.diagram.at(4, 3) == 1);
  CHECK(is_pure(t6.diagram) == false);  // both entries live in column 2

  ExpectedTable t8 = expected_table(Family::canonical_even, 8);
  CHECK(t8.diagram.at(1, 1) == 15);
  CHECK(t8.diagram.at(2, 1) == 35);
  CHECK(t8.diagram.at(3, 1) == 21);
  CHECK(t8.diagram.at(3, 2) == 21);
  CHECK(t8.diagram.at(4, 2) == 35);
  CHECK(t8.diagram.at(5, 2) == 15);
  CHECK(t8.diagram.at(6, 3) == 1);
  CHECK(t8.diagram.at(4, 1) == 0);
}

TEST_CASE("expected paracanonical tables: frozen values") {
  ExpectedTable t7 = expected_table(Family::paracanonical_odd, 7);
  CHECK(t7.diagram.num_vars == 6);
  CHECK(t7.diagram.p_max == 4);
  CHECK(t7.diagram.q_max == 2);
  CHECK(t7.diagram.at(0, 0) == 1);
  CHECK(t7.diagram.at(1, 1) == 3);
  CHECK(t7.diagram.at(2, 1) == 0);
  CHECK(t7.diagram.at(1, 2) == 8);
  CHECK(t7.diagram.at(2, 2) == 27);
  CHECK(t7.diagram.at(3, 2) == 24);
  CHECK(t7.diagram.at(4, 2) == 7);

  ExpectedTable t8 = expected_table(Family::paracanonical_even, 8);
  CHECK(t8.diagram.num_vars == 7);
  CHECK(t8.diagram.p_max == 5);
  CHECK(t8.diagram.at(1, 1) == 7);
  CHECK(t8.diagram.at(2, 1) == 0);
  CHECK(t8.diagram.at(1, 2) == 0);
  CHECK(t8.diagram.at(2, 2) == 35);
  CHECK(t8.diagram.at(3, 2) == 56);
  CHECK(t8.diagram.at(4, 2) == 35);
  CHECK(t8.diagram.at(5, 2) == 8);

  // level-independent shape with an empty linear row at genus 6
  ExpectedTable t6 = expected_table(Family::paracanonical_even, 6);
  CHECK(t6.diagram.at(1, 1) == 0);
  CHECK(t6.diagram.at(1, 2) == 10);
  CHECK(t6.diagram.at(2, 2) == 15);
  CHECK(t6.diagram.at(3, 2) == 6);
}

TEST_CASE("expected tables: argument validation") {
  CHECK_THROWS_AS(expected_table(Family::canonical_odd, 6), std::invalid_argument);
  CHECK_THROWS_AS(expected_table(Family::canonical_even, 7), std::invalid_argument);
  CHECK_THROWS_AS(expected_table(Family::paracanonical_odd, 3), std::invalid_argument);
  CHECK_THROWS_AS(expected_table(Family::paracanonical_even, 4), std::invalid_argument);
  CHECK(family_from_name("paracanonical-odd") == Family::paracanonical_odd);
  CHECK(family_from_name(family_name(Family::canonical_even)) == Family::canonical_even);
  CHECK_THROWS_AS(family_from_name("sextic"), std::invalid_argument);
}

TEST_CASE("expected tables: structural properties across genera") {
  for (uint32_t g = 5; g <= 13; ++g) {
    const Family canon = (g % 2) ? Family::canonical_odd : Family::canonical_even;
    ExpectedTable tc = expected_table(canon, g);
    for (const auto& [pq, b] : tc.diagram.entries) CHECK(b >= 0);
    CHECK(is_natural(tc.diagram).verdict == Verdict::pass);
    CHECK(duality_check(tc.diagram, g));
    CHECK(green_predicate(tc.diagram, static_cast<int>((g - 1) / 2)).verdict == Verdict::pass);
    if (g % 2) CHECK(is_pure(tc.diagram));
    // the table resolves the canonical ring: Hilbert values 1, g, 3g-3, 5g-5
    CHECK(hilbert_from_diagram(tc.diagram, 0) == 1);
    CHECK(hilbert_from_diagram(tc.diagram, 1) == static_cast<int64_t>(g));
    CHECK(hilbert_from_diagram(tc.diagram, 2) == 3 * static_cast<int64_t>(g) - 3);
    CHECK(hilbert_from_diagram(tc.diagram, 3) == 5 * static_cast<int64_t>(g) - 5);

    if (g < 5) continue;
    const Family para = (g % 2) ? Family::paracanonical_odd : Family::paracanonical_even;
    ExpectedTable tp = expected_table(para, g);
    for (const auto& [pq, b] : tp.diagram.entries) CHECK(b >= 0);
    CHECK(is_natural(tp.diagram).verdict == Verdict::pass);
    // degree-(2g-2) nonspecial embedding: the exact difference formula holds
    CHECK(diagonal_identity_check(tp.diagram, 2 * static_cast<int64_t>(g) - 2, g).ok);
    // and the table reproduces the Riemann-Roch dimensions q(2g-2) - g + 1
    for (int d = 1; d <= 4; ++d)
      CHECK(hilbert_from_diagram(tp.diagram, d) ==
            d * (2 * static_cast<int64_t>(g) - 2) - static_cast<int64_t>(g) + 1);
  }
}

TEST_CASE("paracanonical odd tables overlap only at the middle column") {
  for (uint32_t g = 7; g <= 13; g += 2) {
    const int i = static_cast<int>((g - 5) / 2);
    ExpectedTable t = expected_table(Family::paracanonical_odd, g);
    for (int p = 0; p <= t.diagram.p_max; ++p) {
      const bool both = t.diagram.at(p, 1) != 0 && t.diagram.at(p, 2) != 0;
      CHECK(both == (p == i));
    }
  }
}

TEST_CASE("naturality verdicts") {
  BettiDiagram trig = trigonal_genus5_table();
  PredicateResult r = is_natural(trig);
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.p == 1);

  BettiDiagram shallow;
  shallow.num_vars = 4;
  shallow.p_max = 3;
  shallow.q_max = 1;
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 1; ++q) shallow.entries[{p, q}] = 0;
  CHECK(is_natural(shallow).verdict == Verdict::undecidable);
}

TEST_CASE("green predicate verdicts") {
  ExpectedTable t7 = expected_table(Family::canonical_odd, 7);
  CHECK(green_predicate(t7.diagram, 3).verdict == Verdict::pass);
  PredicateResult low = green_predicate(t7.diagram, 2);
  CHECK(low.verdict == Verdict::fail);  // row 2 stays zero at column 2
  CHECK(low.p == 2);
  PredicateResult high = green_predicate(t7.diagram, 4);
  CHECK(high.verdict == Verdict::fail);  // b_{3,2} = 16 sits below cliff 4
  CHECK(high.p == 3);

  BettiDiagram trig = trigonal_genus5_table();
  CHECK(green_predicate(trig, 1).verdict == Verdict::pass);
  CHECK(green_predicate(trig, 4).verdict == Verdict::undecidable);
  CHECK_THROWS_AS(green_predicate(trig, 0), std::invalid_argument);
}

TEST_CASE("N_p verdicts") {
  RingSpec R{4, F};
  GradedModule M = quotient_module(twisted_cubic_ideal(F), 4);
  BettiDiagram D = betti_diagram(M, 3, 3);
  CHECK(np_property(D, true, 1).verdict == Verdict::pass);
  CHECK(np_property(D, false, 1).verdict == Verdict::fail);
  CHECK(np_property(D, true, 5).verdict == Verdict::undecidable);

  BettiDiagram trig = trigonal_genus5_table();
  PredicateResult r = np_property(trig, true, 1);
  CHECK(r.verdict == Verdict::fail);
  CHECK(r.p == 1);
  CHECK(r.q == 2);
  CHECK(np_property(trig, true, 0).verdict == Verdict::pass);
}

TEST_CASE("duality holds on mirrored tables and spots asymmetry") {
  CHECK(duality_check(trigonal_genus5_table(), 5));
  BettiDiagram bad = trigonal_genus5_table();
  bad.entries[{2, 2}] = 4;  // breaks the (1,1) <-> (2,2) mirror
  CHECK_FALSE(duality_check(bad, 5));
}

TEST_CASE("diagonal identity: exact values") {
  CHECK(diagonal_identity_value(3, 0, 0) == 3);
  CHECK(diagonal_identity_value(3, 0, 1) == 2);
  CHECK(diagonal_identity_value(3, 0, 2) == 0);
  // paracanonical genus 7: matches the table differences row by row
  CHECK(diagonal_identity_value(12, 7, 0) == 3);
  CHECK(diagonal_identity_value(12, 7, 1) == -8);
  CHECK(diagonal_identity_value(12, 7, 2) == -27);
  CHECK(diagonal_identity_value(12, 7, 3) == -24);
  CHECK(diagonal_identity_value(12, 7, 4) == -7);
  // paracanonical genus 8: the p=1 difference is forced to zero
  CHECK(diagonal_identity_value(14, 8, 1) == 0);
  CHECK(diagonal_identity_value(14, 8, 0) == 7);
  CHECK_THROWS_AS(diagonal_identity_value(5, 7, 0), std::invalid_argument);
}

TEST_CASE("diagonal identity on a computed diagram") {
  GradedModule M = quotient_module(twisted_cubic_ideal(F), 4);
  BettiDiagram D = betti_diagram(M, 3, 3);
  CHECK(diagonal_identity_check(D, 3, 0).ok);
  DiagonalIdentityResult wrong = diagonal_identity_check(D, 4, 0);
  CHECK_FALSE(wrong.ok);
  CHECK(wrong.first_bad_p == 0);
}

TEST_CASE("split witness: twisted cubic factorization") {
  SplitModel S = build_split_model(F, 0, 1, 2, 1, 2);
  WitnessSyzygy w = gl_witness(S.model, S.sigma, S.tau);
  CHECK(w.p == 2);
  CHECK(w.cocycle_ok);
  CHECK_FALSE(w.coboundary);
  CHECK(w.coordinates.size() == static_cast<size_t>(binom(4, 2)) * 4);
  CHECK(koszul_dim(S.model.module, 2, 1) == 2);

  // swapping the two factors keeps the homological degree
  WitnessSyzygy ws = gl_witness(S.model, S.tau, S.sigma);
  CHECK(ws.p == 2);
  CHECK(ws.cocycle_ok);
  CHECK_FALSE(ws.coboundary);
}

TEST_CASE("split witness: rational normal quartic") {
  SplitModel S = build_split_model(F, 0, 2, 2, 1, 2);
  WitnessSyzygy w = gl_witness(S.model, S.sigma, S.tau);
  CHECK(w.p == 3);
  CHECK(w.cocycle_ok);
  CHECK_FALSE(w.coboundary);
  CHECK(koszul_dim(S.model.module, 3, 1) == 3);
}

TEST_CASE("split witness: elliptic factorization gives a rank-4 quadric") {
  SplitModel S = build_split_model(F, 1, 2, 2, 3, 2);
  WitnessSyzygy w = gl_witness(S.model, S.sigma, S.tau);
  CHECK(w.p == 1);
  CHECK(w.cocycle_ok);
  CHECK_FALSE(w.coboundary);
  CHECK(koszul_dim(S.model.module, 1, 1) == 2);

  // in degree one the class is a bilinear tensor; its symmetrization is the
  // quadric picked out by the factorization, of rank exactly 4
  const uint32_t n = S.model.module.ring.num_vars;
  REQUIRE(n == 4);
  REQUIRE(w.coordinates.size() == static_cast<size_t>(n) * n);
  std::vector<std::vector<uint64_t>> q(n, std::vector<uint64_t>(n, 0));
  for (uint32_t s = 0; s < n; ++s)
    for (uint32_t m = 0; m < n; ++m)
      q[s][m] = F.add(w.coordinates[s * n + m], w.coordinates[m * n + s]);
  CHECK(rank(FpMatrix::from_dense(q, F), F) == 4);
}

TEST_CASE("witness argument guards") {
  SplitModel S = build_split_model(F, 0, 1, 2, 1, 2);
  std::vector<std::vector<uint64_t>> lone = {S.sigma[0]};
  CHECK_THROWS_AS(gl_witness(S.model, lone, S.tau), std::invalid_argument);

  // a value row outside the coordinate ring's degree-1 piece is rejected
  std::vector<std::vector<uint64_t>> junk = S.tau;
  Rng rng(99);
  for (auto& v : junk[1]) v = rng.field_element(F);
  CHECK_THROWS_AS(gl_witness(S.model, S.sigma, junk), std::invalid_argument);
}
