#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "syz/field.hpp"
#include "syz/linalg.hpp"
#include "syz/matrix.hpp"

using namespace syz;

namespace {

const PrimeField F = make_field(1000003);

// straightforward mod-every-step eliminator, used as an oracle
uint64_t ref_rank(std::vector<std::vector<uint64_t>> a, const PrimeField& Fld) {
  if (a.empty()) return 0;
  uint32_t m = a.size(), n = a[0].size(), r = 0;
  for (uint32_t col = 0; col < n && r < m; ++col) {
    uint32_t pr = UINT32_MAX;
    for (uint32_t i = r; i < m; ++i)
      if (a[i][col] % Fld.p) {
        pr = i;
        break;
      }
    if (pr == UINT32_MAX) continue;
    std::swap(a[r], a[pr]);
    uint64_t inv = Fld.inv(a[r][col] % Fld.p);
    for (auto& v : a[r]) v = v % Fld.p * inv % Fld.p;
    for (uint32_t i = r + 1; i < m; ++i) {
      uint64_t c = Fld.neg(a[i][col] % Fld.p);
      if (!c) continue;
      for (uint32_t j = 0; j < n; ++j) a[i][j] = (a[i][j] + c * a[r][j]) % Fld.p;
    }
    ++r;
  }
  return r;
}

FpMatrix random_sparse(Rng& rng, uint32_t m, uint32_t n, uint32_t nnz, const PrimeField& Fld) {
  FpMatrix a(m, n);
  for (uint32_t k = 0; k < nnz; ++k)
    a.add(rng.below(m), rng.below(n), rng.nonzero(Fld));
  a.finalize(Fld);
  return a;
}

}  // namespace

TEST_CASE("rank of identity and zero matrices") {
  CHECK(rank(FpMatrix::identity(3), F) == 3);
  CHECK(rank(FpMatrix(4, 7), F) == 0);
  CHECK(rank(FpMatrix(0, 5), F) == 0);
  CHECK(rank(FpMatrix(5, 0), F) == 0);
}

TEST_CASE("rank of the twisted cubic quadric coefficients") {
  // q1 = x0 x2 - x1^2, q2 = x0 x3 - x1 x2, q3 = x1 x3 - x2^2 over the
  // 10 degree-2 monomials of 4 variables
  FpMatrix a(3, 10);
  a.add(0, 2, 1);
  a.add(0, 4, F.p - 1);
  a.add(1, 3, 1);
  a.add(1, 5, F.p - 1);
  a.add(2, 6, 1);
  a.add(2, 7, F.p - 1);
  a.finalize(F);
  CHECK(rank(a, F) == 3);
}

TEST_CASE("kernel of identity is empty, kernel of zero is the unit basis") {
  CHECK(kernel_basis(FpMatrix::identity(3), F).empty());
  auto k = kernel_basis(FpMatrix(2, 5), F);
  REQUIRE(k.size() == 5);
  for (uint32_t i = 0; i < 5; ++i)
    for (uint32_t j = 0; j < 5; ++j) CHECK(k[i][j] == (i == j ? 1u : 0u));
}

TEST_CASE("solve_membership basics") {
  auto x = solve_membership(FpMatrix::identity(3), {1, 0, 0}, F);
  REQUIRE(x.has_value());
  CHECK(*x == std::vector<uint64_t>{1, 0, 0});
  CHECK_FALSE(solve_membership(FpMatrix(3, 4), {1, 0, 0}, F).has_value());
  CHECK_THROWS(solve_membership(FpMatrix(3, 4), {1, 0}, F));
}

TEST_CASE("rank-nullity and kernel correctness on random matrices") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    uint32_t m = 1 + rng.below(30), n = 1 + rng.below(30);
    FpMatrix a = random_sparse(rng, m, n, rng.below(2 * m * n / 3 + 1), F);
    uint64_t r = rank(a, F);
    auto ker = kernel_basis(a, F);
    CHECK(r + ker.size() == n);
    CHECK(r == ref_rank(a.to_dense(), F));
    for (const auto& v : ker) {
      auto y = a.apply(v, F);
      CHECK(std::all_of(y.begin(), y.end(), [](uint64_t t) { return t == 0; }));
    }
  }
}

TEST_CASE("rank is independent of the entry list order") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    uint32_t m = 3 + rng.below(20), n = 3 + rng.below(20);
    std::vector<Entry> raw;
    for (uint32_t k = 0; k < m * n / 2; ++k)
      raw.push_back({static_cast<uint32_t>(rng.below(m)), static_cast<uint32_t>(rng.below(n)),
                     rng.nonzero(F)});
    FpMatrix a(m, n);
    for (const Entry& e : raw) a.add(e.row, e.col, e.val);
    a.finalize(F);
    // shuffle deterministically
    for (size_t i = raw.size(); i > 1; --i) std::swap(raw[i - 1], raw[rng.below(i)]);
    FpMatrix b(m, n);
    for (const Entry& e : raw) b.add(e.row, e.col, e.val);
    b.finalize(F);
    CHECK(a == b);
    CHECK(rank(a, F) == rank(b, F));
  }
}

TEST_CASE("solve_membership round-trips images") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    uint32_t m = 1 + rng.below(25), n = 1 + rng.below(25);
    FpMatrix a = random_sparse(rng, m, n, rng.below(m * n + 1), F);
    std::vector<uint64_t> x(n);
    for (auto& v : x) v = rng.field_element(F);
    auto v = a.apply(x, F);
    auto back = solve_membership(a, v, F);
    REQUIRE(back.has_value());
    CHECK(a.apply(*back, F) == v);
  }
}

TEST_CASE("sparse path with dense fallback agrees with the oracle") {
  Rng rng(17);
  // large enough that rank() takes the sparse route, dense enough to force
  // the 30% fallback midway
  for (uint32_t nnz : {900u, 3000u, 9000u}) {
    FpMatrix a = random_sparse(rng, 300, 280, nnz, F);
    REQUIRE(uint64_t(a.rows()) * a.cols() > (1u << 16));
    CHECK(rank(a, F) == ref_rank(a.to_dense(), F));
  }
}

TEST_CASE("products of thin matrices have the expected rank") {
  Rng rng(19);
  for (uint32_t r : {1u, 3u, 7u}) {
    std::vector<std::vector<uint64_t>> bd(40, std::vector<uint64_t>(r));
    std::vector<std::vector<uint64_t>> cd(r, std::vector<uint64_t>(35));
    for (auto& row : bd)
      for (auto& v : row) v = rng.field_element(F);
    for (auto& row : cd)
      for (auto& v : row) v = rng.field_element(F);
    FpMatrix b = FpMatrix::from_dense(bd, F), c = FpMatrix::from_dense(cd, F);
    FpMatrix prod = FpMatrix::mul(b, c, F);
    CHECK(rank(prod, F) == r);
  }
}

TEST_CASE("matrix multiply matches dense arithmetic") {
  Rng rng(23);
  FpMatrix a = random_sparse(rng, 17, 23, 120, F);
  FpMatrix b = random_sparse(rng, 23, 11, 90, F);
  FpMatrix ab = FpMatrix::mul(a, b, F);
  auto ad = a.to_dense(), bd = b.to_dense(), want = FpMatrix(17, 11).to_dense();
  for (uint32_t i = 0; i < 17; ++i)
    for (uint32_t k = 0; k < 23; ++k)
      for (uint32_t j = 0; j < 11; ++j)
        want[i][j] = (want[i][j] + ad[i][k] * bd[k][j]) % F.p;
  CHECK(ab.to_dense() == want);
}

TEST_CASE("delayed reduction survives a long dense elimination") {
  Rng rng(29);
  std::vector<std::vector<uint64_t>> a(220, std::vector<uint64_t>(200));
  for (auto& row : a)
    for (auto& v : row) v = rng.field_element(F);
  FpMatrix m = FpMatrix::from_dense(a, F);
  CHECK(rank(m, F) == ref_rank(a, F));
  CHECK(rank(m, F) == 200);  // random square-ish matrices are full rank
}
