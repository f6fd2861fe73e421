#include "syz/ring.hpp"

#include <map>
#include <stdexcept>

#include "syz/linalg.hpp"
#include "syz/util.hpp"

namespace syz {

int64_t monomial_count(uint32_t num_vars, uint32_t d) {
  return binom(d + num_vars - 1, num_vars - 1);
}

namespace {

void fill_monomials(uint32_t num_vars, uint32_t d, uint32_t pos, std::vector<uint32_t>& cur,
                    std::vector<std::vector<uint32_t>>& out) {
  if (pos + 1 == num_vars) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int e = d; e >= 0; --e) {
    cur[pos] = e;
    fill_monomials(num_vars, d - e, pos + 1, cur, out);
  }
}

using MonoMap = std::map<std::vector<uint32_t>, uint32_t>;

MonoMap index_of(const std::vector<std::vector<uint32_t>>& basis) {
  MonoMap m;
  for (uint32_t i = 0; i < basis.size(); ++i) m[basis[i]] = i;
  return m;
}

}  // namespace

std::vector<std::vector<uint32_t>> monomial_basis(uint32_t num_vars, uint32_t d) {
  if (num_vars == 0) throw std::invalid_argument("ring needs at least one variable");
  std::vector<std::vector<uint32_t>> out;
  std::vector<uint32_t> cur(num_vars, 0);
  fill_monomials(num_vars, d, 0, cur, out);
  return out;
}

FpMatrix ideal_piece(const HomogeneousIdeal& I, uint32_t d) {
  const PrimeField& F = I.ring.field;
  const uint32_t nv = I.ring.num_vars;
  auto basis_d = monomial_basis(nv, d);
  MonoMap idx = index_of(basis_d);

  std::vector<std::vector<uint64_t>> cols;
  for (const auto& [dg, coeffs] : I.generators) {
    if (dg > d) continue;
    auto gen_basis = monomial_basis(nv, dg);
    if (coeffs.size() != gen_basis.size()) throw std::invalid_argument("generator length mismatch");
    for (const auto& mu : monomial_basis(nv, d - dg)) {
      std::vector<uint64_t> col(basis_d.size(), 0);
      for (uint32_t k = 0; k < gen_basis.size(); ++k) {
        if (coeffs[k] % F.p == 0) continue;
        std::vector<uint32_t> e(nv);
        for (uint32_t v = 0; v < nv; ++v) e[v] = mu[v] + gen_basis[k][v];
        col[idx.at(e)] = F.add(col[idx.at(e)], coeffs[k] % F.p);
      }
      cols.push_back(std::move(col));
    }
  }
  FpMatrix m(static_cast<uint32_t>(basis_d.size()), static_cast<uint32_t>(cols.size()));
  for (uint32_t j = 0; j < cols.size(); ++j)
    for (uint32_t i = 0; i < basis_d.size(); ++i)
      if (cols[j][i]) m.add(i, j, cols[j][i]);
  m.finalize(F);
  return m;
}

const FpMatrix& GradedModule::mult(uint32_t var, int q) const {
  if (var >= ring.num_vars || q < 0 || q >= max_degree)
    throw std::out_of_range("multiplication map outside the module window");
  return mult_[var][q];
}

bool GradedModule::commutes() const {
  const PrimeField& F = ring.field;
  for (int q = 0; q + 2 <= max_degree; ++q) {
    for (uint32_t i = 0; i < ring.num_vars; ++i) {
      for (uint32_t j = i + 1; j < ring.num_vars; ++j) {
        FpMatrix ij = FpMatrix::mul(mult(j, q + 1), mult(i, q), F);
        FpMatrix ji = FpMatrix::mul(mult(i, q + 1), mult(j, q), F);
        if (!(ij == ji)) return false;
      }
    }
  }
  return true;
}

GradedModule quotient_module(const HomogeneousIdeal& I, int max_degree) {
  if (max_degree < 2) throw std::invalid_argument("quotient window must reach degree 2");
  const PrimeField& F = I.ring.field;
  const uint32_t nv = I.ring.num_vars;

  GradedModule M;
  M.ring = I.ring;
  M.max_degree = max_degree;
  M.piece_dims.assign(max_degree + 1, 0);

  // per degree: monomial basis, non-pivot monomials, and the reduction of
  // every monomial to quotient coordinates
  std::vector<std::vector<std::vector<uint32_t>>> bases(max_degree + 1);
  std::vector<std::vector<uint32_t>> nonpivot(max_degree + 1);
  std::vector<std::vector<std::vector<uint64_t>>> reduce(max_degree + 1);  // [q][mono] -> coords
  std::vector<MonoMap> idx(max_degree + 1);

  for (int q = 0; q <= max_degree; ++q) {
    bases[q] = monomial_basis(nv, q);
    idx[q] = index_of(bases[q]);
    const uint32_t n = static_cast<uint32_t>(bases[q].size());

    std::vector<std::vector<uint64_t>> rows;
    for (const auto& [dg, coeffs] : I.generators) {
      if (static_cast<int>(dg) > q) continue;
      auto gen_basis = monomial_basis(nv, dg);
      for (const auto& mu : monomial_basis(nv, q - dg)) {
        std::vector<uint64_t> row(n, 0);
        for (uint32_t k = 0; k < gen_basis.size(); ++k) {
          if (coeffs[k] % F.p == 0) continue;
          std::vector<uint32_t> e(nv);
          for (uint32_t v = 0; v < nv; ++v) e[v] = mu[v] + gen_basis[k][v];
          row[idx[q].at(e)] = F.add(row[idx[q].at(e)], coeffs[k] % F.p);
        }
        rows.push_back(std::move(row));
      }
    }
    Rref R = rref_rows(std::move(rows), n, F);

    std::vector<char> is_pivot(n, 0);
    for (uint32_t c : R.pivot_cols) is_pivot[c] = 1;
    std::vector<uint32_t> pos(n, UINT32_MAX);
    for (uint32_t j = 0; j < n; ++j) {
      if (!is_pivot[j]) {
        pos[j] = static_cast<uint32_t>(nonpivot[q].size());
        nonpivot[q].push_back(j);
      }
    }
    M.piece_dims[q] = static_cast<uint32_t>(nonpivot[q].size());

    reduce[q].assign(n, {});
    for (uint32_t j = 0; j < n; ++j) {
      std::vector<uint64_t> coords(M.piece_dims[q], 0);
      if (!is_pivot[j]) {
        coords[pos[j]] = 1;
      } else {
        // row k with pivot j: m_j = -sum over non-pivot columns
        uint32_t k = UINT32_MAX;
        for (uint32_t t = 0; t < R.pivot_cols.size(); ++t)
          if (R.pivot_cols[t] == j) {
            k = t;
            break;
          }
        for (uint32_t t = 0; t < nonpivot[q].size(); ++t)
          coords[t] = F.neg(R.rows[k][nonpivot[q][t]]);
      }
      reduce[q][j] = std::move(coords);
    }
  }

  M.mult_.assign(nv, std::vector<FpMatrix>(max_degree, FpMatrix()));
  for (uint32_t v = 0; v < nv; ++v) {
    for (int q = 0; q < max_degree; ++q) {
      FpMatrix mm(M.piece_dims[q + 1], M.piece_dims[q]);
      for (uint32_t c = 0; c < M.piece_dims[q]; ++c) {
        std::vector<uint32_t> e = bases[q][nonpivot[q][c]];
        ++e[v];
        const auto& coords = reduce[q + 1][idx[q + 1].at(e)];
        for (uint32_t r = 0; r < coords.size(); ++r)
          if (coords[r]) mm.add(r, c, coords[r]);
      }
      mm.finalize(F);
      M.mult_[v][q] = std::move(mm);
    }
  }
  return M;
}

GradedModule residue_field_module(const RingSpec& ring, int max_degree) {
  if (max_degree < 1) throw std::invalid_argument("window must reach degree 1");
  GradedModule M;
  M.ring = ring;
  M.max_degree = max_degree;
  M.piece_dims.assign(max_degree + 1, 0);
  M.piece_dims[0] = 1;
  M.mult_.assign(ring.num_vars, std::vector<FpMatrix>(max_degree, FpMatrix()));
  for (uint32_t v = 0; v < ring.num_vars; ++v)
    for (int q = 0; q < max_degree; ++q) M.mult_[v][q] = FpMatrix(M.piece_dims[q + 1], M.piece_dims[q]);
  return M;
}

HomogeneousIdeal twisted_cubic_ideal(const PrimeField& F) {
  HomogeneousIdeal I;
  I.ring = RingSpec{4, F};
  auto basis = monomial_basis(4, 2);
  MonoMap idx = index_of(basis);
  auto quad = [&](std::vector<uint32_t> plus, std::vector<uint32_t> minus) {
    std::vector<uint64_t> c(basis.size(), 0);
    c[idx.at(plus)] = 1;
    c[idx.at(minus)] = F.p - 1;
    return std::make_pair(2u, c);
  };
  I.generators.push_back(quad({1, 0, 1, 0}, {0, 2, 0, 0}));  // x0 x2 - x1^2
  I.generators.push_back(quad({1, 0, 0, 1}, {0, 1, 1, 0}));  // x0 x3 - x1 x2
  I.generators.push_back(quad({0, 1, 0, 1}, {0, 0, 2, 0}));  // x1 x3 - x2^2
  return I;
}

}  // namespace syz
