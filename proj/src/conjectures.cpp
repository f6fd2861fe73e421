#include "syz/conjectures.hpp"

#include <stdexcept>
#include <utility>

#include "syz/linalg.hpp"
#include "syz/util.hpp"

namespace syz {

namespace {

int64_t exact_div(int64_t num, int64_t den, const char* what) {
  if (den == 0 || num % den != 0) throw std::logic_error(std::string("non-integer table entry in ") + what);
  return num / den;
}

BettiDiagram blank_diagram(uint32_t num_vars, int p_max, int q_max) {
  BettiDiagram D;
  D.num_vars = num_vars;
  D.p_max = p_max;
  D.q_max = q_max;
  for (int p = 0; p <= p_max; ++p)
    for (int q = 0; q <= q_max; ++q) D.entries[{p, q}] = 0;
  return D;
}

// det of the p x p matrix rows[k][cols[l]] over F, by elimination
uint64_t minor_det(const std::vector<const std::vector<uint64_t>*>& rows,
                   const std::vector<uint32_t>& cols, const PrimeField& F) {
  const size_t n = rows.size();
  std::vector<std::vector<uint64_t>> a(n, std::vector<uint64_t>(n));
  for (size_t r = 0; r < n; ++r)
    for (size_t c = 0; c < n; ++c) a[r][c] = (*rows[r])[cols[c]];
  uint64_t det = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    while (piv < n && a[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = F.neg(det);
    }
    det = F.mul(det, a[c][c]);
    const uint64_t inv = F.inv(a[c][c]);
    for (size_t r = c + 1; r < n; ++r) {
      if (!a[r][c]) continue;
      const uint64_t f = F.mul(a[r][c], inv);
      for (size_t k = c; k < n; ++k) a[r][k] = F.sub(a[r][k], F.mul(f, a[c][k]));
    }
  }
  return det;
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    default: return "UNDECIDABLE";
  }
}

const char* family_name(Family f) {
  switch (f) {
    case Family::canonical_odd: return "canonical-odd";
    case Family::canonical_even: return "canonical-even";
    case Family::paracanonical_odd: return "paracanonical-odd";
    default: return "paracanonical-even";
  }
}

Family family_from_name(const std::string& name) {
  if (name == "canonical-odd") return Family::canonical_odd;
  if (name == "canonical-even") return Family::canonical_even;
  if (name == "paracanonical-odd") return Family::paracanonical_odd;
  if (name == "paracanonical-even") return Family::paracanonical_even;
  throw std::invalid_argument("unknown table family: " + name);
}

ExpectedTable expected_table(Family family, uint32_t genus) {
  const bool canonical = family == Family::canonical_odd || family == Family::canonical_even;
  const bool odd = family == Family::canonical_odd || family == Family::paracanonical_odd;
  if ((genus % 2 == 0) == odd)
    throw std::invalid_argument(std::string("genus parity does not match ") + family_name(family));
  if (canonical && genus < 3) throw std::invalid_argument("canonical tables need genus >= 3");
  if (!canonical && genus < 5) throw std::invalid_argument("paracanonical tables need genus >= 5");

  ExpectedTable T;
  T.family = family;
  T.genus = genus;
  const int64_t g = genus;

  switch (family) {
    case Family::canonical_odd: {
      const int64_t i = (g - 3) / 2;
      T.diagram = blank_diagram(genus, static_cast<int>(g - 2), 3);
      T.diagram.entries[{0, 0}] = 1;
      T.diagram.entries[{static_cast<int>(g - 2), 3}] = 1;
      for (int64_t p = 1; p <= i; ++p)
        T.diagram.entries[{static_cast<int>(p), 1}] =
            exact_div((2 * i + 2 - p) * (2 * i - 2 * p + 2) * binom(2 * i + 2, p - 1), p + 1,
                      "canonical-odd row 1");
      for (int64_t p = i + 1; p <= 2 * i; ++p)
        T.diagram.entries[{static_cast<int>(p), 2}] =
            exact_div((2 * i + 1 - p) * (2 * p - 2 * i) * binom(2 * i + 2, p), p + 2,
                      "canonical-odd row 2");
      break;
    }
    case Family::canonical_even: {
      const int64_t i = (g - 2) / 2;
      T.diagram = blank_diagram(genus, static_cast<int>(g - 2), 3);
      T.diagram.entries[{0, 0}] = 1;
      T.diagram.entries[{static_cast<int>(g - 2), 3}] = 1;
      for (int64_t p = 1; p <= i; ++p)
        T.diagram.entries[{static_cast<int>(p), 1}] =
            exact_div((2 * i - p + 1) * (2 * i - 2 * p + 1) * binom(2 * i + 1, p - 1), p + 1,
                      "canonical-even row 1");
      for (int64_t p = i; p <= 2 * i - 1; ++p)
        T.diagram.entries[{static_cast<int>(p), 2}] =
            exact_div((2 * i - p) * (2 * p - 2 * i + 1) * binom(2 * i + 1, p), p + 2,
                      "canonical-even row 2");
      break;
    }
    case Family::paracanonical_odd: {
      const int64_t i = (g - 5) / 2;
      T.diagram = blank_diagram(genus - 1, static_cast<int>(g - 3), 2);
      T.diagram.entries[{0, 0}] = 1;
      for (int64_t p = 1; p <= i; ++p)
        T.diagram.entries[{static_cast<int>(p), 1}] =
            exact_div(p * (2 * i - 2 * p + 1) * binom(2 * i + 4, p + 1), 2 * i + 3,
                      "paracanonical-odd row 1");
      for (int64_t p = i; p <= 2 * i + 2; ++p)
        T.diagram.entries[{static_cast<int>(p), 2}] =
            exact_div((p + 1) * (2 * p - 2 * i + 1) * binom(2 * i + 4, p + 2), 2 * i + 3,
                      "paracanonical-odd row 2");
      break;
    }
    case Family::paracanonical_even: {
      const int64_t i = (g - 6) / 2;
      T.diagram = blank_diagram(genus - 1, static_cast<int>(g - 3), 2);
      T.diagram.entries[{0, 0}] = 1;
      for (int64_t p = 1; p <= i; ++p)
        T.diagram.entries[{static_cast<int>(p), 1}] =
            exact_div(p * (i + 1 - p) * binom(2 * i + 5, p + 1), i + 2,
                      "paracanonical-even row 1");
      for (int64_t p = i + 1; p <= 2 * i + 3; ++p)
        T.diagram.entries[{static_cast<int>(p), 2}] =
            exact_div((p + 1) * (p - i) * binom(2 * i + 5, p + 2), i + 2,
                      "paracanonical-even row 2");
      break;
    }
  }
  return T;
}

PredicateResult is_natural(const BettiDiagram& D) {
  PredicateResult r;
  if (D.q_max < 2 || D.p_max < 1) {
    r.verdict = Verdict::undecidable;
    r.detail = "window has no adjacent (p,2),(p+1,1) pair";
    return r;
  }
  for (int p = 0; p + 1 <= D.p_max; ++p) {
    if (D.at(p, 2) != 0 && D.at(p + 1, 1) != 0) {
      r.verdict = Verdict::fail;
      r.p = p;
      r.q = 2;
      r.detail = "b_{" + std::to_string(p) + ",2} and b_{" + std::to_string(p + 1) +
                 ",1} are both nonzero";
      return r;
    }
  }
  r.verdict = Verdict::pass;
  return r;
}

PredicateResult green_predicate(const BettiDiagram& D, int cliff) {
  if (cliff < 1)
    throw std::invalid_argument("Clifford index below 1 is out of scope (hyperelliptic models are rejected upstream)");
  PredicateResult r;
  if (D.q_max < 2 || D.p_max < cliff) {
    r.verdict = Verdict::undecidable;
    r.detail = "window does not reach column " + std::to_string(cliff) + " of row 2";
    return r;
  }
  for (int p = 0; p < cliff; ++p) {
    if (D.at(p, 2) != 0) {
      r.verdict = Verdict::fail;
      r.p = p;
      r.q = 2;
      r.detail = "b_{" + std::to_string(p) + ",2} = " + std::to_string(D.at(p, 2)) +
                 " below the Clifford index";
      return r;
    }
  }
  if (D.at(cliff, 2) == 0) {
    r.verdict = Verdict::fail;
    r.p = cliff;
    r.q = 2;
    r.detail = "b_{" + std::to_string(cliff) + ",2} vanishes at the Clifford index";
    return r;
  }
  r.verdict = Verdict::pass;
  return r;
}

PredicateResult np_property(const BettiDiagram& D, bool normality_audit, int p) {
  if (p < 0) throw std::invalid_argument("N_p needs p >= 0");
  PredicateResult r;
  if (!normality_audit) {
    r.verdict = Verdict::fail;
    r.detail = "coordinate-ring dimension audit failed";
    return r;
  }
  if (D.p_max < p || D.q_max < 2) {
    r.verdict = Verdict::undecidable;
    r.detail = "window does not cover columns 0.." + std::to_string(p) + " of rows q >= 2";
    return r;
  }
  for (int j = 0; j <= p; ++j) {
    for (int q = 2; q <= D.q_max; ++q) {
      if (D.at(j, q) != 0) {
        r.verdict = Verdict::fail;
        r.p = j;
        r.q = q;
        r.detail = "b_{" + std::to_string(j) + "," + std::to_string(q) + "} = " +
                   std::to_string(D.at(j, q));
        return r;
      }
    }
  }
  r.verdict = Verdict::pass;
  return r;
}

bool duality_check(const BettiDiagram& D, uint32_t g) {
  const int gp = static_cast<int>(g) - 2;
  for (const auto& [key, val] : D.entries) {
    const int mp = gp - key.first, mq = 3 - key.second;
    if (!D.in_window(mp, mq)) continue;
    if (val != D.at(mp, mq)) return false;
  }
  return true;
}

int64_t diagonal_identity_value(int64_t d, uint32_t g, int p) {
  const int64_t n = d - static_cast<int64_t>(g);
  if (n < 1) throw std::invalid_argument("identity needs degree > genus");
  const int64_t c = binom(n, p + 1);
  if (c == 0) return 0;
  // (p+1) C(n,p+1) ((d+1-g)/(p+2) - d/n), cleared of denominators
  const int64_t num = (p + 1) * c * (n * (d + 1 - static_cast<int64_t>(g)) - d * (p + 2));
  return exact_div(num, (p + 2) * n, "diagonal identity");
}

DiagonalIdentityResult diagonal_identity_check(const BettiDiagram& D, int64_t d, uint32_t g) {
  DiagonalIdentityResult r;
  if (D.q_max < 2) return r;  // nothing visible to compare
  for (int p = 0; p + 1 <= D.p_max; ++p) {
    if (D.at(p + 1, 1) - D.at(p, 2) != diagonal_identity_value(d, g, p)) {
      r.ok = false;
      r.first_bad_p = p;
      return r;
    }
  }
  return r;
}

WitnessSyzygy gl_witness(const EmbeddedModel& M,
                         const std::vector<std::vector<uint64_t>>& basis1,
                         const std::vector<std::vector<uint64_t>>& basis2) {
  if (basis1.size() < 2 || basis2.size() < 2)
    throw std::invalid_argument("witness construction needs at least two sections on each factor");
  const GradedModule& G = M.module;
  const PrimeField& F = G.ring.field;
  const uint32_t nv = G.ring.num_vars;
  const uint32_t n1 = static_cast<uint32_t>(G.dim(1));
  const uint32_t r1 = static_cast<uint32_t>(basis1.size()) - 1;
  const uint32_t r2 = static_cast<uint32_t>(basis2.size()) - 1;
  const int p = static_cast<int>(r1 + r2) - 1;
  if (static_cast<uint32_t>(p) > nv)
    throw std::invalid_argument("homological degree exceeds the number of sections");
  if (G.max_degree < 2) throw std::invalid_argument("model must carry degrees up to 2");

  if (n1 != nv || M.generator_coords.size() != nv)
    throw std::invalid_argument("model generators must be an independent basis of degree 1");

  const size_t npts = M.basis[1].empty() ? 0 : M.basis[1][0].size();
  // degree-1 coordinates of a pointwise product, checked against the basis
  auto product_coords = [&](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    if (a.size() != npts || b.size() != npts)
      throw std::invalid_argument("section value rows do not match the model's sample points");
    std::vector<uint64_t> prod(npts);
    for (size_t t = 0; t < npts; ++t) prod[t] = F.mul(a[t], b[t]);
    std::vector<uint64_t> c = M.coordinates(1, prod);
    for (size_t t = 0; t < npts; ++t) {
      uint64_t acc = 0;
      for (uint32_t m = 0; m < n1; ++m) acc = F.add(acc, F.mul(c[m], M.basis[1][m][t]));
      if (acc != prod[t])
        throw std::invalid_argument("pointwise product does not lie in the degree-1 piece");
    }
    return c;
  };

  // The exterior factor of the Koszul complex is indexed by the ring
  // variables, while coordinates() works in the echelonized degree-1 basis;
  // translate through the generators' change-of-basis matrix.
  FpMatrix gen_t(n1, nv);
  for (uint32_t k = 0; k < nv; ++k)
    for (uint32_t m = 0; m < n1; ++m)
      if (M.generator_coords[k][m]) gen_t.add(m, k, M.generator_coords[k][m]);
  gen_t.finalize(F);
  auto variable_coords = [&](const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
    auto c = solve_membership(gen_t, product_coords(a, b), F);
    if (!c) throw std::logic_error("degree-1 basis change is singular");
    return *c;
  };

  // the wedge pool: tau_0 sigma_0..sigma_r1 followed by sigma_0 tau_1..tau_r2
  std::vector<std::vector<uint64_t>> pool_a(r1 + 1), pool_b(r2);
  for (uint32_t i = 0; i <= r1; ++i) pool_a[i] = variable_coords(basis2[0], basis1[i]);
  for (uint32_t j = 1; j <= r2; ++j) pool_b[j - 1] = variable_coords(basis1[0], basis2[j]);

  const auto subs = subsets_lex(nv, static_cast<uint32_t>(p));
  std::vector<uint64_t> gamma(subs.size() * n1, 0);
  for (uint32_t i = 0; i <= r1; ++i) {
    for (uint32_t j = 1; j <= r2; ++j) {
      std::vector<const std::vector<uint64_t>*> wedge;
      wedge.reserve(p);
      for (uint32_t k = 0; k <= r1; ++k)
        if (k != i) wedge.push_back(&pool_a[k]);
      for (uint32_t k = 1; k <= r2; ++k)
        if (k != j) wedge.push_back(&pool_b[k - 1]);
      const bool neg = (i + j) % 2 != 0;
      const std::vector<uint64_t> rhs = product_coords(basis1[i], basis2[j]);
      for (size_t s = 0; s < subs.size(); ++s) {
        uint64_t det = minor_det(wedge, subs[s], F);
        if (!det) continue;
        if (neg) det = F.neg(det);
        for (uint32_t m = 0; m < n1; ++m) {
          if (!rhs[m]) continue;
          uint64_t& slot = gamma[s * n1 + m];
          slot = F.add(slot, F.mul(det, rhs[m]));
        }
      }
    }
  }

  bool nonzero = false;
  for (uint64_t v : gamma)
    if (v) {
      nonzero = true;
      break;
    }
  if (!nonzero) throw redraw_needed("witness class collapsed to zero");

  const FpMatrix d_out = koszul_differential(G, p, 1);
  for (uint64_t v : d_out.apply(gamma, F))
    if (v) throw std::logic_error("witness class is not a cocycle");

  const FpMatrix d_in = koszul_differential(G, p + 1, 0);
  WitnessSyzygy w;
  w.p = p;
  w.coordinates = std::move(gamma);
  w.cocycle_ok = true;
  w.coboundary = solve_membership(d_in, w.coordinates, F).has_value();
  if (w.coboundary) throw redraw_needed("witness class is a coboundary");
  return w;
}

}  // namespace syz
