#include "syz/curves.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>

#include "syz/linalg.hpp"
#include "syz/matrix.hpp"
#include "syz/util.hpp"

namespace syz {
namespace {

uint64_t powu(const PrimeField& F, uint64_t b, uint64_t e) {
  if (e == 0) return 1;
  return F.pow(b % F.p, e);
}

// ----- univariate polynomials, ascending coefficients, trimmed -----

using Poly = std::vector<uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b, const PrimeField& F) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % F.p;
  }
  trim(c);
  return c;
}

Poly poly_mod(Poly a, const Poly& m, const PrimeField& F) {
  trim(a);
  const uint64_t lead_inv = F.inv(m.back());
  while (a.size() >= m.size()) {
    const size_t shift = a.size() - m.size();
    const uint64_t c = F.mul(a.back(), lead_inv);
    if (c)
      for (size_t j = 0; j + 1 < m.size(); ++j)
        a[shift + j] = F.sub(a[shift + j], F.mul(c, m[j]));
    a.pop_back();
    trim(a);
  }
  return a;
}

Poly poly_div(Poly a, const Poly& b, const PrimeField& F) {
  trim(a);
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
  const uint64_t lead_inv = F.inv(b.back());
  while (a.size() >= b.size()) {
    const size_t shift = a.size() - b.size();
    const uint64_t c = F.mul(a.back(), lead_inv);
    q[shift] = c;
    if (c)
      for (size_t j = 0; j + 1 < b.size(); ++j)
        a[shift + j] = F.sub(a[shift + j], F.mul(c, b[j]));
    a.pop_back();
    trim(a);
  }
  trim(q);
  return q;
}

Poly poly_gcd(Poly a, Poly b, const PrimeField& F) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(std::move(a), b, F);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    const uint64_t s = F.inv(a.back());
    for (auto& v : a) v = F.mul(v, s);
  }
  return a;
}

Poly poly_sub(Poly a, const Poly& b, const PrimeField& F) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  trim(a);
  return a;
}

Poly poly_powmod(Poly base, uint64_t e, const Poly& m, const PrimeField& F) {
  Poly r = {1};
  base = poly_mod(std::move(base), m, F);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base, F), m, F);
    base = poly_mod(poly_mul(base, base, F), m, F);
    e >>= 1;
  }
  return r;
}

// Equal-degree splitting of a monic squarefree product of linear factors.
void split_roots(const Poly& v, const PrimeField& F, Rng& rng, std::vector<uint64_t>& out) {
  if (v.size() <= 1) return;
  if (v.size() == 2) {
    out.push_back(F.neg(v[0]));
    return;
  }
  for (;;) {
    const uint64_t c = rng.field_element(F);
    Poly h = poly_powmod({c, 1}, (F.p - 1) / 2, v, F);
    h = poly_sub(std::move(h), {1}, F);
    Poly w = poly_gcd(std::move(h), v, F);
    if (w.size() > 1 && w.size() < v.size()) {
      Poly rest = poly_div(v, w, F);
      split_roots(w, F, rng, out);
      split_roots(rest, F, rng, out);
      return;
    }
  }
}

// All roots of u in F_p, ascending.
std::vector<uint64_t> cz_roots(Poly u, const PrimeField& F, Rng& rng) {
  trim(u);
  std::vector<uint64_t> roots;
  if (u.size() <= 1) return roots;
  const uint64_t s = F.inv(u.back());
  for (auto& v : u) v = F.mul(v, s);
  Poly yp = poly_powmod({0, 1}, F.p, u, F);
  Poly v = poly_gcd(poly_sub(std::move(yp), {0, 1}, F), u, F);
  split_roots(v, F, rng, roots);
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ----- section spaces of glued bundles on a nodal rational curve -----

// Row i over coefficients f_0..f_deg is c_i a_i^k / D'(a_i) + b_i^k / D'(b_i),
// where D is the monic product over all node parameters.
FpMatrix residue_conditions(const NodalRationalCurve& C, uint32_t deg,
                            const std::vector<uint64_t>& c, const PrimeField& F) {
  std::vector<uint64_t> params;
  for (const auto& nd : C.nodes) {
    params.push_back(nd.first);
    params.push_back(nd.second);
  }
  auto dprime = [&](uint64_t x) {
    uint64_t r = 1;
    for (uint64_t y : params)
      if (y != x) r = F.mul(r, F.sub(x, y));
    return r;
  };
  FpMatrix m(C.genus, deg + 1);
  for (uint32_t i = 0; i < C.genus; ++i) {
    const uint64_t a = C.nodes[i].first, b = C.nodes[i].second;
    const uint64_t wa = F.mul(c[i] % F.p, F.inv(dprime(a)));
    const uint64_t wb = F.inv(dprime(b));
    uint64_t pa = 1, pb = 1;
    for (uint32_t k = 0; k <= deg; ++k) {
      const uint64_t v = F.add(F.mul(wa, pa), F.mul(wb, pb));
      if (v) m.add(i, k, v);
      pa = F.mul(pa, a);
      pb = F.mul(pb, b);
    }
  }
  m.finalize(F);
  return m;
}

// Row i over coefficients f_0..f_deg is a_i^k - u_i b_i^k.
FpMatrix gluing_conditions(const NodalRationalCurve& C, uint32_t deg,
                           const std::vector<uint64_t>& u, const PrimeField& F) {
  FpMatrix m(C.genus, deg + 1);
  for (uint32_t i = 0; i < C.genus; ++i) {
    const uint64_t a = C.nodes[i].first, b = C.nodes[i].second;
    uint64_t pa = 1, pb = 1;
    for (uint32_t k = 0; k <= deg; ++k) {
      const uint64_t v = F.sub(pa, F.mul(u[i] % F.p, pb));
      if (v) m.add(i, k, v);
      pa = F.mul(pa, a);
      pb = F.mul(pb, b);
    }
  }
  m.finalize(F);
  return m;
}

std::vector<std::vector<uint64_t>> evaluate_kernel(const FpMatrix& cond,
                                                   const std::vector<uint64_t>& points,
                                                   const PrimeField& F) {
  auto polys = kernel_basis(cond, F);
  std::vector<std::vector<uint64_t>> rows;
  rows.reserve(polys.size());
  for (const auto& c : polys) {
    std::vector<uint64_t> vals(points.size());
    for (size_t k = 0; k < points.size(); ++k) {
      uint64_t acc = 0;
      for (size_t j = c.size(); j-- > 0;) acc = (acc * (points[k] % F.p) + c[j]) % F.p;
      vals[k] = acc;
    }
    rows.push_back(std::move(vals));
  }
  return rows;
}

// Replace rows by T rows for a seeded invertible T (unit lower triangular
// times upper triangular with nonzero diagonal). Canonical bases of two
// bundle factors can coincide (monomials on a rational curve), which makes
// the wedge-based witness collapse; a generic mix avoids that.
void mix_basis(std::vector<std::vector<uint64_t>>& rows, Rng& rng, const PrimeField& F) {
  const size_t n = rows.size();
  if (n < 2 || rows[0].empty()) return;
  std::vector<std::vector<uint64_t>> t(n, std::vector<uint64_t>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    t[i][i] = rng.nonzero(F);
    for (size_t j = i + 1; j < n; ++j) t[i][j] = rng.field_element(F);
  }
  for (size_t i = 1; i < n; ++i) {
    std::vector<uint64_t> low(i);
    for (size_t j = 0; j < i; ++j) low[j] = rng.field_element(F);
    for (size_t k = 0; k < n; ++k) {
      uint64_t acc = t[i][k];
      for (size_t j = 0; j < i; ++j) acc = F.add(acc, F.mul(low[j], t[j][k]));
      t[i][k] = acc;
    }
  }
  const size_t npts = rows[0].size();
  std::vector<std::vector<uint64_t>> out(n, std::vector<uint64_t>(npts, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!t[i][j]) continue;
      for (size_t k = 0; k < npts; ++k)
        out[i][k] = F.add(out[i][k], F.mul(t[i][j], rows[j][k]));
    }
  rows = std::move(out);
}

void check_torsion(const TorsionBundle& eta, uint32_t genus, const PrimeField& F) {
  if (eta.gluing.size() != genus)
    throw std::invalid_argument("one gluing constant per node required");
  for (uint64_t c : eta.gluing)
    if (c % F.p == 0 || F.pow(c % F.p, eta.level) != 1)
      throw std::invalid_argument("gluing constant is not a root of unity of the given level");
}

std::vector<uint64_t> derivative_partial(const std::vector<uint64_t>& form, uint32_t degree,
                                         uint32_t axis, const PrimeField& F) {
  const auto from = monomial_basis(3, degree);
  const auto to = monomial_basis(3, degree - 1);
  std::map<std::vector<uint32_t>, uint32_t> idx;
  for (uint32_t i = 0; i < to.size(); ++i) idx[to[i]] = i;
  std::vector<uint64_t> out(to.size(), 0);
  for (size_t k = 0; k < from.size(); ++k) {
    if (!form[k] || from[k][axis] == 0) continue;
    auto e = from[k];
    const uint64_t mult = e[axis] % F.p;
    e[axis] -= 1;
    const uint32_t j = idx.at(e);
    out[j] = F.add(out[j], F.mul(form[k] % F.p, mult));
  }
  return out;
}

template <class Fn>
EmbeddedModel retry_model(uint64_t seed, Fn&& make) {
  std::string chain;
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    try {
      EmbeddedModel m = make(seed + attempt);
      if (m.audit_pass) return m;
      chain += " [seed " + std::to_string(seed + attempt) + ": audit failed]";
    } catch (const redraw_needed& e) {
      chain += " [seed " + std::to_string(seed + attempt) + ": " + e.what() + "]";
    }
  }
  throw std::runtime_error("no usable model after 32 attempts:" + chain);
}

}  // namespace

NodalRationalCurve rational_nodal_curve(uint32_t g, uint64_t seed, const PrimeField& F) {
  if (F.p <= 2ull * g + 2) throw std::invalid_argument("field too small for 2g distinct points");
  NodalRationalCurve C;
  C.genus = g;
  C.seed = seed;
  C.field = F;
  Rng rng(seed);
  std::set<uint64_t> used;
  std::vector<uint64_t> pts;
  while (pts.size() < 2ull * g) {
    const uint64_t v = rng.field_element(F);
    if (used.insert(v).second) pts.push_back(v);
  }
  for (uint32_t i = 0; i < g; ++i) C.nodes.push_back({pts[2 * i], pts[2 * i + 1]});
  return C;
}

std::vector<uint64_t> curve_sample_points(const NodalRationalCurve& C, uint32_t count) {
  const PrimeField& F = C.field;
  if (F.p <= count + 2ull * C.genus + 2)
    throw std::invalid_argument("field too small for the sample set");
  std::set<uint64_t> used;
  for (const auto& nd : C.nodes) {
    used.insert(nd.first);
    used.insert(nd.second);
  }
  Rng rng(C.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<uint64_t> pts;
  while (pts.size() < count) {
    const uint64_t v = rng.field_element(F);
    if (used.insert(v).second) pts.push_back(v);
  }
  return pts;
}

TorsionBundle random_torsion(const PrimeField& F, uint32_t g, uint32_t level, Rng& rng) {
  if (level < 2) throw std::invalid_argument("torsion level must be at least 2");
  if (F.root_order % level != 0)
    throw std::invalid_argument("field carries no root of unity of the requested order");
  const uint64_t base = F.pow(F.zeta, F.root_order / level);
  for (int tries = 0; tries < 64; ++tries) {
    TorsionBundle eta;
    eta.level = level;
    for (uint32_t i = 0; i < g; ++i) eta.gluing.push_back(F.pow(base, rng.below(level)));
    if (torsion_order(eta, F) == level) return eta;
  }
  throw redraw_needed("could not draw gluing constants of exact order");
}

uint32_t torsion_order(const TorsionBundle& eta, const PrimeField& F) {
  uint64_t l = 1;
  for (uint64_t c : eta.gluing) l = std::lcm(l, unit_order(F, c % F.p));
  return static_cast<uint32_t>(l);
}

LineBundleData canonical_sections(const NodalRationalCurve& C) {
  const PrimeField& F = C.field;
  const uint32_t g = C.genus;
  if (g < 1) throw std::invalid_argument("canonical sections need genus >= 1");
  const uint32_t deg = 2 * g - 2;
  auto points = curve_sample_points(C, 4 * deg + 2 * g + 16);
  auto rows = evaluate_kernel(residue_conditions(C, deg, std::vector<uint64_t>(g, 1), F),
                              points, F);
  if (rows.size() != g) throw redraw_needed("canonical residue conditions came out degenerate");
  LineBundleData L;
  L.kind = BundleKind::canonical;
  L.genus = g;
  L.degree = deg;
  L.field = F;
  L.sample_points = std::move(points);
  L.sections = std::move(rows);
  return L;
}

LineBundleData paracanonical_sections(const NodalRationalCurve& C, const TorsionBundle& eta) {
  const PrimeField& F = C.field;
  const uint32_t g = C.genus;
  if (g < 2) throw std::invalid_argument("paracanonical sections need genus >= 2");
  check_torsion(eta, g, F);
  bool nontrivial = false;
  for (uint64_t c : eta.gluing)
    if (c % F.p != 1) nontrivial = true;
  if (!nontrivial) throw std::invalid_argument("trivial gluing: use canonical sections instead");
  const uint32_t deg = 2 * g - 2;
  auto points = curve_sample_points(C, 3 * deg + 2 * g + 16);
  auto rows = evaluate_kernel(residue_conditions(C, deg, eta.gluing, F), points, F);
  if (rows.size() != g - 1)
    throw redraw_needed("twisted residue conditions came out degenerate");
  LineBundleData L;
  L.kind = BundleKind::paracanonical;
  L.genus = g;
  L.degree = deg;
  L.level = eta.level;
  L.field = F;
  L.sample_points = std::move(points);
  L.sections = std::move(rows);
  return L;
}

LineBundleData twist_sections(const NodalRationalCurve& C, uint32_t d,
                              const std::optional<TorsionBundle>& eta) {
  const PrimeField& F = C.field;
  const uint32_t g = C.genus;
  if (d < 2 * g + 1) throw std::invalid_argument("twist degree below the nonspecial range");
  if (eta) check_torsion(*eta, g, F);
  Rng rng(C.seed ^ (0x712a9d0f00000001ull + 0x100000001b3ull * d));
  std::vector<uint64_t> u(g);
  for (uint32_t i = 0; i < g; ++i) {
    u[i] = rng.nonzero(F);
    if (eta) u[i] = F.mul(u[i], eta->gluing[i] % F.p);
  }
  auto points = curve_sample_points(C, 4 * d + 2 * g + 16);
  auto rows = glued_section_values(C, d, u, points);
  if (rows.size() != d + 1 - g) throw redraw_needed("gluing conditions came out degenerate");
  LineBundleData L;
  L.kind = BundleKind::twist;
  L.genus = g;
  L.degree = d;
  L.level = eta ? eta->level : 1;
  L.field = F;
  L.sample_points = std::move(points);
  L.sections = std::move(rows);
  return L;
}

std::vector<std::vector<uint64_t>> glued_section_values(const NodalRationalCurve& C, uint32_t d,
                                                        const std::vector<uint64_t>& gluing,
                                                        const std::vector<uint64_t>& points) {
  if (gluing.size() != C.genus) throw std::invalid_argument("one gluing constant per node");
  return evaluate_kernel(gluing_conditions(C, d, gluing, C.field), points, C.field);
}

uint64_t ternary_form_value(const std::vector<uint64_t>& form, uint32_t degree, uint64_t x,
                            uint64_t y, const PrimeField& F) {
  const auto basis = monomial_basis(3, degree);
  if (form.size() != basis.size()) throw std::invalid_argument("coefficient count mismatch");
  uint64_t acc = 0;
  for (size_t k = 0; k < basis.size(); ++k) {
    if (!form[k]) continue;
    acc = F.add(acc, F.mul(form[k] % F.p, F.mul(powu(F, x, basis[k][0]), powu(F, y, basis[k][1]))));
  }
  return acc;
}

NodalPlaneCurve plane_curve_with_nodes(uint32_t d, uint32_t delta, uint64_t seed,
                                       const PrimeField& F) {
  if (d < 3) throw std::invalid_argument("plane model degree must be at least 3");
  const int64_t coeffs = monomial_count(3, d);
  if (coeffs <= 3ll * delta)
    throw std::invalid_argument("no degree-d forms double at that many points");
  const uint32_t arith = (d - 1) * (d - 2) / 2;
  if (delta > arith) throw std::invalid_argument("genus would be negative");
  const uint32_t g = arith - delta;

  Rng rng(seed);
  std::set<std::pair<uint64_t, uint64_t>> nodeset;
  std::vector<std::pair<uint64_t, uint64_t>> nodes;
  while (nodes.size() < delta) {
    const std::pair<uint64_t, uint64_t> pt{rng.field_element(F), rng.field_element(F)};
    if (nodeset.insert(pt).second) nodes.push_back(pt);
  }

  const auto basis = monomial_basis(3, d);
  FpMatrix cond(3 * delta, static_cast<uint32_t>(basis.size()));
  for (uint32_t i = 0; i < delta; ++i) {
    const uint64_t x = nodes[i].first, y = nodes[i].second;
    for (uint32_t k = 0; k < basis.size(); ++k) {
      const uint32_t e0 = basis[k][0], e1 = basis[k][1];
      const uint64_t xv = powu(F, x, e0), yv = powu(F, y, e1);
      cond.add(3 * i, k, F.mul(xv, yv));
      if (e0) cond.add(3 * i + 1, k, F.mul(e0 % F.p, F.mul(powu(F, x, e0 - 1), yv)));
      if (e1) cond.add(3 * i + 2, k, F.mul(e1 % F.p, F.mul(xv, powu(F, y, e1 - 1))));
    }
  }
  cond.finalize(F);
  const auto K = kernel_basis(cond, F);
  std::vector<uint64_t> form(basis.size(), 0);
  bool nonzero = false;
  for (const auto& kv : K) {
    const uint64_t c = rng.field_element(F);
    if (!c) continue;
    nonzero = true;
    for (size_t k = 0; k < kv.size(); ++k)
      if (kv[k]) form[k] = F.add(form[k], F.mul(c, kv[k]));
  }
  if (!nonzero) throw redraw_needed("drew the zero form");

  const auto fx = derivative_partial(form, d, 0, F);
  const auto fy = derivative_partial(form, d, 1, F);
  const auto fxx = derivative_partial(fx, d - 1, 0, F);
  const auto fxy = derivative_partial(fx, d - 1, 1, F);
  const auto fyy = derivative_partial(fy, d - 1, 1, F);
  for (const auto& nd : nodes) {
    const uint64_t hxx = ternary_form_value(fxx, d - 2, nd.first, nd.second, F);
    const uint64_t hxy = ternary_form_value(fxy, d - 2, nd.first, nd.second, F);
    const uint64_t hyy = ternary_form_value(fyy, d - 2, nd.first, nd.second, F);
    if (F.sub(F.mul(hxx, hyy), F.mul(hxy, hxy)) == 0)
      throw redraw_needed("a double point fails the ordinary-node test");
  }

  const uint32_t need = 4 * d * (d - 3) + 2 * g + 16;
  std::vector<std::pair<uint64_t, uint64_t>> samples;
  Rng rootrng(seed ^ 0xabcdef987654321ull);
  const uint64_t line_cap = 64ull + 16ull * need;
  uint64_t scanned = 0;
  for (uint64_t x = 1; samples.size() < need; ++x) {
    if (++scanned > line_cap || x >= F.p)
      throw redraw_needed("ran out of lines while collecting smooth points");
    Poly u(d + 1, 0);
    for (size_t k = 0; k < basis.size(); ++k) {
      if (!form[k]) continue;
      u[basis[k][1]] = F.add(u[basis[k][1]], F.mul(form[k], powu(F, x, basis[k][0])));
    }
    trim(u);
    if (u.empty()) continue;  // the whole vertical line lies on the curve
    for (uint64_t y : cz_roots(std::move(u), F, rootrng)) {
      if (samples.size() >= need) break;
      if (nodeset.count({x, y})) continue;
      if (ternary_form_value(fx, d - 1, x, y, F) == 0 &&
          ternary_form_value(fy, d - 1, x, y, F) == 0)
        continue;  // not a smooth point
      samples.push_back({x, y});
    }
  }

  NodalPlaneCurve C;
  C.degree = d;
  C.genus = g;
  C.field = F;
  C.form = std::move(form);
  C.node_points = std::move(nodes);
  C.sample_points = std::move(samples);
  return C;
}

LineBundleData adjoint_canonical_sections(const NodalPlaneCurve& C) {
  const PrimeField& F = C.field;
  const uint32_t d = C.degree;
  const auto basis = monomial_basis(3, d - 3);
  FpMatrix cond(static_cast<uint32_t>(C.node_points.size()),
                static_cast<uint32_t>(basis.size()));
  for (uint32_t i = 0; i < C.node_points.size(); ++i) {
    const uint64_t x = C.node_points[i].first, y = C.node_points[i].second;
    for (uint32_t k = 0; k < basis.size(); ++k)
      cond.add(i, k, F.mul(powu(F, x, basis[k][0]), powu(F, y, basis[k][1])));
  }
  cond.finalize(F);
  const auto polys = kernel_basis(cond, F);
  if (polys.size() != C.genus)
    throw redraw_needed("adjoint system has the wrong dimension");

  LineBundleData L;
  L.kind = BundleKind::canonical;
  L.genus = C.genus;
  L.degree = 2 * static_cast<int64_t>(C.genus) - 2;
  L.field = F;
  L.sections.reserve(polys.size());
  for (const auto& c : polys) {
    std::vector<uint64_t> vals(C.sample_points.size());
    for (size_t t = 0; t < C.sample_points.size(); ++t) {
      const uint64_t x = C.sample_points[t].first, y = C.sample_points[t].second;
      uint64_t acc = 0;
      for (uint32_t k = 0; k < basis.size(); ++k) {
        if (!c[k]) continue;
        acc = F.add(acc, F.mul(c[k], F.mul(powu(F, x, basis[k][0]), powu(F, y, basis[k][1]))));
      }
      vals[t] = acc;
    }
    L.sections.push_back(std::move(vals));
  }
  return L;
}

std::vector<uint64_t> EmbeddedModel::coordinates(uint32_t q,
                                                 const std::vector<uint64_t>& values) const {
  const auto& piv = pivots.at(q);
  std::vector<uint64_t> c(piv.size());
  for (size_t k = 0; k < piv.size(); ++k) c[k] = values[piv[k]];
  return c;
}

EmbeddedModel coordinate_ring(const LineBundleData& L, uint32_t q_max) {
  const PrimeField& F = L.field;
  const uint32_t nv = static_cast<uint32_t>(L.sections.size());
  if (nv == 0) throw std::invalid_argument("bundle has no sections");
  const size_t N = L.sections[0].size();
  for (const auto& s : L.sections)
    if (s.size() != N) throw std::invalid_argument("ragged section rows");
  if (static_cast<int64_t>(N) <= static_cast<int64_t>(q_max) * L.degree)
    throw std::invalid_argument("too few sample points for evaluation injectivity");

  EmbeddedModel M;
  M.basis.resize(q_max + 1);
  M.pivots.resize(q_max + 1);
  M.basis[0] = {std::vector<uint64_t>(N, 1)};
  M.pivots[0] = {0};

  GradedModule& G = M.module;
  G.ring = RingSpec{nv, F};
  G.min_degree = 0;
  G.max_degree = static_cast<int>(q_max);
  G.piece_dims.assign(q_max + 1, 0);
  G.piece_dims[0] = 1;
  G.mult_.assign(nv, std::vector<FpMatrix>(q_max));

  for (uint32_t q = 0; q < q_max; ++q) {
    std::vector<std::vector<uint64_t>> rows;
    rows.reserve(static_cast<size_t>(nv) * M.basis[q].size());
    for (uint32_t i = 0; i < nv; ++i)
      for (const auto& b : M.basis[q]) {
        std::vector<uint64_t> r(N);
        for (size_t t = 0; t < N; ++t) r[t] = F.mul(L.sections[i][t] % F.p, b[t]);
        rows.push_back(std::move(r));
      }
    Rref R = rref_rows(std::move(rows), static_cast<uint32_t>(N), F);
    M.basis[q + 1] = std::move(R.rows);
    M.pivots[q + 1] = std::move(R.pivot_cols);
    G.piece_dims[q + 1] = static_cast<uint32_t>(M.basis[q + 1].size());

    for (uint32_t i = 0; i < nv; ++i) {
      FpMatrix m(G.piece_dims[q + 1], G.piece_dims[q]);
      for (uint32_t j = 0; j < M.basis[q].size(); ++j) {
        const auto& b = M.basis[q][j];
        for (uint32_t k = 0; k < M.pivots[q + 1].size(); ++k) {
          const uint32_t t = M.pivots[q + 1][k];
          const uint64_t v = F.mul(L.sections[i][t] % F.p, b[t]);
          if (v) m.add(k, j, v);
        }
      }
      m.finalize(F);
      G.mult_[i][q] = std::move(m);
    }
  }

  if (q_max >= 1) {
    // degree 1 is the echelonized span of the sections themselves, so each
    // generator's coordinate row is exact
    M.generator_coords.reserve(nv);
    for (uint32_t i = 0; i < nv; ++i) {
      std::vector<uint64_t> vals(N);
      for (size_t t = 0; t < N; ++t) vals[t] = L.sections[i][t] % F.p;
      M.generator_coords.push_back(M.coordinates(1, vals));
    }
  }

  M.audit.assign(q_max + 1, 0);
  bool all = true;
  for (uint32_t q = 0; q <= q_max; ++q) {
    int64_t expected;
    if (q == 0)
      expected = 1;
    else if (L.kind == BundleKind::canonical && q == 1)
      expected = L.genus;
    else
      expected = static_cast<int64_t>(q) * L.degree - L.genus + 1;
    M.audit[q] = (static_cast<int64_t>(G.piece_dims[q]) == expected);
    all = all && M.audit[q] != 0;
  }
  M.audit_pass = all;
  return M;
}

EmbeddedModel build_canonical_model(const PrimeField& F, uint32_t g, uint64_t seed,
                                    uint32_t q_max) {
  return retry_model(seed, [&](uint64_t s) {
    return coordinate_ring(canonical_sections(rational_nodal_curve(g, s, F)), q_max);
  });
}

EmbeddedModel build_paracanonical_model(const PrimeField& F, uint32_t g, uint32_t level,
                                        uint64_t seed, uint32_t q_max) {
  return retry_model(seed, [&](uint64_t s) {
    NodalRationalCurve C = rational_nodal_curve(g, s, F);
    Rng rng(s ^ 0x7e57ab1e5eed0001ull);
    TorsionBundle eta = random_torsion(F, g, level, rng);
    return coordinate_ring(paracanonical_sections(C, eta), q_max);
  });
}

EmbeddedModel build_twist_model(const PrimeField& F, uint32_t g, uint32_t d, uint64_t seed,
                                uint32_t q_max) {
  return retry_model(seed, [&](uint64_t s) {
    return coordinate_ring(twist_sections(rational_nodal_curve(g, s, F), d), q_max);
  });
}

EmbeddedModel build_plane_model(const PrimeField& F, uint32_t d, uint32_t delta, uint64_t seed,
                                uint32_t q_max) {
  return retry_model(seed, [&](uint64_t s) {
    return coordinate_ring(adjoint_canonical_sections(plane_curve_with_nodes(d, delta, s, F)),
                           q_max);
  });
}

SplitModel build_split_model(const PrimeField& F, uint32_t g, uint32_t d1, uint32_t d2,
                             uint64_t seed, uint32_t q_max) {
  if (d1 < g + 1 || d2 < g + 1)
    throw std::invalid_argument("each factor needs at least two sections");
  const uint32_t d = d1 + d2;
  std::string chain;
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    const uint64_t s = seed + attempt;
    try {
      NodalRationalCurve C = rational_nodal_curve(g, s, F);
      Rng rng(s ^ 0x5eedfacade000001ull);
      std::vector<uint64_t> u1(g), u2(g), u(g);
      for (uint32_t i = 0; i < g; ++i) {
        u1[i] = rng.nonzero(F);
        u2[i] = rng.nonzero(F);
        u[i] = F.mul(u1[i], u2[i]);
      }
      auto points = curve_sample_points(C, q_max * d + 2 * g + 16);
      auto sigma = glued_section_values(C, d1, u1, points);
      auto tau = glued_section_values(C, d2, u2, points);
      auto secs = glued_section_values(C, d, u, points);
      if (sigma.size() != d1 + 1 - g || tau.size() != d2 + 1 - g ||
          secs.size() != d + 1 - g)
        throw redraw_needed("factor sections came out degenerate");
      mix_basis(sigma, rng, F);
      mix_basis(tau, rng, F);

      LineBundleData L;
      L.kind = BundleKind::custom;
      L.genus = g;
      L.degree = d;
      L.field = F;
      L.sample_points = points;
      L.sections = std::move(secs);
      EmbeddedModel M = coordinate_ring(L, q_max);
      if (!M.audit_pass) throw redraw_needed("product model audit failed");

      // every sigma_i tau_j must reconstruct exactly from the degree-1 basis
      for (const auto& si : sigma)
        for (const auto& tj : tau) {
          std::vector<uint64_t> prod(points.size());
          for (size_t t = 0; t < points.size(); ++t) prod[t] = F.mul(si[t], tj[t]);
          const auto c = M.coordinates(1, prod);
          std::vector<uint64_t> back(points.size(), 0);
          for (size_t k = 0; k < c.size(); ++k) {
            if (!c[k]) continue;
            for (size_t t = 0; t < points.size(); ++t)
              back[t] = F.add(back[t], F.mul(c[k], M.basis[1][k][t]));
          }
          if (back != prod) throw redraw_needed("a factor product escapes the model");
        }
      return SplitModel{std::move(M), std::move(sigma), std::move(tau)};
    } catch (const redraw_needed& e) {
      chain += " [seed " + std::to_string(s) + ": " + e.what() + "]";
    }
  }
  throw std::runtime_error("no usable split model after 32 attempts:" + chain);
}

}  // namespace syz
