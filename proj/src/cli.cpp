#include "syz/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include "syz/conjectures.hpp"
#include "syz/curves.hpp"
#include "syz/linalg.hpp"

namespace syz {

namespace {

using nlohmann::ordered_json;

struct ModelFlags {
  std::string model = "rational-nodal";
  std::string bundle = "canonical";
  uint32_t genus = 0;
  int64_t degree = -1;  // twist degree, or plane-curve degree
  uint32_t nodes = 0;
  uint32_t level = 0;
  uint32_t d1 = 0, d2 = 0;
  uint64_t seed = 0;
  uint64_t prime = 0;  // 0 = auto
  int pmax = -1, qmax = -1;
  int threads = 0;
  std::string format = "table";
  std::string out_path;
};

struct PredReport {
  std::string verdict;
  int p = -1, q = -1;
  std::string detail;
};

struct ModelResult {
  GradedModule module;
  std::optional<SplitModel> split;
  std::string descriptor;
  uint32_t ring_vars = 0;
  uint32_t genus = 0;
  int64_t degree = 0;
  bool canonical_embedding = false;  // embedded by the dualizing sheaf
  bool nonspecial = false;           // diagonal identity applies
  bool audit_pass = true;
  std::vector<char> audit;
  int pmax = 0, qmax = 0;
  uint64_t prime = 0, seed = 0;
};

void resolve_window(const ModelFlags& f, int def_pmax, int def_qmax, ModelResult& m) {
  m.pmax = f.pmax >= 0 ? f.pmax : def_pmax;
  m.qmax = f.qmax >= 0 ? f.qmax : def_qmax;
  if (m.pmax < 0 || m.qmax < 0) throw std::invalid_argument("window must be nonnegative");
}

ModelResult build_model(const ModelFlags& f) {
  ModelResult m;
  m.seed = f.seed;
  const uint32_t ell = (f.model == "rational-nodal" && f.bundle == "paracanonical") ? f.level : 1;
  if (f.model == "rational-nodal" && f.bundle == "paracanonical" && ell < 2)
    throw std::invalid_argument("paracanonical models need --level >= 2");
  m.prime = f.prime ? f.prime : default_prime(ell);
  const PrimeField F = make_field(m.prime, ell);

  if (f.model == "twisted-cubic") {
    resolve_window(f, 3, 3, m);
    m.module = quotient_module(twisted_cubic_ideal(F), m.qmax + 1);
    m.descriptor = "twisted-cubic";
    m.ring_vars = 4;
    m.genus = 0;
    m.degree = 3;
    m.nonspecial = true;
    m.audit.assign(m.qmax + 2, 1);  // exact ideal arithmetic, no sampling
  } else if (f.model == "rational-nodal") {
    const uint32_t g = f.genus;
    if (f.bundle == "canonical") {
      resolve_window(f, static_cast<int>(g) - 2, 3, m);
      EmbeddedModel M = build_canonical_model(F, g, f.seed, m.qmax + 1);
      m.audit_pass = M.audit_pass;
      m.audit = M.audit;
      m.ring_vars = M.module.ring.num_vars;
      m.module = std::move(M.module);
      m.degree = 2 * static_cast<int64_t>(g) - 2;
      m.canonical_embedding = true;
      m.descriptor = "rational-nodal genus " + std::to_string(g) + " canonical";
    } else if (f.bundle == "paracanonical") {
      resolve_window(f, static_cast<int>(g) - 3, 2, m);
      EmbeddedModel M = build_paracanonical_model(F, g, ell, f.seed, m.qmax + 1);
      m.audit_pass = M.audit_pass;
      m.audit = M.audit;
      m.ring_vars = M.module.ring.num_vars;
      m.module = std::move(M.module);
      m.degree = 2 * static_cast<int64_t>(g) - 2;
      m.nonspecial = true;
      m.descriptor = "rational-nodal genus " + std::to_string(g) + " paracanonical level " +
                     std::to_string(ell);
    } else if (f.bundle == "twist") {
      if (f.degree < 0) throw std::invalid_argument("twist models need --degree");
      resolve_window(f, static_cast<int>(f.degree - g), 3, m);
      EmbeddedModel M =
          build_twist_model(F, g, static_cast<uint32_t>(f.degree), f.seed, m.qmax + 1);
      m.audit_pass = M.audit_pass;
      m.audit = M.audit;
      m.ring_vars = M.module.ring.num_vars;
      m.module = std::move(M.module);
      m.degree = f.degree;
      m.nonspecial = true;
      m.descriptor = "rational-nodal genus " + std::to_string(g) + " twist degree " +
                     std::to_string(f.degree);
    } else {
      throw std::invalid_argument("unknown bundle: " + f.bundle);
    }
  } else if (f.model == "plane") {
    if (f.bundle != "canonical" && f.bundle != "adjoint-canonical")
      throw std::invalid_argument("plane models carry the adjoint-canonical bundle");
    if (f.degree < 3) throw std::invalid_argument("plane models need --degree >= 3");
    const int64_t dd = f.degree;
    const int64_t g64 = (dd - 1) * (dd - 2) / 2 - static_cast<int64_t>(f.nodes);
    if (g64 < 0) throw std::invalid_argument("more nodes than the plane degree allows");
    const uint32_t g = static_cast<uint32_t>(g64);
    resolve_window(f, static_cast<int>(g) - 2, 3, m);
    EmbeddedModel M =
        build_plane_model(F, static_cast<uint32_t>(dd), f.nodes, f.seed, m.qmax + 1);
    m.audit_pass = M.audit_pass;
    m.audit = M.audit;
    m.ring_vars = M.module.ring.num_vars;
    m.module = std::move(M.module);
    m.genus = g;
    m.degree = 2 * g64 - 2;
    m.canonical_embedding = true;
    m.descriptor = "plane degree " + std::to_string(dd) + " nodes " + std::to_string(f.nodes) +
                   " adjoint-canonical";
    return m;
  } else if (f.model == "p1-split") {
    const uint32_t g = f.genus;
    const int64_t d = static_cast<int64_t>(f.d1) + f.d2;
    resolve_window(f, static_cast<int>(d - g), 3, m);
    SplitModel S = build_split_model(F, g, f.d1, f.d2, f.seed, m.qmax + 1);
    m.audit_pass = S.model.audit_pass;
    m.audit = S.model.audit;
    m.ring_vars = S.model.module.ring.num_vars;
    m.module = S.model.module;
    m.split = std::move(S);
    m.genus = g;
    m.degree = d;
    m.nonspecial = true;
    m.descriptor = "p1-split genus " + std::to_string(g) + " degrees (" + std::to_string(f.d1) +
                   "," + std::to_string(f.d2) + ")";
  } else {
    throw std::invalid_argument("unknown model: " + f.model);
  }
  m.genus = (f.model == "twisted-cubic") ? 0 : (m.genus ? m.genus : f.genus);
  return m;
}

void render_strands(const std::vector<StrandStats>& stats, std::ostream& out) {
  if (stats.empty()) return;
  out << "strands:\n";
  for (const auto& s : stats) {
    std::ostringstream line;
    line << "  d(" << s.p << "," << s.q << ") " << s.out_rows << "x" << s.out_cols << " rank "
         << s.rank_out << " in-rank " << s.rank_in << " dd=0 "
         << (s.complex_zero ? "yes" : "NO") << " " << std::fixed << std::setprecision(3)
         << s.seconds << "s";
    out << line.str() << "\n";
  }
}

ordered_json report_json(const ModelResult& m, const BettiDiagram& D,
                         const std::map<std::string, PredReport>& preds) {
  ordered_json j;
  j["prime"] = m.prime;
  j["seed"] = m.seed;
  j["ring_vars"] = m.ring_vars;
  j["window"] = ordered_json{{"p_max", D.p_max}, {"q_max", D.q_max}};
  ordered_json betti = ordered_json::array();
  for (const auto& [pq, b] : D.entries)
    betti.push_back(ordered_json::array({pq.first, pq.second, b}));
  j["betti"] = std::move(betti);
  ordered_json hilbert = ordered_json::array();
  for (uint32_t d : m.module.piece_dims) hilbert.push_back(d);
  j["hilbert"] = std::move(hilbert);
  ordered_json rr = ordered_json::array();
  for (char a : m.audit) rr.push_back(a != 0);
  j["audits"] = ordered_json{{"pass", m.audit_pass}, {"riemann_roch", std::move(rr)}};
  ordered_json pj = ordered_json::object();
  for (const auto& [name, r] : preds) {
    ordered_json e;
    e["verdict"] = r.verdict;
    if (r.p >= 0) e["p"] = r.p;
    if (r.q >= 0) e["q"] = r.q;
    if (!r.detail.empty()) e["detail"] = r.detail;
    pj[name] = std::move(e);
  }
  j["predicates"] = std::move(pj);
  return j;
}

void deliver_json(const ModelFlags& f, const ordered_json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (!f.out_path.empty()) {
    std::ofstream file(f.out_path);
    if (!file) throw std::invalid_argument("cannot open output file: " + f.out_path);
    file << text;
  }
  if (f.format == "json" || f.format == "both") out << text;
}

int verdict_exit(const std::map<std::string, PredReport>& preds) {
  bool undecidable = false;
  for (const auto& [name, r] : preds) {
    if (r.verdict == "FAIL") return 1;
    if (r.verdict == "UNDECIDABLE") undecidable = true;
  }
  return undecidable ? 3 : 0;
}

int finish_run(const ModelFlags& f, const ModelResult& m, const BettiDiagram& D,
               const std::vector<StrandStats>& stats,
               const std::map<std::string, PredReport>& preds,
               const std::vector<std::string>& args, std::ostream& out) {
  if (f.format == "table" || f.format == "both") {
    std::string echo = "# syz";
    for (const auto& a : args) echo += " " + a;
    out << echo << "\n";
    out << "model: " << m.descriptor << "  (p=" << m.prime << ", seed=" << m.seed << ")\n";
    out << "audit: " << (m.audit_pass ? "pass" : "FAIL") << "\n";
    out << render_betti_table(D);
    render_strands(stats, out);
    for (const auto& [name, r] : preds) {
      out << name << ": " << r.verdict;
      if (!r.detail.empty()) out << "  [" << r.detail << "]";
      out << "\n";
    }
  }
  deliver_json(f, report_json(m, D, preds), out);
  return verdict_exit(preds);
}

PredReport from_result(const PredicateResult& r) {
  PredReport out;
  out.verdict = verdict_name(r.verdict);
  out.p = r.p;
  out.q = r.q;
  out.detail = r.detail;
  return out;
}

// Computed diagram against the family's closed-form prediction; truncated
// windows degrade equality to "undecidable" unless a mismatch is visible.
PredReport compare_with_expected(const BettiDiagram& D, uint32_t genus, bool paracanonical) {
  const Family fam = paracanonical
                         ? (genus % 2 ? Family::paracanonical_odd : Family::paracanonical_even)
                         : (genus % 2 ? Family::canonical_odd : Family::canonical_even);
  const ExpectedTable T = expected_table(fam, genus);
  PredReport r;
  bool truncated = false;
  std::optional<std::pair<int, int>> bad;  // first mismatch by (q, p): lowest strand wins
  for (const auto& [pq, want] : T.diagram.entries) {
    if (!D.in_window(pq.first, pq.second)) {
      truncated = true;
      continue;
    }
    if (D.at(pq.first, pq.second) != want) {
      const std::pair<int, int> qp{pq.second, pq.first};
      if (!bad || qp < std::pair<int, int>{bad->second, bad->first}) bad = pq;
    }
  }
  if (bad) {
    const auto [p, q] = *bad;
    r.verdict = "FAIL";
    r.p = p;
    r.q = q;
    r.detail = "b_{" + std::to_string(p) + "," + std::to_string(q) + "} = " +
               std::to_string(D.at(p, q)) + ", predicted " + std::to_string(T.diagram.at(p, q));
    return r;
  }
  if (truncated) {
    r.verdict = "UNDECIDABLE";
    r.detail = "window smaller than the predicted table";
    return r;
  }
  r.verdict = "PASS";
  r.detail = std::string("matches the ") + family_name(fam) + " prediction";
  return r;
}

int cmd_betti_or_check(const ModelFlags& f, const std::string& check_name, int cliff, int np_p,
                       const std::vector<std::string>& args, std::ostream& out) {
  ModelResult m = build_model(f);
  std::vector<StrandStats> stats;
  BettiOptions opt;
  opt.threads = f.threads;
  opt.stats = &stats;
  const BettiDiagram D = betti_diagram(m.module, m.pmax, m.qmax, opt);

  std::map<std::string, PredReport> preds;
  if (check_name == "green") {
    if (!m.canonical_embedding)
      throw std::invalid_argument("the row-2 vanishing predicate expects a canonical model");
    const int c = cliff >= 0 ? cliff : static_cast<int>((m.genus - 1) / 2);
    PredReport r = from_result(green_predicate(D, c));
    r.detail = "cliff=" + std::to_string(c) + (r.detail.empty() ? "" : "; " + r.detail);
    preds["green"] = std::move(r);
  } else if (check_name == "prym-green") {
    preds["prym-green"] = compare_with_expected(D, m.genus, true);
  } else if (check_name == "natural") {
    preds["natural"] = from_result(is_natural(D));
  } else if (check_name == "np") {
    PredReport r = from_result(np_property(D, m.audit_pass, np_p));
    r.detail = "p=" + std::to_string(np_p) + (r.detail.empty() ? "" : "; " + r.detail);
    preds["np"] = std::move(r);
  } else if (check_name == "duality") {
    if (!m.canonical_embedding)
      throw std::invalid_argument("duality applies to canonical models");
    PredReport r;
    r.verdict = duality_check(D, m.genus) ? "PASS" : "FAIL";
    r.detail = "b_{p,q} vs b_{g-2-p,3-q}, g=" + std::to_string(m.genus);
    preds["duality"] = std::move(r);
  } else if (check_name == "diagonal") {
    if (!m.nonspecial)
      throw std::invalid_argument("the diagonal identity applies to nonspecial embeddings");
    DiagonalIdentityResult r = diagonal_identity_check(D, m.degree, m.genus);
    PredReport pr;
    pr.verdict = r.ok ? "PASS" : "FAIL";
    if (!r.ok) {
      pr.p = r.first_bad_p;
      pr.detail = "identity fails at p=" + std::to_string(r.first_bad_p);
    } else {
      pr.detail = "d=" + std::to_string(m.degree) + ", g=" + std::to_string(m.genus);
    }
    preds["diagonal"] = std::move(pr);
  }
  return finish_run(f, m, D, stats, preds, args, out);
}

int cmd_expected(const ModelFlags& f, const std::string& family_arg, uint32_t genus,
                 const std::vector<std::string>& args, std::ostream& out) {
  const ExpectedTable T = expected_table(family_from_name(family_arg), genus);
  if (f.format == "table" || f.format == "both") {
    std::string echo = "# syz";
    for (const auto& a : args) echo += " " + a;
    out << echo << "\n";
    out << "expected " << family_name(T.family) << " genus " << genus << "\n";
    out << render_betti_table(T.diagram);
    for (const auto& [pq, b] : T.diagram.entries)
      if (b != 0)
        out << "b_{" << pq.first << "," << pq.second << "} = " << b << "\n";
  }
  ordered_json j;
  j["family"] = family_name(T.family);
  j["genus"] = genus;
  j["ring_vars"] = T.diagram.num_vars;
  j["window"] = ordered_json{{"p_max", T.diagram.p_max}, {"q_max", T.diagram.q_max}};
  ordered_json betti = ordered_json::array();
  for (const auto& [pq, b] : T.diagram.entries)
    betti.push_back(ordered_json::array({pq.first, pq.second, b}));
  j["betti"] = std::move(betti);
  deliver_json(f, j, out);
  return 0;
}

int cmd_witness(ModelFlags f, const std::vector<std::string>& args, std::ostream& out) {
  if (f.model != "p1-split")
    throw std::invalid_argument("witness construction needs --model p1-split");
  if (f.qmax < 0) f.qmax = 1;
  std::string chain;
  for (uint64_t attempt = 0; attempt < 32; ++attempt) {
    ModelFlags g = f;
    g.seed = f.seed + attempt;
    try {
      ModelResult m = build_model(g);
      const WitnessSyzygy w = gl_witness(m.split->model, m.split->sigma, m.split->tau);
      const int64_t b = koszul_dim(m.module, w.p, 1, f.threads);
      std::map<std::string, PredReport> preds;
      PredReport r;
      r.verdict = "PASS";
      r.p = w.p;
      r.q = 1;
      r.detail = std::string("cocycle yes, coboundary no; certifies b_{") +
                 std::to_string(w.p) + ",1} >= 1 (computed " + std::to_string(b) + ")";
      preds["witness"] = std::move(r);

      BettiDiagram D;
      D.num_vars = m.ring_vars;
      D.p_max = w.p;
      D.q_max = 1;
      D.entries[{w.p, 1}] = b;
      if (f.format == "table" || f.format == "both") {
        std::string echo = "# syz";
        for (const auto& a : args) echo += " " + a;
        out << echo << "\n";
        out << "model: " << m.descriptor << "  (p=" << m.prime << ", seed=" << g.seed << ")\n";
        out << "witness in homological degree " << w.p << "\n";
        out << "cocycle: yes\ncoboundary: no\n";
        out << "implied bound: b_{" << w.p << ",1} >= 1  (computed " << b << ")\n";
      }
      deliver_json(f, report_json(m, D, preds), out);
      return 0;
    } catch (const redraw_needed& e) {
      chain += " [seed " + std::to_string(g.seed) + ": " + e.what() + "]";
    }
  }
  throw std::runtime_error("no certified witness after 32 attempts:" + chain);
}

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--model", f.model, "twisted-cubic | rational-nodal | plane | p1-split");
  cmd->add_option("--bundle", f.bundle, "canonical | paracanonical | twist | adjoint-canonical");
  cmd->add_option("--genus", f.genus, "arithmetic genus of the nodal model");
  cmd->add_option("--degree", f.degree, "twist degree, or plane-curve degree");
  cmd->add_option("--nodes", f.nodes, "number of nodes of the plane model");
  cmd->add_option("--level", f.level, "torsion level of the paracanonical twist");
  cmd->add_option("--d1", f.d1, "degree of the first split factor");
  cmd->add_option("--d2", f.d2, "degree of the second split factor");
  cmd->add_option("--seed", f.seed, "model seed");
  cmd->add_option("--prime", f.prime, "field characteristic (default: auto)");
  cmd->add_option("--pmax", f.pmax, "last homological column (default: full window)");
  cmd->add_option("--qmax", f.qmax, "last diagram row (default: full window)");
  cmd->add_option("--threads", f.threads, "rank worker threads (0 = all)");
  cmd->add_option("--format", f.format, "table | json | both")
      ->check(CLI::IsMember({"table", "json", "both"}));
  cmd->add_option("--out", f.out_path, "also write the JSON report to this file");
}

}  // namespace

std::string render_betti_table(const BettiDiagram& D) {
  size_t w = 1;
  for (int p = 0; p <= D.p_max; ++p) w = std::max(w, std::to_string(p).size());
  for (const auto& [pq, b] : D.entries) w = std::max(w, std::to_string(b).size());
  const size_t lab = std::to_string(std::max(D.q_max, 0)).size();
  std::ostringstream os;
  os << std::string(lab + 1, ' ');
  for (int p = 0; p <= D.p_max; ++p) os << std::setw(static_cast<int>(w) + 2) << p;
  os << "\n";
  for (int q = 0; q <= D.q_max; ++q) {
    os << std::setw(static_cast<int>(lab)) << q << ":";
    for (int p = 0; p <= D.p_max; ++p) {
      os << std::setw(static_cast<int>(w) + 2);
      if (D.in_window(p, q) && D.entries.count({p, q}) && D.at(p, q) != 0)
        os << D.at(p, q);
      else
        os << '.';
    }
    os << "\n";
  }
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ModelFlags mf;
  std::string family_arg;
  uint32_t expected_genus = 0;
  int cliff = -1, np_p = 1;

  CLI::App app{"exact Koszul cohomology of curve models over a prime field"};
  app.name("syz");
  app.require_subcommand(1);

  CLI::App* betti = app.add_subcommand("betti", "compute a graded Betti diagram");
  add_model_flags(betti, mf);

  CLI::App* check = app.add_subcommand("check", "evaluate a predicate on a computed diagram");
  check->require_subcommand(1);
  CLI::App* c_green = check->add_subcommand("green", "row-2 vanishing up to the Clifford index");
  c_green->add_option("--cliff", cliff, "Clifford index (default: floor((g-1)/2))");
  CLI::App* c_pg = check->add_subcommand("prym-green", "diagram equals the paracanonical prediction");
  CLI::App* c_nat = check->add_subcommand("natural", "no overlapping rows in any column");
  CLI::App* c_np = check->add_subcommand("np", "projective normality plus row vanishing through p");
  c_np->add_option("--p", np_p, "last column required to vanish in rows q >= 2");
  CLI::App* c_dual = check->add_subcommand("duality", "mirror symmetry of the canonical diagram");
  CLI::App* c_diag = check->add_subcommand("diagonal", "exact difference formula along diagonals");
  for (CLI::App* sub : {c_green, c_pg, c_nat, c_np, c_dual, c_diag}) add_model_flags(sub, mf);

  CLI::App* expected = app.add_subcommand("expected", "print a closed-form predicted table");
  expected->add_option("--family", family_arg,
                       "canonical-odd | canonical-even | paracanonical-odd | paracanonical-even")
      ->required();
  expected->add_option("--genus", expected_genus, "genus of the prediction")->required();
  expected->add_option("--format", mf.format, "table | json | both")
      ->check(CLI::IsMember({"table", "json", "both"}));
  expected->add_option("--out", mf.out_path, "also write the JSON report to this file");

  CLI::App* witness = app.add_subcommand("witness", "build and certify an explicit syzygy");
  add_model_flags(witness, mf);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("syz");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (betti->parsed()) return cmd_betti_or_check(mf, "", cliff, np_p, args, out);
    if (check->parsed()) {
      std::string name;
      if (c_green->parsed()) name = "green";
      else if (c_pg->parsed()) name = "prym-green";
      else if (c_nat->parsed()) name = "natural";
      else if (c_np->parsed()) name = "np";
      else if (c_dual->parsed()) name = "duality";
      else name = "diagonal";
      if (name == "prym-green" && mf.bundle == "canonical") mf.bundle = "paracanonical";
      if ((name == "np" || name == "diagonal") && mf.bundle == "canonical" && mf.degree >= 0 &&
          mf.model == "rational-nodal")
        mf.bundle = "twist";
      if (mf.model == "plane") mf.bundle = "adjoint-canonical";
      return cmd_betti_or_check(mf, name, cliff, np_p, args, out);
    }
    if (expected->parsed()) return cmd_expected(mf, family_arg, expected_genus, args, out);
    if (witness->parsed()) return cmd_witness(mf, args, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "model error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no command\n";
  return 2;
}

}  // namespace syz
