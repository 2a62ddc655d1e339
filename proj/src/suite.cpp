#include "fraisse/suite.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

#include "fraisse/amalgamate.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/examples.hpp"
#include "fraisse/factorize.hpp"
#include "fraisse/mn.hpp"
#include "fraisse/oracle.hpp"
#include "fraisse/sequences.hpp"

namespace fraisse {

namespace {

struct Tally {
  long long cases = 0, bad = 0;
  std::string first;
  void fail(const std::string& what) {
    if (bad++ == 0) first = what;
  }
};

std::string describe(const Morphism& f) {
  std::ostringstream os;
  const Graph& S = f.domain();
  os << "{";
  for (int v = 0; v < S.size(); ++v) os << (v ? " " : "") << S.name(v) << ">" << f.codomain().name(f(v));
  os << "}";
  return os.str();
}

// every epimorphism between listed shapes, codomain no larger than domain
template <class Fn>
void each_epi(const std::vector<GraphPtr>& doms, const std::vector<GraphPtr>& cods, const EnumerationSpec& spec, Fn fn) {
  for (const auto& s : doms)
    for (const auto& t : cods)
      if (t->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, t, spec)) fn(f);
}

// epimorphisms grouped by codomain shape
std::vector<std::vector<Morphism>> by_codomain(const std::vector<GraphPtr>& shapes, const EnumerationSpec& spec) {
  std::vector<std::vector<Morphism>> out(shapes.size());
  for (size_t j = 0; j < shapes.size(); ++j)
    for (const auto& s : shapes)
      if (shapes[j]->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, shapes[j], spec)) out[j].push_back(f);
  return out;
}

std::string counts(const Tally& t, const std::string& unit = "cases") {
  std::string s = std::to_string(t.cases) + " " + unit + ", " + std::to_string(t.bad) + " violations";
  if (t.bad) s += "; first: " + t.first;
  return s;
}

// ---- 1 ----
CriterionResult c1() {
  CriterionResult r{1, "edge characterization of confluence", false, {}, 0};
  Tally t;
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(5);
  each_epi(graphs, graphs, any, [&](const Morphism& f) {
    ++t.cases;
    if (is_confluent(f) != is_confluent_semantic(f)) t.fail(describe(f));
  });
  long long graph_cases = t.cases;
  auto trees = enumerate_rooted_trees(6);
  each_epi(trees, trees, EnumerationSpec{}, [&](const Morphism& f) {
    ++t.cases;
    if (is_confluent(f) != is_confluent_semantic(f)) t.fail(describe(f));
  });
  r.pass = t.bad == 0;
  r.detail = std::to_string(graph_cases) + " graph maps + " + std::to_string(t.cases - graph_cases) +
             " rooted-tree maps, " + std::to_string(t.bad) + " disagreements" + (t.bad ? "; first: " + t.first : "");
  return r;
}

// ---- 2 ----
CriterionResult c2() {
  CriterionResult r{2, "special iff simple-confluent", false, {}, 0};
  long long maps = 0, spec_vs_dec = 0, dec_vs_brute = 0, bad_recompose = 0, rooted_vs_dec = 0;
  std::string first;
  EnumerationSpec spec;
  spec.confluent = true;
  spec.end_vertex_preserving = true;
  each_epi(enumerate_rooted_trees(7), enumerate_rooted_trees(5), spec, [&](const Morphism& f) {
    ++maps;
    bool s = is_special(f);
    auto d = decompose_simple_confluent(f);
    auto b = brute_simple_confluent(f);
    if (d && !d.decomposition->verify()) ++bad_recompose;
    if (b && !b->verify()) ++bad_recompose;
    if (s != static_cast<bool>(d)) {
      if (spec_vs_dec++ == 0) first = describe(f);
    }
    if (static_cast<bool>(d) != b.has_value()) ++dec_vs_brute;
    if (is_special_rooted(f) != static_cast<bool>(d)) ++rooted_vs_dec;
  });
  r.pass = spec_vs_dec == 0 && dec_vs_brute == 0 && bad_recompose == 0;
  r.detail = std::to_string(maps) + " maps; is_special vs decompose: " + std::to_string(spec_vs_dec) +
             " disagreements; decompose vs brute force: " + std::to_string(dec_vs_brute) +
             "; inexact recompositions: " + std::to_string(bad_recompose) +
             "; rooted-special diagnostic vs decompose: " + std::to_string(rooted_vs_dec);
  if (spec_vs_dec) r.detail += "; first: " + first;
  return r;
}

// ---- 3 ----
CriterionResult c3() {
  CriterionResult r{3, "standard product propagates light, monotone, confluent", false, {}, 0};
  Tally t;
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(5);
  auto groups = by_codomain(graphs, any);
  for (const auto& maps : groups)
    for (const auto& f : maps)
      for (const auto& g : maps) {
        ++t.cases;
        AmalgamResult p = standard(f, g);
        const auto& rf = f.report();
        const auto& r0 = p.g0.report();
        if (!commutes(f, g, p)) t.fail("not commuting " + describe(f) + " " + describe(g));
        if (rf.light && !r0.light) t.fail("light lost " + describe(f) + " " + describe(g));
        if (rf.monotone && !r0.monotone) t.fail("monotone lost " + describe(f) + " " + describe(g));
        if (rf.confluent && !r0.confluent) t.fail("confluent lost " + describe(f) + " " + describe(g));
      }
  r.pass = t.bad == 0;
  r.detail = counts(t, "pairs");
  return r;
}

// ---- 4 ----
CriterionResult c4() {
  CriterionResult r{4, "rooted amalgamation of light confluent with confluent", false, {}, 0};
  Tally t;
  auto trees = enumerate_rooted_trees(6);
  EnumerationSpec conf;
  conf.confluent = true;
  auto groups = by_codomain(trees, conf);
  for (const auto& maps : groups)
    for (const auto& f : maps) {
      if (!f.report().light) continue;
      for (const auto& g : maps) {
        ++t.cases;
        std::string tag = describe(f) + " " + describe(g);
        AmalgamResult p;
        try {
          p = rooted_light(f, g);
        } catch (const DomainError& e) {
          t.fail(std::string("no tree: ") + e.what() + " " + tag);
          continue;
        }
        const Graph& D = *p.D;
        if (!D.is_rooted_tree()) {
          t.fail("not a rooted tree " + tag);
          continue;
        }
        if (!commutes(f, g, p)) t.fail("not commuting " + tag);
        if (!is_epimorphism(D, p.f0.codomain(), p.f0.map()) || !is_epimorphism(D, p.g0.codomain(), p.g0.map()))
          t.fail("leg not an epimorphism " + tag);
        if (!p.f0.report().confluent) t.fail("f0 not confluent " + tag);
        if (!p.g0.report().light || !p.g0.report().confluent) t.fail("g0 not light confluent " + tag);
        if (g.report().light && !p.f0.report().light) t.fail("f0 not light " + tag);
        if (f.report().end_vertex_preserving && g.report().end_vertex_preserving &&
            (!p.f0.report().end_vertex_preserving || !p.g0.report().end_vertex_preserving))
          t.fail("end vertices not preserved " + tag);
        const Graph& B = p.f0.codomain();
        const Graph& C = p.g0.codomain();
        for (int x = 0; x < D.size(); ++x)
          for (int y = 0; y < D.size(); ++y)
            if (D.leq(x, y) != (B.leq(p.f0(x), p.f0(y)) && C.leq(p.g0(x), p.g0(y)))) {
              t.fail("order mismatch " + tag);
              x = D.size();
              break;
            }
      }
    }
  r.pass = t.bad == 0;
  r.detail = counts(t, "pairs");
  return r;
}

// ---- 5 ----
int max_order(const Graph& g) {
  int m = 0;
  for (int v = 0; v < g.size(); ++v) m = std::max(m, g.ord(v));
  return m;
}

CriterionResult c5() {
  CriterionResult r{5, "monotone amalgamation of trees of order at most 3", false, {}, 0};
  Tally t;
  std::vector<GraphPtr> trees;
  for (auto& x : enumerate_trees(6))
    if (max_order(*x) <= 3) trees.push_back(x);
  EnumerationSpec mono;
  mono.rooted = false;
  mono.monotone = true;
  for (const auto& a : trees) {
    if (a->size() > 4) continue;
    std::vector<Morphism> maps;
    for (const auto& b : trees)
      if (b->size() >= a->size())
        for (auto& f : enumerate_epimorphisms(b, a, mono)) maps.push_back(f);
    for (const auto& f : maps)
      for (const auto& g : maps) {
        ++t.cases;
        std::string tag = describe(f) + " " + describe(g);
        AmalgamResult p;
        try {
          p = m3(f, g);
        } catch (const DomainError& e) {
          t.fail(std::string(e.what()) + " " + tag);
          continue;
        }
        if (!is_tree(*p.D)) t.fail("not a tree " + tag);
        if (!commutes(f, g, p)) t.fail("not commuting " + tag);
        if (!is_epimorphism(*p.D, p.f0.codomain(), p.f0.map()) || !is_epimorphism(*p.D, p.g0.codomain(), p.g0.map()))
          t.fail("leg not an epimorphism " + tag);
        else if (!p.f0.report().monotone || !p.g0.report().monotone)
          t.fail("leg not monotone " + tag);
        if (max_order(*p.D) > 3) t.fail("order above 3 " + tag);
      }
  }
  r.pass = t.bad == 0;
  r.detail = counts(t, "pairs");
  return r;
}

// ---- 6 ----
CriterionResult c6() {
  CriterionResult r{6, "exact small values", false, {}, 0};
  std::vector<std::string> bad;
  {
    auto ex = example_no_confluent();
    AmalgamResult p = standard(ex.f, ex.g);
    auto cycle = share(Graph::from_names({"(a,r)", "(b,r)", "(c,p)", "(c,q)"},
                                         {{"(c,p)", "(a,r)"}, {"(a,r)", "(c,q)"}, {"(c,q)", "(b,r)"}, {"(b,r)", "(c,p)"}}));
    if (!(*p.D == *cycle)) bad.push_back("no-confluent product is not the 4-cycle");
  }
  {
    auto ex = example_rooted_standard_not_tree();
    const Graph& D = *standard(ex.f, ex.g).D;
    if (D.size() != 4 || D.edge_count() != 6) bad.push_back("rooted product is not K4");
  }
  auto A1 = fraisse_stage(1);
  if (A1->size() != 3 || A1->tree_height() != 1) bad.push_back("A_1 is not 3 vertices of height 1");
  auto A2 = fraisse_stage(2);
  auto reg = is_regular(*A2);
  if (!reg.regular || reg.height != 3 || reg.sord != 4) bad.push_back("A_2 is not regular of height 3, sord 4");
  if (A2->size() != 85) bad.push_back("A_2 has " + std::to_string(A2->size()) + " vertices");
  auto ic = verify_internchar(fraisse_map(1), 1, 2);
  std::vector<int> th{ic.th.t[0], ic.th.s[0], ic.th.t[1]};
  if (!ic.ok) bad.push_back("internchar fails: " + ic.failure);
  if (th != std::vector<int>{0, 1, 3}) bad.push_back("thresholds differ");
  r.pass = bad.empty();
  r.detail = "4-cycle, K4, |A_1| = 3, A_2 ht 3 sord 4 with 85 vertices, thresholds (" + std::to_string(th[0]) + "," +
             std::to_string(th[1]) + "," + std::to_string(th[2]) + ")";
  for (auto& b : bad) r.detail += "; " + b;
  return r;
}

// ---- 7 ----
CriterionResult c7() {
  CriterionResult r{7, "no amalgam up to 10 vertices for the three counterexamples", false, {}, 0};
  struct Case {
    const char* name;
    SpanPair ex;
    AmalgamSpec spec;
  };
  AmalgamSpec mono, conf, rconf;
  mono.monotone = true;
  conf.confluent = true;
  rconf.rooted = true;
  rconf.confluent = true;
  std::vector<Case> cases{{"no-4od", example_no_4od(), mono},
                          {"no-confluent", example_no_confluent(), conf},
                          {"not-order-pres", example_not_order_pres(), rconf}};
  r.pass = true;
  for (auto& c : cases) {
    SearchStats st;
    auto found = search_amalgam(c.ex.f, c.ex.g, c.spec, 10, &st);
    if (found) r.pass = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + c.name + ": " + (found ? "amalgam found" : "none") + " (" +
                std::to_string(st.shapes) + " shapes, " + std::to_string(st.candidates) + " candidates)";
  }
  return r;
}

// ---- 8 ----
std::vector<Morphism> extension_inputs() {
  std::vector<Morphism> out;
  auto A2 = fraisse_stage(2);
  out.push_back(Morphism::identity(A2));
  {
    // swap the first two cones above the root
    const auto& ch = A2->children(A2->root());
    auto iso = cone_iso(*A2, ch[0], ch[1]);
    std::vector<int> m(A2->size());
    for (int v = 0; v < A2->size(); ++v) m[v] = v;
    for (auto [x, y] : *iso) {
      m[x] = y;
      m[y] = x;
    }
    out.push_back(Morphism::make(A2, A2, m));
  }
  auto A1 = fraisse_stage(1);
  EnumerationSpec conf;
  conf.confluent = true;
  for (const auto& s : enumerate_rooted_trees(8, 3)) {
    for (auto& phi : enumerate_epimorphisms(s, A1, conf)) {
      if (!phi.report().end_vertex_preserving || !decompose_simple_confluent(phi)) continue;
      if (extension_degree(phi) > 2) continue;
      out.push_back(phi);
      if (out.size() == 20) return out;
    }
  }
  return out;
}

CriterionResult c8() {
  CriterionResult r{8, "extension over the sequence", false, {}, 0};
  Tally t;
  std::vector<int> degrees;
  for (const auto& phi : extension_inputs()) {
    ++t.cases;
    std::string tag = describe(phi);
    try {
      Extension ex = extend_over(phi);
      degrees.push_back(ex.n);
      Morphism h = compose(phi, ex.g);
      if (!equal_maps(h, fraisse_bond(ex.n, ex.m))) t.fail("phi o g differs from the bond " + tag);
      auto ic = verify_internchar(h, ex.m, ex.n);
      if (!ic.ok) t.fail("internchar: " + ic.failure + " " + tag);
      if (!is_epimorphism(ex.g.domain(), ex.g.codomain(), ex.g.map())) t.fail("g not an epimorphism " + tag);
      else if (!decompose_simple_confluent(ex.g)) t.fail("g not simple-confluent " + tag);
    } catch (const DomainError& e) {
      t.fail(std::string(e.what()) + " " + tag);
    }
  }
  r.pass = t.bad == 0 && t.cases == 20;
  std::string ds;
  for (int n : degrees) ds += std::to_string(n);
  r.detail = counts(t, "maps") + "; degrees " + ds;
  return r;
}

// ---- 9 ----
CriterionResult c9(unsigned seed) {
  CriterionResult r{9, "MN skeleton and MN-map coherence", false, {}, 0};
  std::vector<std::string> bad;
  auto L2 = mn_tree(parse_mn_sequence("0,2/3,2/3,1/3,1/3,0"));
  for (int k = 2; k <= 4; ++k) {
    auto sk = suppress_ordinary(heighted(grid_tree(2, k), grid_tree(2, k)->tree_height()));
    if (!heighted_iso(L2, sk)) bad.push_back("skeleton of A_2" + std::to_string(k) + " differs");
  }
  std::mt19937 rng(seed);
  long long triples = 0, incoherent = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MNSequence d;
    for (int i = 0; i < 5; ++i) {
      long long q = std::uniform_int_distribution<long long>(2, 6)(rng);
      long long p = std::uniform_int_distribution<long long>(0, q - 1)(rng);
      d.emplace_back(p, q);
    }
    std::vector<Morphism> m(6 * 6);
    for (int i = 0; i <= 5; ++i)
      for (int j = i; j <= 5; ++j)
        m[i * 6 + j] = mn_map(MNSequence(d.begin(), d.begin() + i), MNSequence(d.begin(), d.begin() + j));
    for (int i = 0; i <= 5; ++i)
      for (int j = i; j <= 5; ++j)
        for (int k = j; k <= 5; ++k) {
          ++triples;
          if (!equal_maps(compose(m[i * 6 + j], m[j * 6 + k]), m[i * 6 + k])) ++incoherent;
        }
  }
  if (incoherent) bad.push_back(std::to_string(incoherent) + " incoherent triples");
  r.pass = bad.empty();
  r.detail = "skeleton match for k = 2..4 (" + std::to_string(leaf_count(*L2.tree)) + " leaves); " +
             std::to_string(triples) + " prefix triples over 100 sequences";
  for (auto& b : bad) r.detail += "; " + b;
  return r;
}

// ---- 10 ----
CriterionResult c10() {
  CriterionResult r{10, "right-factor laws", false, {}, 0};
  Tally conf, spec;
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(5);
  auto groups = by_codomain(graphs, any);
  // h = g o f with f: X -> Y, g: Y -> Z
  auto check = [&](const std::vector<std::vector<Morphism>>& gr, const std::vector<GraphPtr>& shapes, bool special) {
    for (size_t y = 0; y < shapes.size(); ++y) {
      if (gr[y].empty()) continue;
      for (size_t z = 0; z < shapes.size(); ++z)
        for (const auto& g : gr[z]) {
          if (g.domain_ptr() != shapes[y]) continue;
          for (const auto& f : gr[y]) {
            Morphism h = compose(g, f);
            if (special) {
              ++spec.cases;
              if (is_special(h) && !is_special(g)) spec.fail(describe(f) + " then " + describe(g));
            } else {
              ++conf.cases;
              if (h.report().confluent && !g.report().confluent) conf.fail(describe(f) + " then " + describe(g));
            }
          }
        }
    }
  };
  check(groups, graphs, false);
  auto trees = enumerate_rooted_trees(6, 2);
  EnumerationSpec tconf;
  tconf.confluent = true;
  check(by_codomain(trees, tconf), trees, true);
  r.pass = conf.bad == 0 && spec.bad == 0;
  r.detail = "confluent: " + counts(conf, "composites") + "; special: " + counts(spec, "composites");
  return r;
}

}  // namespace

int criterion_count() { return 10; }

CriterionResult run_criterion(int id, const SuiteOptions& opt) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    switch (id) {
      case 1: r = c1(); break;
      case 2: r = c2(); break;
      case 3: r = c3(); break;
      case 4: r = c4(); break;
      case 5: r = c5(); break;
      case 6: r = c6(); break;
      case 7: r = c7(); break;
      case 8: r = c8(); break;
      case 9: r = c9(opt.seed); break;
      case 10: r = c10(); break;
      default: throw UsageError("no criterion " + std::to_string(id));
    }
  } catch (const DomainError& e) {
    r.id = id;
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<CriterionResult> run_suite(const SuiteOptions& opt, const std::function<void(const CriterionResult&)>& on_result) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= criterion_count(); ++id) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
    out.push_back(run_criterion(id, opt));
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  return "criterion " + std::to_string(r.id) + ": " + (r.pass ? "PASS" : "FAIL") + "  " + r.title + "  (" + r.detail + ")";
}

}  // namespace fraisse
