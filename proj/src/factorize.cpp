#include "fraisse/factorize.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>

#include "fraisse/canon.hpp"

namespace fraisse {

using Bits = boost::dynamic_bitset<>;

const char* tag_name(FactorTag t) {
  switch (t) {
    case FactorTag::splitting_edge: return "splitting_edge";
    case FactorTag::adding_edge: return "adding_edge";
    case FactorTag::elementary_light_confluent: return "elementary_light_confluent";
  }
  return "?";
}

Morphism Decomposition::recompose() const {
  std::vector<int> m(composite.domain().size());
  for (int v = 0; v < composite.domain().size(); ++v) {
    int x = v;
    for (const auto& e : factors) x = e(x);
    m[v] = residual(x);
  }
  return Morphism(composite.domain_ptr(), composite.codomain_ptr(), std::move(m));
}

bool Decomposition::verify() const {
  if (factors.size() != tags.size()) return false;
  const Graph* cur = &composite.domain();
  for (size_t i = 0; i < factors.size(); ++i) {
    const auto& e = factors[i];
    if (!same_graph(*cur, e.domain())) return false;
    if (!is_epimorphism(e.domain(), e.codomain(), e.map())) return false;
    bool ok = false;
    switch (tags[i]) {
      case FactorTag::splitting_edge: ok = is_splitting_edge(e); break;
      case FactorTag::adding_edge: ok = is_adding_edge(e); break;
      case FactorTag::elementary_light_confluent: ok = is_elementary_light_confluent(e).has_value(); break;
    }
    if (!ok) return false;
    cur = &e.codomain();
  }
  if (!same_graph(*cur, residual.domain()) || !is_isomorphism(residual)) return false;
  if (!same_graph(residual.codomain(), composite.codomain())) return false;
  if (residual.domain().has_root() && residual(residual.domain().root()) != composite.codomain().root()) return false;
  return recompose().map() == composite.map();
}

Morphism quotient_map(const GraphPtr& g, const std::vector<int>& rep) {
  GraphBuilder b;
  std::vector<int> id(g->size(), -1);
  for (int v = 0; v < g->size(); ++v)
    if (rep[v] == v) id[v] = b.add_vertex(g->name(v));
  for (auto [u, w] : g->edges()) b.add_edge(id[rep[u]], id[rep[w]]);
  if (g->has_root()) b.set_root(id[rep[g->root()]]);
  auto res = b.build();
  std::vector<int> m(g->size());
  for (int v = 0; v < g->size(); ++v) m[v] = res.index[id[rep[v]]];
  return Morphism(g, share(std::move(res.graph)), std::move(m));
}

MonotoneLight monotone_light(const Morphism& f) {
  const auto& g = f.domain_ptr();
  auto bad = violations(f.domain(), f.codomain(), f.map());
  if (!bad.empty()) throw DomainError("monotone_light: invalid input morphism");
  std::vector<int> rep(g->size());
  for (const auto& fib : f.fibers()) {
    if (fib.empty()) continue;
    std::vector<char> mask(g->size(), 0);
    for (int v : fib) mask[v] = 1;
    for (const auto& comp : components(*g, mask))
      for (int v : comp) rep[v] = comp.front();
  }
  Morphism m = quotient_map(g, rep);
  std::vector<int> l(m.codomain().size());
  for (int v = 0; v < g->size(); ++v) l[m(v)] = f(v);
  Morphism lm(m.codomain_ptr(), f.codomain_ptr(), std::move(l));
  return MonotoneLight{m.codomain_ptr(), m, lm};
}

bool is_branching(const Graph& t, int p) { return t.sord(p) >= 2; }

namespace {

std::vector<Bits> cone_images(const Graph& g, const std::vector<int>& h, int ncod) {
  std::vector<Bits> img(g.size(), Bits(ncod));
  const auto& pre = g.tree()->preorder;
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    int v = *it;
    img[v].set(h[v]);
    for (int c : g.children(v)) img[v] |= img[c];
  }
  return img;
}

std::vector<Bits> cone_sets(const Graph& t) {
  std::vector<Bits> s(t.size(), Bits(t.size()));
  const auto& pre = t.tree()->preorder;
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    int v = *it;
    s[v].set(v);
    for (int c : t.children(v)) s[v] |= s[c];
  }
  return s;
}

void require_rooted(const Morphism& f, const char* who) {
  if (!f.domain().is_rooted_tree() || !f.codomain().is_rooted_tree())
    throw DomainError(std::string(who) + ": rooted trees required");
}

std::vector<SpecialVertex> specials_with(const Morphism& f, int p, bool star, const std::vector<Bits>& img,
                                         const std::vector<Bits>& cod_cones) {
  const Graph& g = f.domain();
  const Graph& t = f.codomain();
  std::vector<SpecialVertex> out;
  const auto& ds = t.children(p);
  for (int q = 0; q < g.size(); ++q) {
    if (f(q) != p) continue;
    SpecialVertex sv;
    sv.q = q;
    std::vector<char> covered(ds.size(), 0);
    bool ok = true;
    for (int c : g.children(q)) {
      int hit = -1, count = 0;
      for (size_t i = 0; i < ds.size(); ++i)
        if (cod_cones[ds[i]].is_subset_of(img[c])) {
          ++count;
          hit = static_cast<int>(i);
        }
      if (count == 1) {
        covered[hit] = 1;
        sv.alpha.push_back(ds[hit]);
      } else if (star && count == 0 && img[c].count() == 1 && img[c].test(p)) {
        sv.alpha.push_back(-1);
      } else {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (std::find(covered.begin(), covered.end(), 0) != covered.end()) continue;
    out.push_back(std::move(sv));
  }
  return out;
}

}  // namespace

std::vector<SpecialVertex> special_vertices(const Morphism& f, int p, bool star) {
  require_rooted(f, "special_vertices");
  if (p < 0 || p >= f.codomain().size() || !is_branching(f.codomain(), p))
    throw DomainError("special_vertices: p is not a ramification vertex");
  if (!f.report().confluent) throw DomainError("special_vertices: f is not confluent");
  auto img = cone_images(f.domain(), f.map(), f.codomain().size());
  auto cones = cone_sets(f.codomain());
  return specials_with(f, p, star, img, cones);
}

SpecialCheck check_special(const Morphism& f, bool star) {
  require_rooted(f, "is_special");
  const Graph& g = f.domain();
  const Graph& t = f.codomain();
  if (!f.report().confluent) return {false, "not confluent"};
  if (!star && !f.report().end_vertex_preserving) return {false, "not end-vertex preserving"};
  auto img = cone_images(g, f.map(), t.size());
  auto cones = cone_sets(t);
  for (int x = 0; x < t.size(); ++x) {
    if (!is_branching(t, x)) continue;
    std::vector<char> special(g.size(), 0);
    for (const auto& sv : specials_with(f, x, star, img, cones)) special[sv.q] = 1;
    for (int b = 0; b < g.size(); ++b) {
      int fb = f(b);
      if (fb == x || !t.leq(x, fb)) continue;
      bool found = false;
      for (int y = g.parent(b); y >= 0; y = g.parent(y))
        if (special[y]) {
          found = true;
          break;
        }
      if (!found)
        return {false, "no special vertex for " + t.name(x) + " below " + g.name(b)};
    }
  }
  return {true, ""};
}

bool is_special(const Morphism& f) { return check_special(f, false).ok; }
bool is_special_star(const Morphism& f) { return check_special(f, true).ok; }

bool is_special_rooted(const Morphism& f, bool star) {
  if (!check_special(f, star).ok) return false;
  int r = f.codomain().root();
  if (!is_branching(f.codomain(), r)) return true;
  for (const auto& sv : special_vertices(f, r, star))
    if (sv.q == f.domain().root()) return true;
  return false;
}

namespace {

struct Run {
  GraphPtr H;
  std::vector<int> h;
  std::vector<Morphism> factors;
  std::vector<FactorTag> tags;
  std::string failure;
};

void push(Run& r, const Morphism& e, FactorTag tag) {
  std::vector<int> nh(e.codomain().size());
  for (int v = 0; v < e.domain().size(); ++v) nh[e(v)] = r.h[v];
  r.factors.push_back(e);
  r.tags.push_back(tag);
  r.H = e.codomain_ptr();
  r.h = std::move(nh);
}

// contract a non-root vertex with one child into a neighbour with equal image
bool try_case1(Run& r) {
  const Graph& H = *r.H;
  for (int a = 0; a < H.size(); ++a) {
    if (a == H.root() || H.sord(a) != 1) continue;
    int p = H.parent(a), c = H.children(a)[0];
    int target = r.h[a] == r.h[p] ? p : (r.h[a] == r.h[c] ? c : -1);
    if (target < 0) continue;
    std::vector<int> rep(H.size());
    for (int v = 0; v < H.size(); ++v) rep[v] = v;
    rep[a] = target;
    push(r, quotient_map(r.H, rep), FactorTag::splitting_edge);
    return true;
  }
  return false;
}

// merge two cones above a maximal vertex of S; returns 0 none, 1 done, -1 bad
int try_case2(Run& r, int ncod) {
  const Graph& H = *r.H;
  int n = H.size();
  auto img = cone_images(H, r.h, ncod);
  std::vector<char> in_s(n, 0), below(n, 0);
  for (int x = 0; x < n; ++x) {
    const auto& k = H.children(x);
    for (size_t i = 0; i < k.size() && !in_s[x]; ++i)
      for (size_t j = i + 1; j < k.size(); ++j)
        if (img[k[i]].intersects(img[k[j]])) {
          in_s[x] = 1;
          break;
        }
  }
  const auto& pre = H.tree()->preorder;
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    int v = *it;
    for (int c : H.children(v))
      if (in_s[c] || below[c]) below[v] = 1;
  }
  std::vector<int> cand;
  for (int x = 0; x < n; ++x)
    if (in_s[x] && !below[x]) cand.push_back(x);
  if (cand.empty()) return 0;
  auto codes = cone_codes(H, &r.h);
  int v = *std::min_element(cand.begin(), cand.end(), [&](int a, int b) {
    return codes[a] != codes[b] ? codes[a] < codes[b] : a < b;
  });
  const auto& k = H.children(v);
  int c1 = -1, c2 = -1;
  for (size_t i = 0; i < k.size() && c1 < 0; ++i)
    for (size_t j = i + 1; j < k.size(); ++j)
      if (img[k[i]].intersects(img[k[j]])) {
        c1 = k[i];
        c2 = k[j];
        break;
      }
  std::vector<int> rep(n);
  for (int x = 0; x < n; ++x) rep[x] = x;
  std::vector<int> first(ncod, -1);
  auto s1 = subtree(H, c1), s2 = subtree(H, c2);
  std::vector<int> both = s1;
  both.insert(both.end(), s2.begin(), s2.end());
  std::sort(both.begin(), both.end());
  for (int x : both) {
    if (first[r.h[x]] < 0) first[r.h[x]] = x;
    rep[x] = first[r.h[x]];
  }
  Morphism e = quotient_map(r.H, rep);
  if (!e.codomain().is_rooted_tree() || !is_epimorphism(e.domain(), e.codomain(), e.map()) ||
      !is_elementary_light_confluent(e)) {
    r.failure = "merging cones at " + H.name(v) + " is not an elementary light confluent quotient";
    return -1;
  }
  push(r, e, FactorTag::elementary_light_confluent);
  return 1;
}

// runs Case 1 / Case 2 until the residual is a bijection
bool run_cases(Run& r, int ncod, bool allow_case1) {
  while (r.H->size() > ncod) {
    if (allow_case1 && try_case1(r)) continue;
    int c2 = try_case2(r, ncod);
    if (c2 == 1) continue;
    if (c2 == 0) r.failure = "no order-2 contraction and no mergeable cone pair";
    return false;
  }
  return true;
}

DecomposeOutcome finish(Run& r, const Morphism& f) {
  Decomposition d;
  d.residual = Morphism(r.H, f.codomain_ptr(), r.h);
  if (!is_isomorphism(d.residual)) return {std::nullopt, "residual is not an isomorphism"};
  d.factors = std::move(r.factors);
  d.tags = std::move(r.tags);
  d.composite = f;
  return {std::move(d), ""};
}

std::string explain(const Morphism& f, bool star, const std::string& stuck) {
  auto sc = check_special(f, star);
  if (!sc.ok) return (star ? "not special*: " : "not special: ") + sc.failure;
  return "stuck although every specialness clause holds: " + stuck;
}

}  // namespace

DecomposeOutcome decompose_simple_confluent(const Morphism& f) {
  require_rooted(f, "decompose_simple_confluent");
  if (!is_epimorphism(f.domain(), f.codomain(), f.map())) throw DomainError("decompose: invalid epimorphism");
  if (!f.report().confluent) throw DomainError("decompose_simple_confluent: f is not confluent");
  if (!f.report().end_vertex_preserving)
    throw DomainError("decompose_simple_confluent: f is not end-vertex preserving");
  Run r{f.domain_ptr(), f.map(), {}, {}, ""};
  if (!run_cases(r, f.codomain().size(), true)) return {std::nullopt, explain(f, false, r.failure)};
  return finish(r, f);
}

DecomposeOutcome decompose_light_confluent(const Morphism& f) {
  require_rooted(f, "decompose_light_confluent");
  if (!is_epimorphism(f.domain(), f.codomain(), f.map()) || !f.report().light || !f.report().confluent)
    throw DomainError("decompose_light_confluent: f is not light confluent");
  Run r{f.domain_ptr(), f.map(), {}, {}, ""};
  if (!run_cases(r, f.codomain().size(), false)) return {std::nullopt, r.failure};
  return finish(r, f);
}

DecomposeOutcome decompose_simple_star(const Morphism& f) {
  require_rooted(f, "decompose_simple_star");
  if (!is_epimorphism(f.domain(), f.codomain(), f.map())) throw DomainError("decompose: invalid epimorphism");
  if (!f.report().confluent) throw DomainError("decompose_simple_star: f is not confluent");
  int ncod = f.codomain().size();
  Run r{f.domain_ptr(), f.map(), {}, {}, ""};
  while (true) {
    const Graph& H = *r.H;
    auto img = cone_images(H, r.h, ncod);
    int a = -1, c = -1;
    for (int v : H.tree()->preorder) {
      for (int k : H.children(v))
        if (img[k].count() == 1 && img[k].test(r.h[v])) {
          a = v;
          c = k;
          break;
        }
      if (a >= 0) break;
    }
    if (a < 0) break;
    auto cone = subtree(H, c);
    if (cone.size() > 1) {
      std::vector<int> part = cone;
      part.push_back(a);
      std::sort(part.begin(), part.end());
      auto te = share(induced(H, part).with_root(-1));
      int ra = te->index(H.name(a));
      te = share(te->with_root(ra));
      auto p2 = share(Graph::from_names({"0", "1"}, {{"0", "1"}}, std::string("0")));
      std::vector<int> sm(te->size(), 1);
      sm[ra] = 0;
      Run sub{te, sm, {}, {}, ""};
      if (!run_cases(sub, 2, true)) return {std::nullopt, explain(f, true, "cone collapse failed: " + sub.failure)};
      for (size_t i = 0; i < sub.factors.size(); ++i) {
        const auto& e = sub.factors[i];
        const Graph& big = *r.H;
        std::vector<int> rep(big.size());
        for (int v = 0; v < big.size(); ++v) rep[v] = v;
        for (int x = 0; x < e.domain().size(); ++x)
          rep[big.index(e.domain().name(x))] = big.index(e.codomain().name(e(x)));
        push(r, quotient_map(r.H, rep), sub.tags[i]);
      }
    }
    const Graph& H2 = *r.H;
    int a2 = H2.index(H.name(a));
    int leaf = -1;
    for (int k : H2.children(a2))
      if (H2.children(k).empty() && r.h[k] == r.h[a2]) leaf = k;
    std::vector<int> rep(H2.size());
    for (int v = 0; v < H2.size(); ++v) rep[v] = v;
    rep[leaf] = a2;
    push(r, quotient_map(r.H, rep), FactorTag::adding_edge);
  }
  Morphism residue(r.H, f.codomain_ptr(), r.h);
  if (!residue.report().end_vertex_preserving)
    return {std::nullopt, explain(f, true, "residue is not end-vertex preserving")};
  if (!run_cases(r, ncod, true)) return {std::nullopt, explain(f, true, r.failure)};
  return finish(r, f);
}

std::optional<Decomposition> simple_monotone_chain(const Morphism& f, bool star) {
  require_rooted(f, "is_simple_monotone");
  if (!is_epimorphism(f.domain(), f.codomain(), f.map())) return std::nullopt;
  Run r{f.domain_ptr(), f.map(), {}, {}, ""};
  int ncod = f.codomain().size();
  while (r.H->size() > ncod) {
    if (try_case1(r)) continue;
    if (!star) return std::nullopt;
    const Graph& H = *r.H;
    int leaf = -1;
    for (int v = 0; v < H.size() && leaf < 0; ++v)
      if (v != H.root() && H.children(v).empty() && r.h[v] == r.h[H.parent(v)]) leaf = v;
    if (leaf < 0) return std::nullopt;
    std::vector<int> rep(H.size());
    for (int v = 0; v < H.size(); ++v) rep[v] = v;
    rep[leaf] = H.parent(leaf);
    push(r, quotient_map(r.H, rep), FactorTag::adding_edge);
  }
  auto out = finish(r, f);
  if (!out) return std::nullopt;
  return std::move(out.decomposition);
}

bool is_simple_monotone(const Morphism& f) { return simple_monotone_chain(f, false).has_value(); }
bool is_simple_star_monotone(const Morphism& f) { return simple_monotone_chain(f, true).has_value(); }

}  // namespace fraisse
