#include "fraisse/amalgamate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

#include "fraisse/canon.hpp"

namespace fraisse {

namespace {

// vertex set of D as (b, c) pairs with explicit edges, turned into a graph
struct PairGraph {
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<int, int>> edges;
  int root = -1;

  int add(int b, int c) {
    pairs.emplace_back(b, c);
    return static_cast<int>(pairs.size()) - 1;
  }
  void link(int u, int v) { edges.emplace_back(u, v); }
};

enum class Naming { pairs, compact };

std::vector<std::string> pair_names(const Graph& B, const Graph& C, const std::vector<std::pair<int, int>>& ps,
                                    Naming naming) {
  std::vector<std::string> out(ps.size());
  std::map<int, int> nb, nc;
  for (auto [b, c] : ps) {
    ++nb[b];
    ++nc[c];
  }
  for (size_t i = 0; i < ps.size(); ++i) {
    auto [b, c] = ps[i];
    if (naming == Naming::compact && nb[b] == 1)
      out[i] = B.name(b);
    else if (naming == Naming::compact && nc[c] == 1)
      out[i] = C.name(c);
    else
      out[i] = pair_name(B.name(b), C.name(c));
  }
  // disambiguate leftovers deterministically
  std::set<std::string> used;
  std::map<std::string, int> count;
  for (auto& s : out) ++count[s];
  for (auto& s : out)
    if (count[s] == 1) used.insert(s);
  for (auto& s : out) {
    if (count[s] == 1) continue;
    std::string t = s;
    while (used.count(t)) t += '\'';
    used.insert(t);
    s = t;
  }
  return out;
}

AmalgamResult realize(const PairGraph& pg, const Morphism& f, const Morphism& g, Naming naming, bool validate) {
  const Graph& B = f.domain();
  const Graph& C = g.domain();
  auto names = pair_names(B, C, pg.pairs, naming);
  GraphBuilder bld;
  for (auto& s : names) bld.add_vertex(s);
  for (auto [u, v] : pg.edges) bld.add_edge(u, v);
  if (pg.root >= 0) bld.set_root(pg.root);
  auto res = bld.build();
  GraphPtr D = share(std::move(res.graph));
  std::vector<int> m0(D->size()), m1(D->size());
  for (size_t i = 0; i < pg.pairs.size(); ++i) {
    m0[res.index[i]] = pg.pairs[i].first;
    m1[res.index[i]] = pg.pairs[i].second;
  }
  if (validate)
    return {D, Morphism::make(D, f.domain_ptr(), std::move(m0)), Morphism::make(D, g.domain_ptr(), std::move(m1))};
  return {D, Morphism(D, f.domain_ptr(), std::move(m0)), Morphism(D, g.domain_ptr(), std::move(m1))};
}

void require_same_codomain(const Morphism& f, const Morphism& g, const char* who) {
  if (!same_graph(f.codomain(), g.codomain())) throw DomainError(std::string(who) + ": codomain mismatch");
}

void require_rooted_pair(const Morphism& f, const Morphism& g, const char* who) {
  for (const Morphism* m : {&f, &g})
    if (!m->domain().is_rooted_tree() || !m->codomain().is_rooted_tree())
      throw DomainError(std::string(who) + ": rooted trees required");
}

PairGraph product(const Morphism& f, const Morphism& g) {
  const Graph& B = f.domain();
  const Graph& C = g.domain();
  PairGraph pg;
  std::vector<int> id(static_cast<size_t>(B.size()) * C.size(), -1);
  for (int b = 0; b < B.size(); ++b)
    for (int c = 0; c < C.size(); ++c)
      if (f(b) == g(c)) id[static_cast<size_t>(b) * C.size() + c] = pg.add(b, c);
  auto at = [&](int b, int c) { return id[static_cast<size_t>(b) * C.size() + c]; };
  for (size_t i = 0; i < pg.pairs.size(); ++i) {
    auto [b, c] = pg.pairs[i];
    std::vector<int> nb{b}, nc{c};
    nb.insert(nb.end(), B.adj(b).begin(), B.adj(b).end());
    nc.insert(nc.end(), C.adj(c).begin(), C.adj(c).end());
    for (int b2 : nb)
      for (int c2 : nc) {
        int j = at(b2, c2);
        if (j > static_cast<int>(i)) pg.link(static_cast<int>(i), j);
      }
  }
  if (B.has_root() && C.has_root()) pg.root = at(B.root(), C.root());
  return pg;
}

Morphism inverse_iso(const Morphism& e) {
  std::vector<int> m(e.codomain().size());
  for (int v = 0; v < e.domain().size(); ++v) m[e(v)] = v;
  return Morphism(e.codomain_ptr(), e.domain_ptr(), std::move(m));
}

std::vector<int> tree_path(const Graph& t, int s, int d) {
  std::vector<int> par(t.size(), -2);
  std::queue<int> q;
  par[s] = -1;
  q.push(s);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == d) break;
    for (int w : t.adj(v))
      if (par[w] == -2) {
        par[w] = v;
        q.push(w);
      }
  }
  std::vector<int> p;
  for (int v = d; v != -1; v = par[v]) p.push_back(v);
  std::reverse(p.begin(), p.end());
  return p;
}

// vertices reachable from z without passing through w
std::vector<int> side_component(const Graph& t, int w, int z) {
  std::vector<char> seen(t.size(), 0);
  seen[w] = seen[z] = 1;
  std::vector<int> out{z}, stack{z};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : t.adj(v))
      if (!seen[u]) {
        seen[u] = 1;
        out.push_back(u);
        stack.push_back(u);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- elementary simple-monotone cells ----

enum class ElemKind { iso, split, add };
struct Elem {
  ElemKind kind = ElemKind::iso;
  int x = -1;     // the inserted vertex of the domain
  int a = -1;     // codomain image of x
  int b = -1;     // split only: other endpoint of the split edge
  std::vector<int> inv;  // codomain -> domain, avoiding x
};

Elem analyse(const Morphism& e, bool star) {
  const Graph& S = e.domain();
  const Graph& T = e.codomain();
  Elem el;
  if (S.size() == T.size()) {
    if (!is_isomorphism(e)) throw DomainError("simple_monotone_pair: factor is neither split, add nor iso");
    el.inv.assign(T.size(), -1);
    for (int v = 0; v < S.size(); ++v) el.inv[e(v)] = v;
    return el;
  }
  auto fibs = e.fibers();
  std::vector<int> fib;
  for (auto& f : fibs)
    if (f.size() == 2) {
      if (!fib.empty()) fib.clear(), fib.push_back(-1);
      else fib = f;
    }
  if (S.size() != T.size() + 1 || fib.size() != 2) throw DomainError("simple_monotone_pair: not an elementary factor");
  int u = fib[0], w = fib[1];
  auto child_of = [&](int c, int p) { return S.is_rooted_tree() && S.parent(c) == p; };
  // split: an order-2 fibre vertex with a neighbour outside the fibre; prefer the upper one
  std::vector<int> cand;
  for (int v : {w, u})
    if (S.ord(v) == 2) cand.push_back(v);
  std::stable_sort(cand.begin(), cand.end(), [&](int p, int q) {
    int other_p = p == u ? w : u, other_q = q == u ? w : u;
    return child_of(p, other_p) > child_of(q, other_q);
  });
  for (int v : cand) {
    if (S.has_root() && v == S.root()) continue;
    int other = v == u ? w : u;
    if (!S.adjacent(v, other)) continue;
    int nb = S.adj(v)[0] == other ? S.adj(v)[1] : S.adj(v)[0];
    el.kind = ElemKind::split;
    el.x = v;
    el.a = e(v);
    el.b = e(nb);
    break;
  }
  if (el.kind == ElemKind::iso) {
    for (int v : {w, u}) {
      int other = v == u ? w : u;
      if (S.ord(v) == 1 && S.adjacent(v, other) && !(S.has_root() && v == S.root())) {
        el.kind = ElemKind::add;
        el.x = v;
        el.a = e(v);
        break;
      }
    }
    if (el.kind == ElemKind::iso) throw DomainError("simple_monotone_pair: not an elementary factor");
    if (!star) throw DomainError("simple_monotone_pair: adding-edge factor needs the star variant");
  }
  el.inv.assign(T.size(), -1);
  for (int v = 0; v < S.size(); ++v)
    if (v != el.x) el.inv[e(v)] = v;
  return el;
}

AmalgamResult elementary_cell(const Morphism& e, const Morphism& h, bool star) {
  Elem E = analyse(e, star), H = analyse(h, star);
  if (E.kind == ElemKind::iso)
    return {h.domain_ptr(), compose(inverse_iso(e), h), Morphism::identity(h.domain_ptr())};
  if (H.kind == ElemKind::iso)
    return {e.domain_ptr(), Morphism::identity(e.domain_ptr()), compose(inverse_iso(h), e)};
  const Graph& A = e.codomain();
  PairGraph pg;
  std::vector<int> diag(A.size());
  for (int v = 0; v < A.size(); ++v) diag[v] = pg.add(E.inv[v], H.inv[v]);
  auto is_edge = [](const Elem& el, int u, int v) {
    return el.kind == ElemKind::split && ((el.a == u && el.b == v) || (el.a == v && el.b == u));
  };
  for (auto [u, v] : A.edges())
    if (!is_edge(E, u, v) && !is_edge(H, u, v)) pg.link(diag[u], diag[v]);
  int hy = h(H.x);
  if (E.kind == ElemKind::split && H.kind == ElemKind::split && is_edge(H, E.a, E.b)) {
    int a = E.a, b = E.b;
    int p1 = pg.add(E.x, H.inv[a]);
    int p2 = hy == a ? pg.add(E.x, H.x) : pg.add(E.inv[b], H.x);
    pg.link(diag[a], p1);
    pg.link(p1, p2);
    pg.link(p2, diag[b]);
  } else {
    if (E.kind == ElemKind::split) {
      int m = pg.add(E.x, H.inv[E.a]);
      pg.link(diag[E.a], m);
      pg.link(m, diag[E.b]);
    } else {
      pg.link(diag[E.a], pg.add(E.x, H.inv[E.a]));
    }
    if (H.kind == ElemKind::split) {
      int m = pg.add(E.inv[hy], H.x);
      pg.link(diag[H.a], m);
      pg.link(m, diag[H.b]);
    } else {
      pg.link(diag[H.a], pg.add(E.inv[hy], H.x));
    }
  }
  if (A.has_root()) pg.root = diag[A.root()];
  return realize(pg, e, h, Naming::compact, true);
}

// ---- grid filling ----

enum class LegKind { light, mono };
struct Leg {
  Morphism m;
  LegKind kind;
};

using CellFn = std::function<AmalgamResult(const Leg&, const Leg&)>;

// vert[0]: B1 -> A, vert[i]: B_{i+1} -> B_i; likewise horiz for C
AmalgamResult fill_grid(const std::vector<Leg>& vert, const std::vector<Leg>& horiz, const CellFn& cell) {
  size_t k = vert.size(), l = horiz.size();
  // v[i][j]: node(i,j) -> node(i-1,j);  h[i][j]: node(i,j) -> node(i,j-1)
  std::vector<std::vector<Leg>> v(k + 1, std::vector<Leg>(l + 1)), h(k + 1, std::vector<Leg>(l + 1));
  for (size_t i = 1; i <= k; ++i) v[i][0] = vert[i - 1];
  for (size_t j = 1; j <= l; ++j) h[0][j] = horiz[j - 1];
  for (size_t i = 1; i <= k; ++i)
    for (size_t j = 1; j <= l; ++j) {
      const Leg& f = v[i][j - 1];
      const Leg& g = h[i - 1][j];
      AmalgamResult r = cell(f, g);
      h[i][j] = Leg{r.f0, g.kind};
      v[i][j] = Leg{r.g0, f.kind};
    }
  // assemble the outer legs
  GraphPtr D;
  if (k == 0 && l == 0) throw DomainError("fill_grid: empty");
  D = k > 0 && l > 0 ? v[k][l].m.domain_ptr() : (k > 0 ? vert.back().m.domain_ptr() : horiz.back().m.domain_ptr());
  Morphism f0 = Morphism::identity(D), g0 = Morphism::identity(D);
  if (l > 0 && k > 0) {
    for (size_t j = l; j >= 1; --j) f0 = compose(h[k][j].m, f0);
    for (size_t i = k; i >= 1; --i) g0 = compose(v[i][l].m, g0);
  } else if (k == 0) {
    // D = C, f0 = g
    for (size_t j = l; j >= 1; --j) f0 = compose(horiz[j - 1].m, f0);
  } else {
    for (size_t i = k; i >= 1; --i) g0 = compose(vert[i - 1].m, g0);
  }
  return {D, f0, g0};
}

std::vector<Leg> monotone_legs(const Morphism& f, bool star) {
  auto chain = simple_monotone_chain(f, star);
  if (!chain) throw DomainError(star ? "input is not simple*-monotone" : "input is not simple-monotone");
  std::vector<Leg> out;
  auto& fs = chain->factors;
  if (fs.empty()) return {Leg{chain->residual, LegKind::mono}};
  for (size_t i = 0; i < fs.size(); ++i) {
    Morphism m = i + 1 == fs.size() ? compose(chain->residual, fs[i]) : fs[i];
    out.push_back(Leg{m, LegKind::mono});
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Leg> stage_legs(const Decomposition& d) {
  std::vector<Leg> out;  // domain side first while collecting
  for (size_t i = 0; i < d.factors.size(); ++i) {
    LegKind k = d.tags[i] == FactorTag::elementary_light_confluent ? LegKind::light : LegKind::mono;
    if (!out.empty() && out.back().kind == k)
      out.back().m = compose(d.factors[i], out.back().m);
    else
      out.push_back(Leg{d.factors[i], k});
  }
  if (out.empty())
    out.push_back(Leg{d.residual, LegKind::light});
  else
    out.back().m = compose(d.residual, out.back().m);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

bool commutes(const Morphism& f, const Morphism& g, const Morphism& f0, const Morphism& g0) {
  if (!same_graph(f.codomain(), g.codomain())) return false;
  if (!same_graph(f0.codomain(), f.domain()) || !same_graph(g0.codomain(), g.domain())) return false;
  if (!same_graph(f0.domain(), g0.domain())) return false;
  for (int v = 0; v < f0.domain().size(); ++v)
    if (f(f0(v)) != g(g0(v))) return false;
  return true;
}

AmalgamResult standard(const Morphism& f, const Morphism& g) {
  require_same_codomain(f, g, "standard");
  return realize(product(f, g), f, g, Naming::pairs, false);
}

AmalgamResult component_amalgam(const Morphism& f, const Morphism& g) {
  require_same_codomain(f, g, "component_amalgam");
  for (const Morphism* m : {&f, &g}) {
    if (!is_connected(m->domain()) || !is_connected(m->codomain()))
      throw DomainError("component_amalgam: connected graphs required");
    if (!is_confluent(*m)) throw DomainError("component_amalgam: inputs must be confluent");
  }
  AmalgamResult full = standard(f, g);
  const Graph& D = *full.D;
  auto comps = components(D);
  int best = comps.size() == 1 ? 0 : -1;
  std::string best_code;
  // a connected product needs no codes
  for (size_t i = 0; comps.size() > 1 && i < comps.size(); ++i) {
    Graph piece = induced(D, comps[i]).without_root();
    std::string code = piece.size() <= 10 ? graph_canonical_code(piece) : refinement_invariant(piece);
    // comps are ordered by least vertex, so the first minimum wins ties
    if (best < 0 || code < best_code) {
      best = static_cast<int>(i);
      best_code = code;
    }
  }
  const auto& vs = comps[best];
  GraphPtr P = share(induced(D, vs));
  std::vector<int> m0(P->size()), m1(P->size());
  for (int v : vs) {
    int p = P->index(D.name(v));
    m0[p] = full.f0(v);
    m1[p] = full.g0(v);
  }
  return {P, Morphism::make(P, f.domain_ptr(), std::move(m0)), Morphism::make(P, g.domain_ptr(), std::move(m1))};
}

AmalgamResult rooted_light(const Morphism& f, const Morphism& g) {
  require_same_codomain(f, g, "rooted_light");
  require_rooted_pair(f, g, "rooted_light");
  if (!f.report().light || !f.report().confluent) throw DomainError("rooted_light: f must be light confluent");
  if (!g.report().confluent) throw DomainError("rooted_light: g must be confluent");
  PairGraph pg = product(f, g);
  auto r = realize(pg, f, g, Naming::compact, false);
  if (!r.D->is_rooted_tree()) throw DomainError("rooted_light: product is not a tree");
  return {r.D, Morphism::make(r.D, f.domain_ptr(), r.f0.map()), Morphism::make(r.D, g.domain_ptr(), r.g0.map())};
}

// ---- order <= 3 monotone amalgamation ----

namespace {

struct M3Side {
  std::vector<int> centre;  // A -> domain
  // per oriented A-edge (u < v): arc vertices strictly between centre[u] and centre[v]
  std::map<std::pair<int, int>, std::pair<std::vector<int>, std::vector<int>>> arcs;
  std::map<int, std::vector<int>> hats;  // arc vertex -> its third component
  std::map<int, std::vector<int>> hat_of_ord2;  // A vertex (ord 2) -> extra component at its centre
};

M3Side analyse_m3(const Morphism& f) {
  const Graph& B = f.domain();
  const Graph& A = f.codomain();
  M3Side s;
  // attach[x][y]: vertex of f^-1(x) adjacent to f^-1(y)
  std::map<std::pair<int, int>, int> attach;
  for (auto [p, q] : B.edges())
    if (f(p) != f(q)) {
      attach[{f(p), f(q)}] = p;
      attach[{f(q), f(p)}] = q;
    }
  auto fib = f.fibers();
  s.centre.assign(A.size(), -1);
  for (int x = 0; x < A.size(); ++x) {
    const auto& nbs = A.adj(x);
    if (nbs.size() == 1) {
      for (int v : fib[x])
        if (B.ord(v) == 1) {
          s.centre[x] = v;
          break;
        }
    } else if (nbs.size() == 2) {
      auto p = tree_path(B, attach[{x, nbs[0]}], attach[{x, nbs[1]}]);
      s.centre[x] = *std::min_element(p.begin(), p.end());
    } else {
      int xa = attach[{x, nbs[0]}], xb = attach[{x, nbs[1]}], xc = attach[{x, nbs[2]}];
      if (xa == xb || xa == xc)
        s.centre[x] = xa;
      else if (xb == xc)
        s.centre[x] = xb;
      else {
        auto pab = tree_path(B, xa, xb);
        auto pac = tree_path(B, xa, xc);
        std::set<int> in_ab(pab.begin(), pab.end());
        int med = xa;
        for (int v : pac)
          if (in_ab.count(v)) med = v;
        s.centre[x] = med;
      }
    }
    if (s.centre[x] < 0) throw DomainError("m3: no end vertex over an end vertex");
  }
  std::vector<char> on_arc(B.size(), 0);
  for (int x = 0; x < A.size(); ++x) on_arc[s.centre[x]] = 1;
  for (auto [u, v] : A.edges()) {
    auto p = tree_path(B, s.centre[u], s.centre[v]);
    std::vector<int> pa, pb;
    for (size_t i = 1; i + 1 < p.size(); ++i) {
      (f(p[i]) == u ? pa : pb).push_back(p[i]);
      on_arc[p[i]] = 1;
    }
    s.arcs[{u, v}] = {pa, pb};
  }
  for (auto& [e, ab] : s.arcs) {
    auto p = tree_path(B, s.centre[e.first], s.centre[e.second]);
    for (size_t i = 1; i + 1 < p.size(); ++i)
      for (int z : B.adj(p[i]))
        if (z != p[i - 1] && z != p[i + 1]) s.hats[p[i]] = side_component(B, p[i], z);
  }
  for (int x = 0; x < A.size(); ++x) {
    if (A.ord(x) != 2) continue;
    int c = s.centre[x];
    for (int z : B.adj(c))
      if (!on_arc[z]) s.hat_of_ord2[x] = side_component(B, c, z);
  }
  // every vertex must be accounted for exactly once
  std::vector<int> seen(B.size(), 0);
  for (int x = 0; x < A.size(); ++x) ++seen[s.centre[x]];
  for (auto& [e, ab] : s.arcs) {
    for (int v : ab.first) ++seen[v];
    for (int v : ab.second) ++seen[v];
  }
  for (auto& [w, h] : s.hats)
    for (int v : h) ++seen[v];
  for (auto& [x, h] : s.hat_of_ord2)
    for (int v : h) ++seen[v];
  for (int v = 0; v < B.size(); ++v)
    if (seen[v] != 1) throw DomainError("m3: arc decomposition does not cover the domain");
  return s;
}

void require_ord3(const Graph& g, const char* who) {
  if (!is_tree(g)) throw DomainError(std::string(who) + ": trees required");
  for (int v = 0; v < g.size(); ++v)
    if (g.ord(v) > 3) throw DomainError(std::string(who) + ": vertex " + g.name(v) + " has order > 3");
}

}  // namespace

JointProjection jpp_m3(const GraphPtr& b, const GraphPtr& c) {
  if (b->size() < 1 || c->size() < 1) throw DomainError("jpp_m3: nonempty trees required");
  if (!is_tree(*b) || !is_tree(*c)) throw DomainError("jpp_m3: trees required");
  auto least_end = [](const Graph& g) {
    for (int v = 0; v < g.size(); ++v)
      if (g.ord(v) == 1) return v;
    return 0;
  };
  int eb = least_end(*b), ec = least_end(*c);
  GraphPtr B = share(b->without_root()), C = share(c->without_root());
  PairGraph pg;
  std::vector<int> ib(B->size()), ic(C->size());
  for (int v = 0; v < B->size(); ++v) ib[v] = pg.add(v, ec);
  for (int v = 0; v < C->size(); ++v) ic[v] = v == ec ? ib[eb] : pg.add(eb, v);
  for (auto [u, v] : B->edges()) pg.link(ib[u], ib[v]);
  for (auto [u, v] : C->edges()) pg.link(ic[u], ic[v]);
  // dummy maps only carry the domains for naming
  Morphism fb(B, B, std::vector<int>(B->size())), fc(C, C, std::vector<int>(C->size()));
  auto r = realize(pg, fb, fc, Naming::pairs, true);
  return {r.D, r.f0, r.g0};
}

AmalgamResult m3(const Morphism& f, const Morphism& g) {
  require_same_codomain(f, g, "m3");
  require_ord3(f.domain(), "m3");
  require_ord3(g.domain(), "m3");
  require_ord3(f.codomain(), "m3");
  if (!f.report().monotone || !g.report().monotone) throw DomainError("m3: inputs must be monotone");
  const Graph& A = f.codomain();
  const Graph& B = f.domain();
  const Graph& C = g.domain();
  if (A.size() == 1) {
    auto w = jpp_m3(f.domain_ptr(), g.domain_ptr());
    return {w.D, Morphism::make(w.D, f.domain_ptr(), w.f.map()), Morphism::make(w.D, g.domain_ptr(), w.g.map())};
  }
  M3Side sb = analyse_m3(f), sc = analyse_m3(g);
  PairGraph pg;
  std::vector<int> node(A.size());
  for (int x = 0; x < A.size(); ++x) node[x] = pg.add(sb.centre[x], sc.centre[x]);
  // hat component from B: f0 identity, g0 constant
  auto attach_b = [&](int at, int w, const std::vector<int>& comp, int gval) {
    std::map<int, int> id;
    for (int v : comp) id[v] = pg.add(v, gval);
    for (int v : comp)
      for (int u : B.adj(v))
        if (id.count(u) && u > v) pg.link(id[v], id[u]);
    for (int v : comp)
      if (B.adjacent(v, w)) pg.link(at, id[v]);
  };
  auto attach_c = [&](int at, int w, const std::vector<int>& comp, int fval) {
    std::map<int, int> id;
    for (int v : comp) id[v] = pg.add(fval, v);
    for (int v : comp)
      for (int u : C.adj(v))
        if (id.count(u) && u > v) pg.link(id[v], id[u]);
    for (int v : comp)
      if (C.adjacent(v, w)) pg.link(at, id[v]);
  };
  for (auto [a, b] : A.edges()) {
    const auto& [ab, bb] = sb.arcs.at({a, b});
    const auto& [ac, bc] = sc.arcs.at({a, b});
    int prev = node[a];
    auto step = [&](int id) {
      pg.link(prev, id);
      prev = id;
    };
    int ga = sc.centre[a];
    for (int v : ab) {
      int id = pg.add(v, ga);
      step(id);
      if (sb.hats.count(v)) attach_b(id, v, sb.hats.at(v), ga);
    }
    int fa = ab.empty() ? sb.centre[a] : ab.back();
    for (int v : ac) {
      int id = pg.add(fa, v);
      step(id);
      if (sc.hats.count(v)) attach_c(id, v, sc.hats.at(v), fa);
    }
    int gb = bc.empty() ? sc.centre[b] : bc.front();
    for (int v : bb) {
      int id = pg.add(v, gb);
      step(id);
      if (sb.hats.count(v)) attach_b(id, v, sb.hats.at(v), gb);
    }
    int fb = sb.centre[b];
    for (int v : bc) {
      int id = pg.add(fb, v);
      step(id);
      if (sc.hats.count(v)) attach_c(id, v, sc.hats.at(v), fb);
    }
    step(node[b]);
  }
  for (int x = 0; x < A.size(); ++x) {
    if (A.ord(x) != 2) continue;
    int prime = pg.add(sb.centre[x], sc.centre[x]);
    pg.link(node[x], prime);
    if (sb.hat_of_ord2.count(x)) attach_b(prime, sb.centre[x], sb.hat_of_ord2.at(x), sc.centre[x]);
    if (sc.hat_of_ord2.count(x)) attach_c(prime, sc.centre[x], sc.hat_of_ord2.at(x), sb.centre[x]);
  }
  return realize(pg, f, g, Naming::compact, true);
}

// ---- simple-monotone, mixed and simple-confluent pairs ----

AmalgamResult simple_monotone_pair(const Morphism& f, const Morphism& g, bool star) {
  require_same_codomain(f, g, "simple_monotone_pair");
  require_rooted_pair(f, g, "simple_monotone_pair");
  auto vf = monotone_legs(f, star), vg = monotone_legs(g, star);
  return fill_grid(vf, vg, [star](const Leg& a, const Leg& b) { return elementary_cell(a.m, b.m, star); });
}

namespace {

// one elementary step e: S -> T lifted along a light confluent l: C -> T.
// every edge of C over the split edge gets its own inserted vertex (for an
// adding edge, every vertex over the attachment point gets its own leaf);
// returns (C' -> S, C' -> C)
std::pair<Morphism, Morphism> lift_step(const Morphism& e, const Morphism& l, bool star) {
  Elem el = analyse(e, star);
  if (el.kind == ElemKind::iso) return {compose(inverse_iso(e), l), Morphism::identity(l.domain_ptr())};
  const Graph& C = l.domain();
  GraphBuilder b;
  std::set<std::string> taken(C.names().begin(), C.names().end());
  auto fresh = [&](std::string s) {
    while (taken.count(s)) s += "'";
    taken.insert(s);
    return s;
  };
  std::vector<int> up, down;
  for (int v = 0; v < C.size(); ++v) {
    b.add_vertex(C.name(v));
    up.push_back(el.inv[l(v)]);
    down.push_back(v);
  }
  if (C.has_root()) b.set_root(C.root());
  const std::string& xn = e.domain().name(el.x);
  if (el.kind == ElemKind::split) {
    for (auto [p, q] : C.edges()) {
      int lp = l(p), lq = l(q);
      if (!((lp == el.a && lq == el.b) || (lp == el.b && lq == el.a))) {
        b.add_edge(p, q);
        continue;
      }
      int pa = lp == el.a ? p : q, pb = pa == p ? q : p;
      int nx = b.add_vertex(fresh(pair_name(xn, C.name(pb))));
      up.push_back(el.x);
      down.push_back(pa);
      b.add_edge(pa, nx);
      b.add_edge(nx, pb);
    }
  } else {
    for (auto [p, q] : C.edges()) b.add_edge(p, q);
    for (int v = 0; v < C.size(); ++v)
      if (l(v) == el.a) {
        int ny = b.add_vertex(fresh(pair_name(xn, C.name(v))));
        up.push_back(el.x);
        down.push_back(v);
        b.add_edge(v, ny);
      }
  }
  auto res = b.build();
  GraphPtr D = share(std::move(res.graph));
  std::vector<int> mu(D->size()), md(D->size());
  for (size_t i = 0; i < up.size(); ++i) {
    mu[res.index[i]] = up[i];
    md[res.index[i]] = down[i];
  }
  return {Morphism::make(D, e.domain_ptr(), std::move(mu)), Morphism::make(D, l.domain_ptr(), std::move(md))};
}

}  // namespace

AmalgamResult mono_light_pair(const Morphism& f, const Morphism& g, bool star) {
  require_same_codomain(f, g, "mono_light_pair");
  require_rooted_pair(f, g, "mono_light_pair");
  if (!simple_monotone_chain(f, star)) throw DomainError("mono_light_pair: f is not simple-monotone");
  if (!g.report().light || !g.report().confluent) throw DomainError("mono_light_pair: g must be light confluent");
  // the literal fibre product can merge the inserted vertices of several
  // preimage edges that share an endpoint, so the split is lifted edge by edge
  Morphism l = g;
  Morphism g0 = Morphism::identity(g.domain_ptr());
  for (const auto& leg : monotone_legs(f, star)) {
    auto [nl, down] = lift_step(leg.m, l, star);
    g0 = compose(g0, down);
    l = nl;
  }
  AmalgamResult out{l.domain_ptr(), l, g0};
  if (!out.D->is_rooted_tree()) throw DomainError("mono_light_pair: result is not a tree");
  if (!out.f0.report().light || !out.f0.report().confluent) throw DomainError("mono_light_pair: f0 is not light confluent");
  if (!simple_monotone_chain(out.g0, star)) throw DomainError("mono_light_pair: g0 is not simple-monotone");
  return out;
}

AmalgamResult simple_confluent_pair(const Morphism& f, const Morphism& g, bool star) {
  require_same_codomain(f, g, "simple_confluent_pair");
  require_rooted_pair(f, g, "simple_confluent_pair");
  auto run = [star](const Morphism& m) {
    auto d = star ? decompose_simple_star(m) : decompose_simple_confluent(m);
    if (!d) throw DomainError("simple_confluent_pair: decomposition failed: " + d.failure);
    return stage_legs(*d.decomposition);
  };
  auto vf = run(f), vg = run(g);
  return fill_grid(vf, vg, [star](const Leg& a, const Leg& b) -> AmalgamResult {
    if (a.kind == LegKind::light && b.kind == LegKind::light) return rooted_light(a.m, b.m);
    if (a.kind == LegKind::mono && b.kind == LegKind::light) return mono_light_pair(a.m, b.m, star);
    if (a.kind == LegKind::light) {
      auto r = mono_light_pair(b.m, a.m, star);
      return {r.D, r.g0, r.f0};
    }
    return simple_monotone_pair(a.m, b.m, star);
  });
}

// ---- joint projections of rooted trees ----

GraphPtr regular_tree(int height, int sord) {
  if (height < 0 || sord < 1) throw DomainError("regular_tree: bad parameters");
  GraphBuilder b;
  int root = b.add_vertex("r");
  b.set_root(root);
  std::vector<std::pair<int, std::string>> level{{root, "r"}};
  for (int h = 0; h < height; ++h) {
    std::vector<std::pair<int, std::string>> next;
    for (auto& [id, nm] : level)
      for (int i = 0; i < sord; ++i) {
        std::string cn = nm + "." + std::to_string(i);
        int c = b.add_vertex(cn);
        b.add_edge(id, c);
        next.emplace_back(c, cn);
      }
    level.swap(next);
  }
  return share(b.build().graph);
}

namespace {

// S regular of height k and successor order m onto t
Morphism regular_cover(const GraphPtr& t, int k, int m) {
  const Graph& T = *t;
  // phase one: lengthen short branches by splits of their last edge
  GraphBuilder bld;
  std::vector<int> bid(T.size());
  for (int v = 0; v < T.size(); ++v) bid[v] = bld.add_vertex(T.name(v));
  bld.set_root(bid[T.root()]);
  std::vector<int> image(T.size());
  for (int v = 0; v < T.size(); ++v) image[v] = v;
  std::set<std::string> taken(T.names().begin(), T.names().end());
  for (int v = 0; v < T.size(); ++v) {
    if (v == T.root()) continue;
    int p = T.parent(v);
    if (!T.is_end(v) || T.ht(v) >= k) {
      bld.add_edge(bid[p], bid[v]);
      continue;
    }
    int prev = bid[p];
    for (int i = 0; i < k - T.ht(v); ++i) {
      std::string nm = T.name(v) + "_" + std::to_string(i);
      while (taken.count(nm)) nm += "_";
      taken.insert(nm);
      int id = bld.add_vertex(nm);
      image.push_back(v);
      bld.add_edge(prev, id);
      prev = id;
    }
    bld.add_edge(prev, bid[v]);
  }
  auto res = bld.build();
  GraphPtr L = share(std::move(res.graph));
  std::vector<int> lmap(L->size());
  for (size_t i = 0; i < image.size(); ++i) lmap[res.index[i]] = image[i];
  Morphism stretch = Morphism::make(L, t, std::move(lmap));
  // phase two: duplicate cones until every vertex has m successors
  GraphPtr S = regular_tree(k, m);
  std::vector<int> smap(S->size(), -1);
  std::vector<std::pair<int, int>> stack{{S->root(), L->root()}};
  while (!stack.empty()) {
    auto [s, l] = stack.back();
    stack.pop_back();
    smap[s] = l;
    const auto& sc = S->children(s);
    const auto& lc = L->children(l);
    if (sc.empty()) continue;
    if (lc.empty()) throw DomainError("jpp_rooted: internal height mismatch");
    for (size_t i = 0; i < sc.size(); ++i) stack.emplace_back(sc[i], lc[std::min(i, lc.size() - 1)]);
  }
  Morphism cover = Morphism::make(S, L, std::move(smap));
  return compose(stretch, cover);
}

}  // namespace

JointProjection jpp_rooted(const GraphPtr& a, const GraphPtr& b) {
  for (const GraphPtr* t : {&a, &b})
    if (!(*t)->is_rooted_tree() || (*t)->size() < 2) throw DomainError("jpp_rooted: rooted trees with >= 2 vertices required");
  int k = std::max(a->tree_height(), b->tree_height());
  int m = 1;
  for (const GraphPtr* t : {&a, &b})
    for (int v = 0; v < (*t)->size(); ++v) m = std::max(m, (*t)->sord(v));
  Morphism f = regular_cover(a, k, m), g = regular_cover(b, k, m);
  // both covers share the same regular tree by name
  Morphism g2(f.domain_ptr(), g.codomain_ptr(), g.map());
  return {f.domain_ptr(), f, g2};
}

}  // namespace fraisse
