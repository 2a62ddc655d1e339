#include "fraisse/morphism.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

namespace fraisse {

Morphism::Morphism(GraphPtr dom, GraphPtr cod, std::vector<int> map)
    : dom_(std::move(dom)), cod_(std::move(cod)), map_(std::move(map)), cache_(std::make_shared<Cache>()) {}

Morphism Morphism::make(GraphPtr dom, GraphPtr cod, std::vector<int> map) {
  auto bad = violations(*dom, *cod, map);
  if (!bad.empty()) {
    std::string msg = "invalid epimorphism:";
    for (auto& b : bad) msg += " " + b;
    throw DomainError(msg);
  }
  return Morphism(std::move(dom), std::move(cod), std::move(map));
}

Morphism Morphism::from_names(GraphPtr dom, GraphPtr cod, const std::map<std::string, std::string>& m) {
  std::vector<int> map(dom->size(), -1);
  for (const auto& [k, v] : m) {
    int x = dom->index(k);
    if (x < 0) throw DomainError("map key is not a domain vertex: " + k);
    int y = cod->index(v);
    if (y < 0) throw DomainError("map value is not a codomain vertex: " + v);
    map[x] = y;
  }
  for (int x = 0; x < dom->size(); ++x)
    if (map[x] < 0) throw DomainError("map is not total; missing " + dom->name(x));
  return make(std::move(dom), std::move(cod), std::move(map));
}

Morphism Morphism::identity(GraphPtr g) {
  std::vector<int> m(g->size());
  for (int i = 0; i < g->size(); ++i) m[i] = i;
  return Morphism(g, g, std::move(m));
}

std::vector<std::vector<int>> Morphism::fibers() const {
  std::vector<std::vector<int>> out(cod_->size());
  for (int v = 0; v < dom_->size(); ++v) out[map_[v]].push_back(v);
  return out;
}

const ClassReport& Morphism::report() const {
  std::call_once(cache_->once, [this] { cache_->r = classify(*this); });
  return cache_->r;
}

std::vector<std::string> violations(const Graph& dom, const Graph& cod, const std::vector<int>& map) {
  std::vector<std::string> out;
  if (static_cast<int>(map.size()) != dom.size()) return {"map-not-total"};
  for (int y : map)
    if (y < 0 || y >= cod.size()) return {"map-not-total"};
  std::vector<char> hitv(cod.size(), 0);
  for (int y : map) hitv[y] = 1;
  bool hom = true;
  std::set<std::pair<int, int>> hite;
  for (auto [u, v] : dom.edges()) {
    int a = map[u], b = map[v];
    if (a == b) continue;
    if (!cod.adjacent(a, b)) {
      hom = false;
      continue;
    }
    hite.emplace(std::min(a, b), std::max(a, b));
  }
  if (!hom) out.push_back("not-homomorphism");
  if (std::find(hitv.begin(), hitv.end(), 0) != hitv.end()) out.push_back("not-vertex-surjective");
  if (static_cast<int>(hite.size()) != cod.edge_count()) out.push_back("not-edge-surjective");
  if (dom.has_root() && cod.has_root()) {
    if (map[dom.root()] != cod.root()) out.push_back("root-not-preserved");
    if (dom.is_rooted_tree() && cod.is_rooted_tree()) {
      for (int v = 0; v < dom.size(); ++v) {
        if (v == dom.root()) continue;
        int fp = map[dom.parent(v)], fv = map[v];
        if (fv != fp && (cod.root() == fv || cod.parent(fv) != fp)) {
          out.push_back("not-order-preserving");
          break;
        }
      }
    }
  }
  return out;
}

bool is_epimorphism(const Graph& dom, const Graph& cod, const std::vector<int>& map) {
  return violations(dom, cod, map).empty();
}

bool same_graph(const Graph& a, const Graph& b) { return &a == &b || a == b; }

Morphism compose(const Morphism& g, const Morphism& f) {
  if (!same_graph(f.codomain(), g.domain())) throw DomainError("compose: domain mismatch");
  std::vector<int> m(f.domain().size());
  for (int v = 0; v < f.domain().size(); ++v) m[v] = g(f(v));
  return Morphism::make(f.domain_ptr(), g.codomain_ptr(), std::move(m));
}

bool equal_maps(const Morphism& a, const Morphism& b) {
  return same_graph(a.domain(), b.domain()) && same_graph(a.codomain(), b.codomain()) && a.map() == b.map();
}

bool is_monotone(const Morphism& f) {
  const Graph& g = f.domain();
  for (const auto& fib : f.fibers()) {
    if (fib.empty()) continue;
    std::vector<char> mask(g.size(), 0);
    for (int v : fib) mask[v] = 1;
    if (components(g, mask).size() != 1) return false;
  }
  return true;
}

bool is_light(const Morphism& f) {
  for (auto [u, v] : f.domain().edges())
    if (f(u) == f(v)) return false;
  return true;
}

bool is_confluent(const Morphism& f) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  auto fib = f.fibers();
  std::vector<char> mask(g.size(), 0);
  for (auto [p, q] : h.edges()) {
    for (int v : fib[p]) mask[v] = 1;
    for (int v : fib[q]) mask[v] = 1;
    bool ok = true;
    for (const auto& comp : components(g, mask)) {
      bool found = false;
      for (int u : comp) {
        if (f(u) != p) continue;
        for (int w : g.adj(u))
          if (f(w) == q && mask[w]) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (!found) {
        ok = false;
        break;
      }
    }
    for (int v : fib[p]) mask[v] = 0;
    for (int v : fib[q]) mask[v] = 0;
    if (!ok) return false;
  }
  return true;
}

bool is_confluent_semantic(const Morphism& f) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  if (g.size() > 12) throw DomainError("is_confluent_semantic: domain exceeds 12 vertices");
  int n = h.size();
  std::vector<uint32_t> nb(n, 0);
  for (int v = 0; v < n; ++v)
    for (int w : h.adj(v)) nb[v] |= 1u << w;
  for (uint32_t q = 1; q < (1u << n); ++q) {
    // connectivity of q
    uint32_t start = q & (~q + 1);
    uint32_t seen = start, frontier = start;
    while (frontier) {
      uint32_t next = 0;
      for (int v = 0; v < n; ++v)
        if (frontier >> v & 1) next |= nb[v];
      next &= q & ~seen;
      seen |= next;
      frontier = next;
    }
    if (seen != q) continue;
    std::vector<char> mask(g.size(), 0);
    for (int v = 0; v < g.size(); ++v) mask[v] = (q >> f(v)) & 1;
    for (const auto& comp : components(g, mask)) {
      uint32_t img = 0;
      for (int v : comp) img |= 1u << f(v);
      if (img != q) return false;
    }
  }
  return true;
}

bool is_end_vertex_preserving(const Morphism& f) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  if (!g.is_rooted_tree() || !h.is_rooted_tree()) throw DomainError("end-vertex preservation needs rooted trees");
  for (int v = 0; v < g.size(); ++v)
    if (g.is_end(v) && !h.is_end(f(v))) return false;
  return true;
}

bool is_isomorphism(const Morphism& f) {
  if (f.domain().size() != f.codomain().size() || f.domain().edge_count() != f.codomain().edge_count())
    return false;
  std::vector<char> hit(f.codomain().size(), 0);
  for (int y : f.map()) {
    if (hit[y]) return false;
    hit[y] = 1;
  }
  for (auto [u, v] : f.domain().edges())
    if (!f.codomain().adjacent(f(u), f(v))) return false;
  return true;
}

namespace {

// the unique fiber of size two, or {-1,-1} when fiber sizes are not 1,..,1,2
std::pair<int, int> doubled_fiber(const Morphism& f) {
  if (f.domain().size() != f.codomain().size() + 1) return {-1, -1};
  std::pair<int, int> out{-1, -1};
  for (const auto& fib : f.fibers()) {
    if (fib.size() == 1) continue;
    if (fib.size() != 2 || out.first >= 0) return {-1, -1};
    out = {fib[0], fib[1]};
  }
  return out;
}

bool injective_rest_is_iso(const Morphism& f, int z) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  for (auto [u, v] : g.edges()) {
    if (u == z || v == z) continue;
    if (f(u) == f(v) || !h.adjacent(f(u), f(v))) return false;
  }
  return true;
}

bool roots_ok(const Morphism& f, int z) {
  const Graph& g = f.domain();
  if (g.has_root() && g.root() == z) return false;
  if (g.has_root() && f.codomain().has_root() && f(g.root()) != f.codomain().root()) return false;
  return true;
}

}  // namespace

bool is_splitting_edge(const Morphism& f) {
  auto [x, y] = doubled_fiber(f);
  if (x < 0) return false;
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  if (!g.adjacent(x, y) || g.edge_count() != h.edge_count() + 1) return false;
  for (int z : {x, y}) {
    if (g.ord(z) != 2 || !roots_ok(f, z)) continue;
    int a = g.adj(z)[0], b = g.adj(z)[1];
    if (!h.adjacent(f(a), f(b))) continue;
    if (injective_rest_is_iso(f, z)) return true;
  }
  return false;
}

bool is_adding_edge(const Morphism& f) {
  auto [x, y] = doubled_fiber(f);
  if (x < 0) return false;
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  if (!g.adjacent(x, y) || g.edge_count() != h.edge_count() + 1) return false;
  for (int z : {x, y}) {
    if (g.ord(z) != 1 || !roots_ok(f, z)) continue;
    if (injective_rest_is_iso(f, z)) return true;
  }
  return false;
}

std::optional<ElcWitness> is_elementary_light_confluent(const Morphism& f) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  if (!g.is_rooted_tree() || !h.is_rooted_tree()) return std::nullopt;
  if (g.size() <= h.size()) return std::nullopt;
  auto injective_on = [&](const std::vector<char>& mask, bool inside) {
    std::vector<char> hit(h.size(), 0);
    for (int v = 0; v < g.size(); ++v) {
      if (static_cast<bool>(mask[v]) != inside) continue;
      if (hit[f(v)]) return false;
      hit[f(v)] = 1;
    }
    return true;
  };
  for (int v = 0; v < g.size(); ++v) {
    const auto& kids = g.children(v);
    if (kids.size() < 2) continue;
    int fv = f(v);
    for (size_t i = 0; i < kids.size(); ++i) {
      for (size_t j = i + 1; j < kids.size(); ++j) {
        auto c1 = subtree(g, kids[i]);
        auto c2 = subtree(g, kids[j]);
        if (c1.size() != c2.size()) continue;
        // f(C1) must be a cone over a child of f(v) in h
        int top = f(kids[i]);
        if (top == fv || f(kids[j]) != top) continue;
        auto target = subtree(h, top);
        if (target.size() != c1.size()) continue;
        std::vector<char> t(h.size(), 0);
        for (int x : target) t[x] = 1;
        std::vector<char> s1(h.size(), 0), s2(h.size(), 0);
        bool ok = true;
        for (int x : c1) {
          if (!t[f(x)] || s1[f(x)]) ok = false;
          s1[f(x)] = 1;
        }
        for (int x : c2) {
          if (!t[f(x)] || s2[f(x)]) ok = false;
          s2[f(x)] = 1;
        }
        if (!ok) continue;
        std::vector<char> mask(g.size(), 0);
        for (int x : c1) mask[x] = 1;
        for (int x : c2) mask[x] = 1;
        if (!injective_on(mask, false)) continue;
        if (!is_epimorphism(g, h, f.map())) return std::nullopt;
        return ElcWitness{v, std::move(c1), std::move(c2)};
      }
    }
  }
  return std::nullopt;
}

ClassReport classify(const Morphism& f) {
  ClassReport r;
  r.monotone = is_monotone(f);
  r.light = is_light(f);
  r.confluent = r.monotone || is_confluent(f);
  if (f.domain().is_rooted_tree() && f.codomain().is_rooted_tree()) {
    r.end_vertex_preserving = is_end_vertex_preserving(f);
    r.elementary_light_confluent = is_elementary_light_confluent(f).has_value();
  }
  r.splitting_edge = is_splitting_edge(f);
  r.adding_edge = is_adding_edge(f);
  return r;
}

std::string fresh_name(const Graph& g, const std::string& stem) {
  if (g.index(stem) < 0) return stem;
  for (int i = 1;; ++i) {
    std::string s = stem + std::to_string(i);
    if (g.index(s) < 0) return s;
  }
}

namespace {

// copy of t as a builder, with builder id == graph index
GraphBuilder copy_builder(const Graph& t) {
  GraphBuilder b;
  for (int v = 0; v < t.size(); ++v) b.add_vertex(t.name(v));
  for (auto [u, v] : t.edges()) b.add_edge(u, v);
  if (t.has_root()) b.set_root(t.root());
  return b;
}

}  // namespace

Morphism split_edge(const GraphPtr& t, int a, int b, int toward, const std::string& fresh) {
  if (a < 0 || b < 0 || !t->adjacent(a, b)) throw DomainError("split_edge: edge absent");
  if (toward != a && toward != b) throw DomainError("split_edge: image must be an endpoint");
  GraphBuilder bld;
  for (int v = 0; v < t->size(); ++v) bld.add_vertex(t->name(v));
  for (auto [u, v] : t->edges())
    if (!((u == a && v == b) || (u == b && v == a))) bld.add_edge(u, v);
  int x = bld.add_vertex(fresh.empty() ? fresh_name(*t, "x") : fresh);
  bld.add_edge(a, x);
  bld.add_edge(x, b);
  if (t->has_root()) bld.set_root(t->root());
  auto res = bld.build();
  std::vector<int> map(res.graph.size());
  for (int v = 0; v < t->size(); ++v) map[res.index[v]] = v;
  map[res.index[x]] = toward;
  return Morphism::make(share(std::move(res.graph)), t, std::move(map));
}

Morphism add_edge(const GraphPtr& t, int v, const std::string& fresh) {
  if (v < 0 || v >= t->size()) throw DomainError("add_edge: vertex absent");
  GraphBuilder bld = copy_builder(*t);
  int y = bld.add_vertex(fresh.empty() ? fresh_name(*t, "y") : fresh);
  bld.add_edge(v, y);
  auto res = bld.build();
  std::vector<int> map(res.graph.size());
  for (int u = 0; u < t->size(); ++u) map[res.index[u]] = u;
  map[res.index[y]] = v;
  return Morphism::make(share(std::move(res.graph)), t, std::move(map));
}

Morphism antitransitivity_split(const GraphPtr& g, int a, int b) {
  if (a < 0 || b < 0 || !g->adjacent(a, b)) throw DomainError("antitransitivity_split: vertices not adjacent");
  GraphBuilder bld;
  for (int v = 0; v < g->size(); ++v) bld.add_vertex(g->name(v));
  for (auto [u, v] : g->edges())
    if (!((u == a && v == b) || (u == b && v == a))) bld.add_edge(u, v);
  std::string na = fresh_name(*g, g->name(a) + "'");
  std::string nb = g->name(b) + "'";
  while (g->index(nb) >= 0 || nb == na) nb += "'";
  int x = bld.add_vertex(na);
  int y = bld.add_vertex(nb);
  bld.add_edge(a, x);
  bld.add_edge(x, y);
  bld.add_edge(y, b);
  if (g->has_root()) bld.set_root(g->root());
  auto res = bld.build();
  std::vector<int> map(res.graph.size());
  for (int v = 0; v < g->size(); ++v) map[res.index[v]] = v;
  map[res.index[x]] = a;
  map[res.index[y]] = b;
  return Morphism::make(share(std::move(res.graph)), g, std::move(map));
}

Morphism restrict_to_component(const Morphism& f, const std::vector<int>& x, const std::vector<int>& y) {
  const Graph& g = f.domain();
  const Graph& h = f.codomain();
  std::vector<char> inx(h.size(), 0);
  for (int q : x) inx[q] = 1;
  std::vector<char> pre(g.size(), 0);
  for (int v = 0; v < g.size(); ++v) pre[v] = inx[f(v)];
  auto sorted_y = y;
  std::sort(sorted_y.begin(), sorted_y.end());
  bool found = false;
  for (const auto& comp : components(g, pre))
    if (comp == sorted_y) found = true;
  if (!found) throw DomainError("restrict_to_component: Y is not a component of the preimage of X");
  auto sx = x;
  std::sort(sx.begin(), sx.end());
  Graph dy = induced(g, sorted_y);
  Graph cx = induced(h, sx);
  std::vector<int> map(dy.size());
  for (int i = 0; i < dy.size(); ++i) map[i] = cx.index(h.name(f(g.index(dy.name(i)))));
  return Morphism(share(std::move(dy)), share(std::move(cx)), std::move(map));
}

}  // namespace fraisse
