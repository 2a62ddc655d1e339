#include "fraisse/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <unordered_set>

#include "fraisse/canon.hpp"

namespace fraisse {

namespace {
std::atomic<int> g_cap{8};

std::string vertex_label(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "z" + std::to_string(i);
}

void check_cap(int max_v) {
  if (max_v > oracle_cap())
    throw DomainError("oracle cap exceeded: " + std::to_string(max_v) + " > " + std::to_string(oracle_cap()));
}

std::vector<std::vector<std::string>>& rooted_code_cache() {
  static std::vector<std::vector<std::string>> cache;
  return cache;
}

// codes of rooted trees by exact size, sorted
const std::vector<std::string>& rooted_codes(int n) {
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto& cache = rooted_code_cache();
  if (cache.empty()) cache.push_back({});
  while (static_cast<int>(cache.size()) <= n) {
    int k = static_cast<int>(cache.size());
    std::set<std::string> out;
    if (k == 1) {
      out.insert("()");
    } else {
      for (const auto& code : cache[k - 1]) {
        auto t = tree_from_code(code);
        for (int v = 0; v < t->size(); ++v) {
          GraphBuilder b;
          for (int x = 0; x < t->size(); ++x) b.add_vertex(t->name(x));
          for (auto [x, y] : t->edges()) b.add_edge(x, y);
          int nv = b.add_vertex("~");
          b.add_edge(v, nv);
          b.set_root(t->root());
          out.insert(canonical_code(b.build().graph));
        }
      }
    }
    cache.emplace_back(out.begin(), out.end());
  }
  return cache[n];
}

}  // namespace

int oracle_cap() { return g_cap.load(); }
void set_oracle_cap(int cap) { g_cap.store(cap); }

GraphPtr tree_from_code(const std::string& code, bool keep_root) {
  GraphBuilder b;
  std::vector<int> stack;
  int count = 0;
  int root = -1;
  for (char ch : code) {
    if (ch == '(') {
      int v = b.add_vertex(vertex_label(count++));
      if (stack.empty())
        root = v;
      else
        b.add_edge(stack.back(), v);
      stack.push_back(v);
    } else if (ch == ')') {
      stack.pop_back();
    }
  }
  if (keep_root) b.set_root(root);
  return share(b.build().graph);
}

namespace {

std::vector<GraphPtr> rooted_trees_unchecked(int max_v, int min_v) {
  std::vector<GraphPtr> out;
  for (int n = std::max(1, min_v); n <= max_v; ++n)
    for (const auto& c : rooted_codes(n)) out.push_back(tree_from_code(c));
  return out;
}

std::vector<GraphPtr> trees_unchecked(int max_v, int min_v) {
  std::vector<GraphPtr> out;
  for (int n = std::max(1, min_v); n <= max_v; ++n) {
    std::set<std::string> codes;
    for (const auto& c : rooted_codes(n)) codes.insert(unrooted_tree_code(*tree_from_code(c)));
    for (const auto& c : codes) out.push_back(tree_from_code(c, false));
  }
  return out;
}

GraphPtr graph_from_canonical(const std::string& code) {
  auto colon = code.find(':');
  int n = std::stoi(code.substr(0, colon));
  std::string bits = code.substr(colon + 1);
  GraphBuilder b;
  for (int i = 0; i < n; ++i) b.add_vertex(vertex_label(i));
  size_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (bits[k++] == '1') b.add_edge(i, j);
  return share(b.build().graph);
}

}  // namespace

std::vector<GraphPtr> enumerate_rooted_trees(int max_v, int min_v) {
  check_cap(max_v);
  return rooted_trees_unchecked(max_v, min_v);
}

std::vector<GraphPtr> enumerate_trees(int max_v, int min_v) {
  check_cap(max_v);
  return trees_unchecked(max_v, min_v);
}

std::vector<GraphPtr> enumerate_connected_graphs(int max_v, int min_v) {
  check_cap(max_v);
  std::vector<GraphPtr> out;
  std::vector<std::string> level;
  for (int n = 1; n <= max_v; ++n) {
    std::set<std::string> next;
    if (n == 1) {
      next.insert(graph_canonical_code(*graph_from_canonical("1:")));
    } else {
      for (const auto& code : level) {
        auto g = graph_from_canonical(code);
        for (uint32_t s = 1; s < (1u << (n - 1)); ++s) {
          GraphBuilder b;
          for (int i = 0; i < n - 1; ++i) b.add_vertex(g->name(i));
          for (auto [x, y] : g->edges()) b.add_edge(x, y);
          int nv = b.add_vertex("~");
          for (int i = 0; i < n - 1; ++i)
            if (s >> i & 1) b.add_edge(i, nv);
          next.insert(graph_canonical_code(b.build().graph));
        }
      }
    }
    level.assign(next.begin(), next.end());
    if (n >= min_v)
      for (const auto& c : level) out.push_back(graph_from_canonical(c));
  }
  return out;
}

bool satisfies(const Morphism& f, const EnumerationSpec& spec) {
  const auto& r = f.report();
  if (spec.monotone && !r.monotone) return false;
  if (spec.light && !r.light) return false;
  if (spec.confluent && !r.confluent) return false;
  if (spec.end_vertex_preserving && !r.end_vertex_preserving) return false;
  return true;
}

std::vector<Morphism> enumerate_epimorphisms(const GraphPtr& s, const GraphPtr& t, const EnumerationSpec& spec) {
  check_cap(std::max(s->size(), t->size()));
  std::vector<Morphism> out;
  int n = s->size();
  if (t->size() > n || n == 0) return out;
  bool rooted = spec.rooted && s->is_rooted_tree() && t->is_rooted_tree();
  // assignment order: preorder for rooted trees, bfs otherwise
  std::vector<int> order;
  if (rooted) {
    order = s->tree()->preorder;
  } else {
    std::vector<char> seen(n, 0);
    for (int st = 0; st < n; ++st) {
      if (seen[st]) continue;
      seen[st] = 1;
      size_t head = order.size();
      order.push_back(st);
      while (head < order.size()) {
        int v = order[head++];
        for (int w : s->adj(v))
          if (!seen[w]) {
            seen[w] = 1;
            order.push_back(w);
          }
      }
    }
  }
  std::vector<int> map(n, -1), cover(t->size(), 0);
  int uncovered = t->size();
  std::function<void(size_t)> rec = [&](size_t i) {
    if (static_cast<int>(n - i) < uncovered) return;
    if (i == order.size()) {
      if (!is_epimorphism(*s, *t, map)) return;
      Morphism f(s, t, map);
      if (satisfies(f, spec)) out.push_back(std::move(f));
      return;
    }
    int v = order[i];
    std::vector<int> cand;
    if (rooted) {
      if (v == s->root()) {
        cand.push_back(t->root());
      } else {
        int fp = map[s->parent(v)];
        cand.push_back(fp);
        for (int c : t->children(fp)) cand.push_back(c);
      }
    } else {
      for (int y = 0; y < t->size(); ++y) {
        bool ok = true;
        for (int w : s->adj(v))
          if (map[w] >= 0 && map[w] != y && !t->adjacent(map[w], y)) {
            ok = false;
            break;
          }
        if (ok) cand.push_back(y);
      }
    }
    for (int y : cand) {
      map[v] = y;
      if (cover[y]++ == 0) --uncovered;
      rec(i + 1);
      if (--cover[y] == 0) ++uncovered;
      map[v] = -1;
    }
  };
  rec(0);
  std::sort(out.begin(), out.end(), [](const Morphism& a, const Morphism& b) { return a.map() < b.map(); });
  return out;
}

namespace {

struct Brute {
  GraphPtr target;
  int max_chain;
  bool star;
  std::unordered_set<std::string> dead;
  std::vector<Morphism> chain;
  std::vector<FactorTag> tags;
  GraphPtr final_graph;
  std::vector<int> final_h;

  bool dfs(const GraphPtr& x, const std::vector<int>& h, int depth) {
    if (x->size() == target->size()) {
      final_graph = x;
      final_h = h;
      return true;
    }
    if (depth >= max_chain) return false;
    std::string key = canonical_code(*x, &h);
    if (dead.count(key)) return false;
    auto step = [&](const Morphism& e, FactorTag tag) {
      std::vector<int> nh(e.codomain().size());
      for (int v = 0; v < x->size(); ++v) nh[e(v)] = h[v];
      chain.push_back(e);
      tags.push_back(tag);
      if (dfs(e.codomain_ptr(), nh, depth + 1)) return true;
      chain.pop_back();
      tags.pop_back();
      return false;
    };
    const Graph& g = *x;
    std::vector<int> rep(g.size());
    auto reset = [&] {
      for (int v = 0; v < g.size(); ++v) rep[v] = v;
    };
    for (int v = 0; v < g.size(); ++v) {
      if (v == g.root() || g.sord(v) != 1) continue;
      int p = g.parent(v), c = g.children(v)[0];
      int target_v = h[v] == h[p] ? p : (h[v] == h[c] ? c : -1);
      if (target_v < 0) continue;
      reset();
      rep[v] = target_v;
      if (step(quotient_map(x, rep), FactorTag::splitting_edge)) return true;
    }
    auto codes = cone_codes(g, &h);
    for (int v = 0; v < g.size(); ++v) {
      const auto& k = g.children(v);
      for (size_t i = 0; i < k.size(); ++i)
        for (size_t j = i + 1; j < k.size(); ++j) {
          if (codes[k[i]] != codes[k[j]]) continue;
          auto pairs = cone_iso(g, k[j], k[i], &h);
          reset();
          for (auto [from, to] : *pairs) rep[from] = to;
          if (step(quotient_map(x, rep), FactorTag::elementary_light_confluent)) return true;
        }
    }
    if (star) {
      for (int v = 0; v < g.size(); ++v) {
        if (v == g.root() || !g.children(v).empty() || h[v] != h[g.parent(v)]) continue;
        reset();
        rep[v] = g.parent(v);
        if (step(quotient_map(x, rep), FactorTag::adding_edge)) return true;
      }
    }
    dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

std::optional<Decomposition> brute_simple_confluent(const Morphism& f, int max_chain, bool star) {
  if (!f.domain().is_rooted_tree() || !f.codomain().is_rooted_tree())
    throw DomainError("brute_simple_confluent: rooted trees required");
  check_cap(f.domain().size());
  if (!is_epimorphism(f.domain(), f.codomain(), f.map())) return std::nullopt;
  Brute b{f.codomain_ptr(), max_chain, star, {}, {}, {}, nullptr, {}};
  if (!b.dfs(f.domain_ptr(), f.map(), 0)) return std::nullopt;
  Decomposition d;
  d.factors = std::move(b.chain);
  d.tags = std::move(b.tags);
  d.residual = Morphism(b.final_graph, f.codomain_ptr(), b.final_h);
  d.composite = f;
  if (!is_isomorphism(d.residual)) return std::nullopt;
  return d;
}

bool is_hereditarily_unicoherent(const Graph& g) {
  check_cap(g.size());
  int n = g.size();
  auto edges = g.edges();
  int m = static_cast<int>(edges.size());
  if (m > 28) throw DomainError("is_hereditarily_unicoherent: too many edges");
  // a connected subgraph may be replaced by a spanning tree of it without
  // changing the vertex set of an intersection, so trees suffice
  struct Sub {
    uint32_t vs;
    uint32_t es;
  };
  std::vector<Sub> subs;
  for (int v = 0; v < n; ++v) subs.push_back({1u << v, 0});
  auto connected = [&](uint32_t vs, uint32_t es) {
    if (vs == 0) return true;
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (int e = 0; e < m; ++e)
      if (es >> e & 1) parent[find(edges[e].first)] = find(edges[e].second);
    int r = -1;
    for (int v = 0; v < n; ++v) {
      if (!(vs >> v & 1)) continue;
      if (r < 0)
        r = find(v);
      else if (find(v) != r)
        return false;
    }
    return true;
  };
  for (uint64_t es = 1; es < (uint64_t{1} << m); ++es) {
    uint32_t vs = 0;
    int ne = 0;
    for (int e = 0; e < m; ++e)
      if (es >> e & 1) {
        vs |= 1u << edges[e].first;
        vs |= 1u << edges[e].second;
        ++ne;
      }
    if (__builtin_popcount(vs) != ne + 1) continue;
    if (!connected(vs, static_cast<uint32_t>(es))) continue;
    subs.push_back({vs, static_cast<uint32_t>(es)});
  }
  for (size_t i = 0; i < subs.size(); ++i)
    for (size_t j = i + 1; j < subs.size(); ++j)
      if (!connected(subs[i].vs & subs[j].vs, subs[i].es & subs[j].es)) return false;
  return true;
}

std::optional<AmalgamResult> search_amalgam(const Morphism& f, const Morphism& g, const AmalgamSpec& spec,
                                            int max_v, SearchStats* stats) {
  if (max_v > 10) throw DomainError("search_amalgam: bound exceeds 10");
  if (!same_graph(f.codomain(), g.codomain())) throw DomainError("search_amalgam: codomain mismatch");
  const Graph& B = f.domain();
  const Graph& C = g.domain();
  if (spec.rooted && (!B.is_rooted_tree() || !C.is_rooted_tree()))
    throw DomainError("search_amalgam: rooted spec needs rooted trees");
  // product vertices
  std::vector<std::pair<int, int>> pv;
  for (int b = 0; b < B.size(); ++b)
    for (int c = 0; c < C.size(); ++c)
      if (f(b) == g(c)) pv.emplace_back(b, c);
  int np = static_cast<int>(pv.size());
  auto close = [&](int x, int y) {
    auto [b1, c1] = pv[x];
    auto [b2, c2] = pv[y];
    return (b1 == b2 || B.adjacent(b1, b2)) && (c1 == c2 || C.adjacent(c1, c2));
  };
  std::vector<std::vector<int>> nbh(np);
  for (int x = 0; x < np; ++x)
    for (int y = 0; y < np; ++y)
      if (close(x, y)) nbh[x].push_back(y);
  int root_p = -1;
  if (spec.rooted)
    for (int x = 0; x < np; ++x)
      if (pv[x].first == B.root() && pv[x].second == C.root()) root_p = x;
  int lo = std::max(B.size(), C.size());
  std::vector<GraphPtr> shapes;
  if (!spec.tree)
    shapes = enumerate_connected_graphs(std::min(max_v, oracle_cap()), lo);
  else if (spec.rooted)
    shapes = rooted_trees_unchecked(max_v, lo);
  else
    shapes = trees_unchecked(max_v, lo);
  for (const auto& shape : shapes) {
    if (stats) ++stats->shapes;
    const Graph& D = *shape;
    int n = D.size();
    std::vector<int> order, bfs_parent(n, -1);
    {
      std::vector<char> seen(n, 0);
      int start = spec.rooted ? D.root() : 0;
      order.push_back(start);
      seen[start] = 1;
      for (size_t h = 0; h < order.size(); ++h)
        for (int w : D.adj(order[h]))
          if (!seen[w]) {
            seen[w] = 1;
            bfs_parent[w] = order[h];
            order.push_back(w);
          }
    }
    std::vector<int> img(n, -1);
    std::vector<int> topb(B.size(), 0), topc(C.size(), 0), covb(B.size(), 0), covc(C.size(), 0);
    int missb = B.size(), missc = C.size();
    std::optional<AmalgamResult> found;
    bool prune_mono = spec.monotone && spec.tree;
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
      if (static_cast<int>(n - i) < std::max(missb, missc)) return false;
      if (i == order.size()) {
        if (stats) ++stats->candidates;
        std::vector<int> mb(n), mc(n);
        for (int v = 0; v < n; ++v) {
          mb[v] = pv[img[v]].first;
          mc[v] = pv[img[v]].second;
        }
        if (!is_epimorphism(D, B, mb) || !is_epimorphism(D, C, mc)) return false;
        Morphism f0(shape, f.domain_ptr(), mb), g0(shape, g.domain_ptr(), mc);
        for (const Morphism* leg : {&f0, &g0}) {
          if (spec.monotone && !is_monotone(*leg)) return false;
          if (spec.light && !is_light(*leg)) return false;
          if (spec.confluent && !is_confluent(*leg)) return false;
        }
        found = AmalgamResult{shape, f0, g0};
        return true;
      }
      int v = order[i];
      std::vector<int> cand;
      if (i == 0) {
        if (spec.rooted) {
          cand.push_back(root_p);
        } else {
          for (int x = 0; x < np; ++x) cand.push_back(x);
        }
      } else {
        cand = nbh[img[bfs_parent[v]]];
      }
      for (int x : cand) {
        if (x < 0) continue;
        bool ok = true;
        for (int w : D.adj(v))
          if (img[w] >= 0 && !close(img[w], x)) ok = false;
        if (!ok) continue;
        auto [b, c] = pv[x];
        int pb = -1, pc = -1;
        if (i > 0) {
          pb = pv[img[bfs_parent[v]]].first;
          pc = pv[img[bfs_parent[v]]].second;
          if (spec.rooted) {
            if (b != pb && (b == B.root() || B.parent(b) != pb)) continue;
            if (c != pc && (c == C.root() || C.parent(c) != pc)) continue;
          }
        }
        bool newtb = false, newtc = false;
        if (prune_mono) {
          if (i == 0 || b != pb) {
            if (topb[b]) continue;
            newtb = true;
          }
          if (i == 0 || c != pc) {
            if (topc[c]) continue;
            newtc = true;
          }
        }
        img[v] = x;
        if (newtb) topb[b] = 1;
        if (newtc) topc[c] = 1;
        if (covb[b]++ == 0) --missb;
        if (covc[c]++ == 0) --missc;
        bool done = rec(i + 1);
        if (--covb[b] == 0) ++missb;
        if (--covc[c] == 0) ++missc;
        if (newtb) topb[b] = 0;
        if (newtc) topc[c] = 0;
        img[v] = -1;
        if (done) return true;
      }
      return false;
    };
    if (rec(0)) return found;
  }
  return std::nullopt;
}

ExtensionOutcome check_extension(const Stages& stages, const Morphism& phi, int m, int horizon,
                                 const EnumerationSpec& spec) {
  int count = static_cast<int>(stages.trees.size());
  if (m < 1 || m > count) throw DomainError("check_extension: stage index out of range");
  if (!same_graph(phi.codomain(), *stages.trees[m - 1])) throw DomainError("check_extension: phi must map onto stage m");
  const Graph& A = phi.domain();
  if (!A.is_rooted_tree()) throw DomainError("check_extension: rooted trees required");
  // alpha: stage n -> stage m, built incrementally
  std::vector<int> alpha(stages.trees[m - 1]->size());
  for (size_t i = 0; i < alpha.size(); ++i) alpha[i] = static_cast<int>(i);
  auto pre = phi.fibers();
  for (int n = m; n <= std::min(horizon, count); ++n) {
    if (n > m) {
      const Morphism& step = stages.maps[n - 2];
      std::vector<int> next(step.domain().size());
      for (int v = 0; v < step.domain().size(); ++v) next[v] = alpha[step(v)];
      alpha = std::move(next);
    }
    const GraphPtr& T = stages.trees[n - 1];
    std::vector<int> psi(T->size(), -1);
    std::optional<Morphism> hit;
    const auto& order = T->tree()->preorder;
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
      if (i == order.size()) {
        if (!is_epimorphism(*T, A, psi)) return false;
        Morphism cand(T, phi.domain_ptr(), psi);
        if (!satisfies(cand, spec)) return false;
        hit = cand;
        return true;
      }
      int v = order[i];
      for (int a : pre[alpha[v]]) {
        if (v == T->root()) {
          if (a != A.root()) continue;
        } else {
          int pa = psi[T->parent(v)];
          if (a != pa && (a == A.root() || A.parent(a) != pa)) continue;
        }
        psi[v] = a;
        if (rec(i + 1)) return true;
      }
      psi[v] = -1;
      return false;
    };
    if (rec(0)) return {ExtensionFound{n, *hit}, "found at stage " + std::to_string(n)};
  }
  return {std::nullopt, "horizon exhausted at " + std::to_string(std::min(horizon, count))};
}

}  // namespace fraisse
