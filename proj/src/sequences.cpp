#include "fraisse/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "fraisse/amalgamate.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/factorize.hpp"

namespace fraisse {

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

void require_rooted(const GraphPtr& t, const char* who) {
  if (!t->is_rooted_tree()) throw DomainError(std::string(who) + ": rooted tree required");
}

// unfold t from its root: plan(v) lists the t-children each new child copies.
// output vertices get path names rooted at the name of t's root
Built unfold(const GraphPtr& t, const std::function<std::vector<int>(int)>& plan) {
  GraphBuilder b;
  std::vector<int> image;
  int r = b.add_vertex(t->name(t->root()));
  b.set_root(r);
  image.push_back(t->root());
  std::vector<std::pair<int, int>> stack{{r, t->root()}};
  while (!stack.empty()) {
    auto [id, v] = stack.back();
    stack.pop_back();
    auto kids = plan(v);
    std::string base = b.name(id);
    for (size_t i = 0; i < kids.size(); ++i) {
      int c = b.add_vertex(base + "." + std::to_string(i));
      b.add_edge(id, c);
      image.push_back(kids[i]);
      stack.emplace_back(c, kids[i]);
    }
  }
  auto res = b.build();
  GraphPtr S = share(std::move(res.graph));
  std::vector<int> m(S->size());
  for (size_t i = 0; i < image.size(); ++i) m[res.index[i]] = image[i];
  return {S, Morphism(S, t, std::move(m))};
}

}  // namespace

Built double_split(const GraphPtr& t) {
  require_rooted(t, "double_split");
  const Graph& T = *t;
  GraphBuilder b;
  std::set<std::string> taken(T.names().begin(), T.names().end());
  auto fresh = [&](std::string s) {
    while (taken.count(s)) s += "'";
    taken.insert(s);
    return s;
  };
  std::vector<int> image;
  for (int v = 0; v < T.size(); ++v) {
    b.add_vertex(T.name(v));
    image.push_back(v);
  }
  b.set_root(T.root());
  for (auto [x, y] : T.edges()) {
    int ex = b.add_vertex(fresh(T.name(x) + "~" + T.name(y)));
    image.push_back(x);
    int ey = b.add_vertex(fresh(T.name(y) + "~" + T.name(x)));
    image.push_back(y);
    b.add_edge(x, ex);
    b.add_edge(ex, ey);
    b.add_edge(ey, y);
  }
  auto res = b.build();
  GraphPtr S = share(std::move(res.graph));
  std::vector<int> m(S->size());
  for (size_t i = 0; i < image.size(); ++i) m[res.index[i]] = image[i];
  return {S, Morphism(S, t, std::move(m))};
}

Built multiply_branches(const GraphPtr& t, int n) {
  require_rooted(t, "multiply_branches");
  const Graph& T = *t;
  if (n < 1) throw DomainError("multiply_branches: n must be positive");
  long long l = 1;
  for (int v = 0; v < T.size(); ++v)
    if (T.sord(v) > 0) l = std::lcm(l, static_cast<long long>(T.sord(v)));
  if (n % l != 0)
    throw DomainError("multiply_branches: n = " + std::to_string(n) + " is not divisible by " + std::to_string(l));
  return unfold(t, [&](int v) {
    const auto& ch = T.children(v);
    std::vector<int> out;
    if (ch.empty()) return out;
    for (int j = 0; j < n / static_cast<int>(ch.size()); ++j) out.insert(out.end(), ch.begin(), ch.end());
    return out;
  });
}

Built colored_add_branches(const GraphPtr& t, const std::vector<std::vector<int>>& colors, int n) {
  require_rooted(t, "colored_add_branches");
  const Graph& T = *t;
  if (colors.size() != static_cast<size_t>(T.size()))
    throw DomainError("colored_add_branches: one colouring per vertex required");
  long long l = 1;
  std::vector<std::vector<std::vector<int>>> classes(T.size());
  for (int v = 0; v < T.size(); ++v) {
    const auto& ch = T.children(v);
    if (ch.empty()) continue;
    std::vector<int> c = colors[v].empty() ? std::vector<int>(ch.size(), 0) : colors[v];
    if (c.size() != ch.size()) throw DomainError("colored_add_branches: colouring size mismatch at " + T.name(v));
    int k = *std::max_element(c.begin(), c.end()) + 1;
    classes[v].assign(k, {});
    for (size_t i = 0; i < ch.size(); ++i) {
      if (c[i] < 0) throw DomainError("colored_add_branches: negative colour");
      classes[v][c[i]].push_back(ch[i]);
    }
    for (int i = 0; i < k; ++i) {
      if (classes[v][i].empty())
        throw DomainError("colored_add_branches: colouring at " + T.name(v) + " is not onto an initial segment");
      if (static_cast<int>(classes[v][i].size()) > n)
        throw DomainError("colored_add_branches: n is smaller than a colour class");
    }
    l = std::lcm(l, static_cast<long long>(k));
  }
  if (n % l != 0) throw DomainError("colored_add_branches: n is not divisible by the colour counts");
  for (int v = 0; v < T.size(); ++v) {
    int k = static_cast<int>(classes[v].size());
    for (int i = 0; i < k; ++i)
      if (static_cast<int>(classes[v][i].size()) > n / k)
        throw DomainError("colored_add_branches: colour class at " + T.name(v) + " exceeds n/k");
  }
  return unfold(t, [&](int v) {
    std::vector<int> out;
    int k = static_cast<int>(classes[v].size());
    for (int i = 0; i < k; ++i) {
      const auto& cl = classes[v][i];
      out.insert(out.end(), cl.begin(), cl.end());
      for (int j = static_cast<int>(cl.size()); j < n / k; ++j) out.push_back(cl.front());
    }
    return out;
  });
}

// ---- the sequence ----

namespace {

long long g_cap = -1;
std::mutex g_mutex;

struct StageData {
  GraphPtr A;
  std::optional<Built> d, u;  // d: d(A_m) -> A_m, u: A_{m+1} -> d(A_m)
  std::optional<Morphism> f;  // A_{m+1} -> A_m
};
std::map<int, StageData>& stages() {
  static std::map<int, StageData> s;
  return s;
}

long long cap_value();

void check_cap(int m) {
  long double p = projected_stage_size(m);
  if (p >= static_cast<long double>(cap_value())) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3Le", p);
    throw DomainError("materialization cap exceeded: A_" + std::to_string(m) + " has a projected " + buf +
                      " vertices (cap " + std::to_string(cap_value()) + ")");
  }
}

StageData& stage_locked(int m) {
  if (m < 1) throw DomainError("stage index must be >= 1");
  auto& s = stages();
  auto it = s.find(m);
  if (it != s.end()) return it->second;
  check_cap(m);
  if (m == 1) {
    StageData d;
    d.A = regular_tree(1, 2);
    return s[1] = d;
  }
  StageData& prev = stage_locked(m - 1);
  if (!prev.d) prev.d = double_split(prev.A);
  const Built& d = *prev.d;
  Built u = multiply_branches(d.tree, 1 << m);
  prev.u = u;
  prev.f = compose(d.map, u.map);
  StageData cur;
  cur.A = u.tree;
  return s[m] = cur;
}

}  // namespace

namespace {
// callers hold g_mutex
long long cap_value() {
  if (g_cap < 0) {
    g_cap = 1000000;
    if (const char* e = std::getenv("FRAISSE_CAP")) {
      char* end = nullptr;
      long long v = std::strtoll(e, &end, 10);
      if (end != e && v > 0) g_cap = v;
    }
  }
  return g_cap;
}
}  // namespace

long long materialization_cap() {
  std::lock_guard<std::mutex> lk(g_mutex);
  return cap_value();
}

void set_materialization_cap(long long cap) {
  std::lock_guard<std::mutex> lk(g_mutex);
  g_cap = cap;
}

long double projected_stage_size(int m) {
  if (m < 1) return 0;
  long double h = std::pow(3.0L, m - 1), s = std::pow(2.0L, m);
  long double total = 0, term = 1;
  for (long double i = 0; i <= h; i += 1) {
    total += term;
    term *= s;
    if (total > 1e30L) return total;
  }
  return total;
}

GraphPtr fraisse_stage(int m) {
  std::lock_guard<std::mutex> lk(g_mutex);
  return stage_locked(m).A;
}

Morphism fraisse_map(int m) {
  std::lock_guard<std::mutex> lk(g_mutex);
  stage_locked(m + 1);
  return *stage_locked(m).f;
}

Built fraisse_double(int m) {
  std::lock_guard<std::mutex> lk(g_mutex);
  StageData& st = stage_locked(m);
  if (!st.d) st.d = double_split(st.A);
  return *st.d;
}

Built fraisse_multiply(int m) {
  std::lock_guard<std::mutex> lk(g_mutex);
  stage_locked(m + 1);
  return *stage_locked(m).u;
}

Morphism fraisse_bond(int n, int m) {
  if (n < m || m < 1) throw DomainError("fraisse_bond: need 1 <= m <= n");
  Morphism h = Morphism::identity(fraisse_stage(n));
  for (int i = n - 1; i >= m; --i) h = compose(fraisse_map(i), h);
  return h;
}

Thresholds internchar_thresholds(int m, int n) {
  if (m < 1 || n < m) throw DomainError("internchar: need 1 <= m <= n");
  int k = static_cast<int>(ipow(3, m - 1));
  long long p = ipow(3, n - m);
  int up = static_cast<int>((p + 1) / 2), flat = static_cast<int>((p - 1) / 2);
  Thresholds th;
  th.t.assign(k + 1, 0);
  th.s.assign(k + 1, 0);
  th.t[0] = 0;
  th.s[0] = flat;
  for (int i = 1; i <= k; ++i) {
    th.t[i] = th.s[i - 1] + up;
    th.s[i] = i == k ? th.t[i] : th.t[i] + flat;
  }
  return th;
}

InternCharReport verify_internchar(const Morphism& h, int m, int n) {
  InternCharReport rep;
  const Graph& An = h.domain();
  const Graph& Am = h.codomain();
  auto ra = is_regular(An), rb = is_regular(Am);
  if (!An.is_rooted_tree() || !Am.is_rooted_tree() || !ra.regular || !rb.regular ||
      ra.height != ipow(3, n - 1) || rb.height != ipow(3, m - 1) || ra.sord != ipow(2, n) || rb.sord != ipow(2, m))
    throw DomainError("verify_internchar: stage mismatch");
  rep.th = internchar_thresholds(m, n);
  const auto& t = rep.th.t;
  const auto& s = rep.th.s;
  int k = static_cast<int>(t.size()) - 1;
  if (!h.report().confluent) {
    rep.failure = "not confluent";
    return rep;
  }
  // clause 1: height bands
  for (int b = 0; b < An.size(); ++b) {
    int i = Am.ht(h(b)), hb = An.ht(b);
    bool in = i == 0 ? hb <= s[0] : (hb > s[i - 1] && hb <= s[i]);
    if (!in) {
      rep.failure = "clause 1 fails at " + An.name(b);
      return rep;
    }
  }
  // clauses 2 and 3
  int ratio = ra.sord / rb.sord;
  std::vector<char> special(An.size(), 0);
  for (int a = 0; a < Am.size(); ++a) {
    if (Am.sord(a) == 0) continue;
    for (const auto& sv : special_vertices(h, a)) {
      special[sv.q] = 1;
      std::map<int, int> count;
      for (int x : sv.alpha) ++count[x];
      for (int x : Am.children(a))
        if (count[x] != ratio) {
          rep.failure = "clause 3 fails at " + An.name(sv.q);
          return rep;
        }
    }
  }
  for (int b = 0; b < An.size(); ++b) {
    int i = Am.ht(h(b));
    if (i >= k) continue;
    if ((An.ht(b) == t[i]) != static_cast<bool>(special[b])) {
      rep.failure = "clause 2 fails at " + An.name(b);
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

// ---- extension over the sequence ----

namespace {

int stage_index(const Graph& t) {
  auto r = is_regular(t);
  if (!t.is_rooted_tree() || !r.regular) return -1;
  for (int m = 1; m < 20; ++m)
    if (r.height == ipow(3, m - 1) && r.sord == ipow(2, m)) return m;
  return -1;
}

struct Analysis {
  int m = 0;
  std::vector<char> special;       // S vertex special for its image
  std::vector<SpecialVertex> sv;   // per S vertex (valid when special)
  std::vector<int> front;          // per S vertex p: ht(p) - ht(t(p)) if p is some s_i, else -1
  std::vector<int> back;           // per S vertex c: ht(c) - ht(s_{i-1}) if c is some t_i (i >= 1), else -1
  int beta_s = 0, beta_t = 0;
  long long gamma = 1;
};

Analysis analyse_phi(const Morphism& phi) {
  const Graph& S = phi.domain();
  const Graph& A = phi.codomain();
  if (!S.is_rooted_tree() || !A.is_rooted_tree()) throw DomainError("extend_over: rooted trees required");
  Analysis an;
  an.m = stage_index(A);
  if (an.m < 1) throw DomainError("extend_over: codomain is not a stage of the sequence");
  if (!decompose_simple_confluent(phi)) throw DomainError("extend_over: phi is not simple-confluent");
  an.special.assign(S.size(), 0);
  an.sv.assign(S.size(), {});
  for (int a = 0; a < A.size(); ++a) {
    if (A.sord(a) == 0) continue;
    for (auto& sv : special_vertices(phi, a)) {
      an.special[sv.q] = 1;
      an.sv[sv.q] = sv;
    }
  }
  if (!an.special[S.root()]) throw DomainError("extend_over: the root of S is not special for the root");
  an.front.assign(S.size(), -1);
  an.back.assign(S.size(), -1);
  for (int v = 0; v < S.size(); ++v) {
    int a = phi(v);
    // v is an s_i when some child leaves the fibre
    bool leaves = false;
    for (int c : S.children(v))
      if (phi(c) != a) leaves = true;
    if (leaves) {
      int t = v;
      while (t >= 0 && !(an.special[t] && phi(t) == a)) t = S.parent(t);
      if (t < 0) throw DomainError("extend_over: no special vertex below " + S.name(v));
      an.front[v] = S.ht(v) - S.ht(t);
      an.beta_s = std::max(an.beta_s, an.front[v]);
    }
    bool is_t = v != S.root() && ((A.sord(a) > 0 && an.special[v]) || (A.sord(a) == 0 && S.sord(v) == 0));
    if (is_t) {
      int pa = A.parent(a);
      int s = S.parent(v);
      while (s >= 0 && phi(s) != pa) s = S.parent(s);
      if (s < 0) throw DomainError("extend_over: broken branch at " + S.name(v));
      an.back[v] = S.ht(v) - S.ht(s);
      an.beta_t = std::max(an.beta_t, an.back[v]);
    }
    if (S.sord(v) > 0) {
      long long g = S.sord(v);
      if (an.special[v]) {
        std::map<int, int> cnt;
        int mx = 0;
        for (int x : an.sv[v].alpha) mx = std::max(mx, ++cnt[x]);
        g = static_cast<long long>(A.sord(a)) * mx;
      }
      an.gamma = std::max(an.gamma, g);
    }
  }
  return an;
}

int degree_for(const Analysis& an) {
  for (int n = an.m;; ++n) {
    long long p = ipow(3, n - an.m);
    if ((p - 1) / 2 >= an.beta_s && (p + 1) / 2 >= an.beta_t && ipow(2, n) >= an.gamma) return n;
    if (n > 40) throw DomainError("extend_over: no admissible n");
  }
}

}  // namespace

int extension_degree(const Morphism& phi) { return degree_for(analyse_phi(phi)); }

Extension extend_over(const Morphism& phi) {
  Analysis an = analyse_phi(phi);
  const Graph& S = phi.domain();
  const Graph& A = phi.codomain();
  Extension ex;
  ex.m = an.m;
  ex.n = degree_for(an);
  ex.beta_s = an.beta_s;
  ex.beta_t = an.beta_t;
  ex.gamma = an.gamma;
  check_cap(ex.n);
  long long p = ipow(3, ex.n - ex.m);
  int flat = static_cast<int>((p - 1) / 2), up = static_cast<int>((p + 1) / 2);

  // claim 1: R from S by inserting vertices on edges
  GraphBuilder b;
  std::vector<int> image;
  std::set<std::string> taken(S.names().begin(), S.names().end());
  for (int v = 0; v < S.size(); ++v) {
    b.add_vertex(S.name(v));
    image.push_back(v);
  }
  b.set_root(S.root());
  // first R-vertex on the edge towards each S child
  std::vector<int> lead(S.size(), -1);
  for (int c = 0; c < S.size(); ++c) {
    if (c == S.root()) continue;
    int pp = S.parent(c);
    int nf = 0, nb = 0;
    if (an.front[pp] >= 0 && phi(c) != phi(pp)) nf = flat - an.front[pp];
    if (an.back[c] >= 0) nb = up - an.back[c];
    if (nf < 0 || nb < 0) throw DomainError("extend_over: inadmissible degree");
    int prev = pp;
    auto insert = [&](int target, int idx) {
      std::string nm = S.name(pp) + "~" + S.name(c) + "~" + std::to_string(idx);
      while (taken.count(nm)) nm += "'";
      taken.insert(nm);
      int id = b.add_vertex(nm);
      image.push_back(target);
      b.add_edge(prev, id);
      if (lead[c] < 0) lead[c] = id;
      prev = id;
    };
    for (int i = 0; i < nf; ++i) insert(pp, i);
    for (int i = 0; i < nb; ++i) insert(c, nf + i);
    b.add_edge(prev, c);
    if (lead[c] < 0) lead[c] = c;
  }
  auto res = b.build();
  GraphPtr R = share(std::move(res.graph));
  std::vector<int> g1map(R->size());
  for (size_t i = 0; i < image.size(); ++i) g1map[res.index[i]] = image[i];
  ex.g1 = Morphism::make(R, phi.domain_ptr(), std::move(g1map));

  // claim 2: colourings transported to R, then coloured adding branches
  std::vector<std::vector<int>> colors(R->size());
  for (int v = 0; v < S.size(); ++v) {
    if (!an.special[v]) continue;
    int a = phi(v);
    const auto& ach = A.children(a);
    std::map<int, int> rho;
    for (size_t i = 0; i < ach.size(); ++i) rho[ach[i]] = static_cast<int>(i);
    std::map<int, int> col;  // R child -> colour
    const auto& sch = S.children(v);
    for (size_t i = 0; i < sch.size(); ++i) col[res.index[lead[sch[i]]]] = rho.at(an.sv[v].alpha[i]);
    int rv = res.index[v];
    for (int c : R->children(rv)) colors[rv].push_back(col.at(c));
  }
  Built q = colored_add_branches(R, colors, 1 << ex.n);
  GraphPtr An = fraisse_stage(ex.n);
  Morphism h = compose(phi, compose(ex.g1, q.map));
  Morphism target = fraisse_bond(ex.n, ex.m);
  // Q carries path names; match it to A_n respecting the maps down to A_m
  auto sigma = rooted_iso(*An, *q.tree, &target.map(), &h.map());
  if (!sigma) throw DomainError("extend_over: the coloured tree over A_m is not A_n with f^n_m");
  ex.g2 = compose(q.map, Morphism(An, q.tree, *sigma));
  ex.g = compose(ex.g1, ex.g2);
  return ex;
}

// ---- the A_{nk} grid ----

Morphism double_split_lift(const Morphism& f, const Morphism& dB, const Morphism& dA) {
  const Graph& B = f.domain();
  const Graph& A = f.codomain();
  const Graph& DB = dB.domain();
  const Graph& DA = dA.domain();
  if (!same_graph(dB.codomain(), B) || !same_graph(dA.codomain(), A)) throw DomainError("double_split_lift: maps do not match");
  auto original = [](const Graph& big, const Morphism& d, int w) { return big.name(w) == d.codomain().name(d(w)); };
  // inner vertex of dA on the edge from a towards b, next to a
  auto inner = [&](int a, int b) {
    int wa = DA.index(A.name(a));
    for (int x : DA.adj(wa)) {
      if (original(DA, dA, x)) continue;
      for (int y : DA.adj(x))
        if (y != wa && !original(DA, dA, y) && dA(y) == b) return x;
    }
    throw DomainError("double_split_lift: no subdivided edge " + A.name(a) + "-" + A.name(b));
  };
  std::vector<int> m(DB.size());
  for (int w = 0; w < DB.size(); ++w) {
    int a = dB(w);
    if (original(DB, dB, w)) {
      m[w] = DA.index(A.name(f(a)));
      continue;
    }
    int b = -1;
    for (int y : DB.adj(w))
      if (!original(DB, dB, y)) b = dB(y);
    if (f(a) == f(b)) throw DomainError("double_split_lift: the lower map is not light");
    m[w] = inner(f(a), f(b));
  }
  return Morphism::make(dB.domain_ptr(), dA.domain_ptr(), std::move(m));
}

namespace {

std::map<std::pair<int, int>, Built>& grid_doubles() {
  static std::map<std::pair<int, int>, Built> m;
  return m;
}
std::map<std::pair<int, int>, Morphism>& grid_verticals() {
  static std::map<std::pair<int, int>, Morphism> m;
  return m;
}
std::recursive_mutex g_grid;

}  // namespace

Morphism grid_horizontal(int n, int k) {
  std::lock_guard<std::recursive_mutex> lk(g_grid);
  if (n < 1 || k < n) throw DomainError("grid: need 1 <= n <= k");
  auto key = std::make_pair(n, k);
  auto& dm = grid_doubles();
  auto it = dm.find(key);
  if (it != dm.end()) return it->second.map;
  Built d = k == n ? fraisse_double(n) : double_split(grid_tree(n, k));
  if (d.tree->size() >= materialization_cap()) throw DomainError("grid: materialization cap exceeded");
  dm.emplace(key, d);
  return d.map;
}

GraphPtr grid_tree(int n, int k) {
  std::lock_guard<std::recursive_mutex> lk(g_grid);
  if (n < 1 || k < n) throw DomainError("grid: need 1 <= n <= k");
  if (k == n) return fraisse_stage(n);
  return grid_horizontal(n, k - 1).domain_ptr();
}

Morphism grid_vertical(int n, int k) {
  std::lock_guard<std::recursive_mutex> lk(g_grid);
  if (n < 1 || k < n + 1) throw DomainError("grid: vertical maps need n < k");
  auto key = std::make_pair(n, k);
  auto& vm = grid_verticals();
  auto it = vm.find(key);
  if (it != vm.end()) return it->second;
  Morphism out;
  if (k == n + 1) {
    out = fraisse_multiply(n).map;
  } else {
    Morphism f = grid_vertical(n, k - 1);    // A_{(n+1)(k-1)} -> A_{n(k-1)}
    Morphism g = grid_horizontal(n, k - 1);  // A_{nk} -> A_{n(k-1)}
    Morphism d = grid_horizontal(n + 1, k - 1);  // A_{(n+1)k} -> A_{(n+1)(k-1)}
    out = double_split_lift(f, d, g);
    if (!commutes(f, g, d, out)) throw DomainError("grid: square does not commute");
  }
  vm.emplace(key, out);
  return out;
}

}  // namespace fraisse
