#include "fraisse/canon.hpp"

#include <algorithm>
#include <map>

namespace fraisse {

std::vector<std::string> cone_codes(const Graph& t, const std::vector<int>* labels) {
  if (!t.is_rooted_tree()) throw DomainError("canonical code needs a rooted tree");
  const auto& pre = t.tree()->preorder;
  std::vector<std::string> code(t.size());
  std::vector<const std::string*> kids;
  for (auto it = pre.rbegin(); it != pre.rend(); ++it) {
    int v = *it;
    kids.clear();
    for (int c : t.children(v)) kids.push_back(&code[c]);
    std::sort(kids.begin(), kids.end(), [](auto* a, auto* b) { return *a < *b; });
    std::string s = "(";
    if (labels) {
      s += std::to_string((*labels)[v]);
      s += ':';
    }
    for (auto* k : kids) s += *k;
    s += ')';
    code[v] = std::move(s);
  }
  return code;
}

std::string canonical_code(const Graph& t, const std::vector<int>* labels) {
  return cone_codes(t, labels)[t.root()];
}

namespace {

void match_cones(const Graph& a, const Graph& b, const std::vector<std::string>& ca,
                 const std::vector<std::string>& cb, int u, int w, std::vector<std::pair<int, int>>& out) {
  out.emplace_back(u, w);
  auto ka = a.children(u);
  auto kb = b.children(w);
  std::sort(ka.begin(), ka.end(), [&](int x, int y) { return ca[x] < ca[y]; });
  std::sort(kb.begin(), kb.end(), [&](int x, int y) { return cb[x] < cb[y]; });
  for (size_t i = 0; i < ka.size(); ++i) match_cones(a, b, ca, cb, ka[i], kb[i], out);
}

}  // namespace

std::optional<std::vector<int>> rooted_iso(const Graph& a, const Graph& b, const std::vector<int>* la,
                                           const std::vector<int>* lb) {
  if (a.size() != b.size()) return std::nullopt;
  auto ca = cone_codes(a, la);
  auto cb = cone_codes(b, lb);
  if (ca[a.root()] != cb[b.root()]) return std::nullopt;
  std::vector<std::pair<int, int>> pairs;
  match_cones(a, b, ca, cb, a.root(), b.root(), pairs);
  std::vector<int> map(a.size(), -1);
  for (auto [x, y] : pairs) map[x] = y;
  return map;
}

bool iso_rooted(const Graph& a, const Graph& b) {
  return a.size() == b.size() && canonical_code(a) == canonical_code(b);
}

std::optional<std::vector<std::pair<int, int>>> cone_iso(const Graph& t, int u, int w,
                                                         const std::vector<int>* labels) {
  auto c = cone_codes(t, labels);
  if (c[u] != c[w]) return std::nullopt;
  std::vector<std::pair<int, int>> pairs;
  match_cones(t, t, c, c, u, w, pairs);
  return pairs;
}

std::string unrooted_tree_code(const Graph& t) {
  if (!is_tree(t)) throw DomainError("unrooted_tree_code needs a tree");
  int n = t.size();
  if (n == 1) return "()";
  std::vector<int> deg(n);
  std::vector<int> layer;
  for (int v = 0; v < n; ++v) {
    deg[v] = t.ord(v);
    if (deg[v] <= 1) layer.push_back(v);
  }
  int remaining = n;
  while (remaining > 2) {
    remaining -= static_cast<int>(layer.size());
    std::vector<int> next;
    for (int v : layer)
      for (int w : t.adj(v))
        if (--deg[w] == 1) next.push_back(w);
    layer = std::move(next);
  }
  std::string best;
  for (int c : layer) {
    auto s = canonical_code(t.with_root(c));
    if (best.empty() || s < best) best = s;
  }
  return best;
}

namespace {

int refine(const Graph& g, std::vector<int>& col) {
  int n = g.size();
  int classes = 0;
  {
    auto tmp = col;
    std::sort(tmp.begin(), tmp.end());
    classes = static_cast<int>(std::unique(tmp.begin(), tmp.end()) - tmp.begin());
  }
  while (true) {
    std::vector<std::pair<std::vector<int>, int>> sig(n);
    for (int v = 0; v < n; ++v) {
      auto& s = sig[v].first;
      s.push_back(col[v]);
      std::vector<int> nb;
      for (int w : g.adj(v)) nb.push_back(col[w]);
      std::sort(nb.begin(), nb.end());
      s.insert(s.end(), nb.begin(), nb.end());
      sig[v].second = v;
    }
    std::vector<std::vector<int>> keys;
    for (auto& s : sig) keys.push_back(s.first);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (int v = 0; v < n; ++v)
      col[v] = static_cast<int>(std::lower_bound(keys.begin(), keys.end(), sig[v].first) - keys.begin());
    int now = static_cast<int>(keys.size());
    if (now == classes) return now;
    classes = now;
  }
}

void ir_search(const Graph& g, std::vector<int> col, std::string& best) {
  int n = g.size();
  int classes = refine(g, col);
  if (classes == n) {
    std::vector<int> at(n);
    for (int v = 0; v < n; ++v) at[col[v]] = v;
    std::string s(static_cast<size_t>(n) * (n - 1) / 2, '0');
    size_t k = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s[k++] = g.adjacent(at[i], at[j]) ? '1' : '0';
    if (best.empty() || s < best) best = s;
    return;
  }
  std::vector<int> count(classes, 0);
  for (int v = 0; v < n; ++v) count[col[v]]++;
  int target = 0;
  while (count[target] < 2) ++target;
  for (int v = 0; v < n; ++v) {
    if (col[v] != target) continue;
    std::vector<int> c2(n);
    for (int w = 0; w < n; ++w) c2[w] = 2 * col[w];
    c2[v] += 1;
    ir_search(g, c2, best);
  }
}

}  // namespace

std::string graph_canonical_code(const Graph& g) {
  std::string best;
  if (g.size() == 0) return "0:";
  ir_search(g, std::vector<int>(g.size(), 0), best);
  return std::to_string(g.size()) + ":" + best;
}

std::string refinement_invariant(const Graph& g) {
  int n = g.size();
  std::vector<int> col(n, 0);
  refine(g, col);
  std::vector<std::string> sig;
  for (int v = 0; v < n; ++v) {
    std::vector<int> nb;
    for (int w : g.adj(v)) nb.push_back(col[w]);
    std::sort(nb.begin(), nb.end());
    std::string s = std::to_string(col[v]) + "[";
    for (int x : nb) s += std::to_string(x) + ",";
    sig.push_back(s + "]");
  }
  std::sort(sig.begin(), sig.end());
  std::string out = std::to_string(n) + "/" + std::to_string(g.edge_count()) + ":";
  for (auto& s : sig) out += s;
  return out;
}

}  // namespace fraisse
