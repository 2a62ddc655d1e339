#include "fraisse/graph.hpp"

#include <algorithm>
#include <numeric>

namespace fraisse {

Graph Graph::from_names(std::vector<std::string> vertices,
                        const std::vector<std::pair<std::string, std::string>>& edges,
                        std::optional<std::string> root) {
  GraphBuilder b;
  for (auto& v : vertices) b.add_vertex(std::move(v));
  for (const auto& [x, y] : edges) {
    int ix = b.id(x), iy = b.id(y);
    if (ix < 0 || iy < 0) throw DomainError("edge endpoint is not a vertex: " + (ix < 0 ? x : y));
    if (ix == iy) throw DomainError("edge list contains a loop at " + x);
    b.add_edge(ix, iy);
  }
  if (root) {
    int r = b.id(*root);
    if (r < 0) throw DomainError("root is not a vertex: " + *root);
    b.set_root(r);
  }
  return b.build().graph;
}

int Graph::index(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == names_.end() || *it != name) return -1;
  return static_cast<int>(it - names_.begin());
}

bool Graph::adjacent(int u, int v) const {
  const auto& a = adj_[u];
  return std::binary_search(a.begin(), a.end(), v);
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(m_);
  for (int u = 0; u < size(); ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

int Graph::tree_height() const {
  int h = 0;
  for (int x : tree_->height) h = std::max(h, x);
  return h;
}

Graph Graph::with_root(int r) const {
  Graph g;
  g.names_ = names_;
  g.adj_ = adj_;
  g.m_ = m_;
  g.root_ = r;
  g.finalize();
  return g;
}

Graph Graph::without_root() const { return with_root(-1); }

void Graph::finalize() {
  tree_.reset();
  if (root_ < 0) return;
  int n = size();
  if (m_ != n - 1) return;
  auto info = std::make_shared<TreeInfo>();
  info->parent.assign(n, -2);
  info->children.assign(n, {});
  info->height.assign(n, 0);
  info->tin.assign(n, 0);
  info->tout.assign(n, 0);
  info->preorder.reserve(n);
  // iterative dfs
  std::vector<std::pair<int, size_t>> stack;
  info->parent[root_] = -1;
  stack.emplace_back(root_, 0);
  info->tin[root_] = 0;
  info->preorder.push_back(root_);
  int clock = 1;
  while (!stack.empty()) {
    auto& [v, i] = stack.back();
    if (i < adj_[v].size()) {
      int w = adj_[v][i++];
      if (w == info->parent[v]) continue;
      if (info->parent[w] != -2) return;  // cycle
      info->parent[w] = v;
      info->children[v].push_back(w);
      info->height[w] = info->height[v] + 1;
      info->tin[w] = clock++;
      info->preorder.push_back(w);
      stack.emplace_back(w, 0);
    } else {
      info->tout[v] = clock;
      stack.pop_back();
    }
  }
  if (static_cast<int>(info->preorder.size()) != n) return;
  tree_ = std::move(info);
}

int GraphBuilder::add_vertex(std::string name) {
  auto [it, fresh] = lookup_.emplace(name, static_cast<int>(names_.size()));
  if (!fresh) throw DomainError("duplicate vertex name: " + name);
  names_.push_back(std::move(name));
  return it->second;
}

int GraphBuilder::id(const std::string& name) const {
  auto it = lookup_.find(name);
  return it == lookup_.end() ? -1 : it->second;
}

void GraphBuilder::add_edge(int a, int b) {
  if (a == b) return;
  edges_.emplace_back(std::min(a, b), std::max(a, b));
}

GraphBuilder::Result GraphBuilder::build() const {
  int n = size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return names_[a] < names_[b]; });
  Result res;
  res.index.assign(n, -1);
  Graph& g = res.graph;
  g.names_.resize(n);
  for (int i = 0; i < n; ++i) {
    res.index[order[i]] = i;
    g.names_[i] = names_[order[i]];
  }
  g.adj_.assign(n, {});
  for (auto [a, b] : edges_) {
    int x = res.index[a], y = res.index[b];
    g.adj_[x].push_back(y);
    g.adj_[y].push_back(x);
  }
  int m2 = 0;
  for (auto& a : g.adj_) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    m2 += static_cast<int>(a.size());
  }
  g.m_ = m2 / 2;
  g.root_ = root_ >= 0 ? res.index[root_] : -1;
  g.finalize();
  return res;
}

std::string pair_name(const std::string& a, const std::string& b) {
  std::string s;
  s.reserve(a.size() + b.size() + 3);
  s += '(';
  s += a;
  s += ',';
  s += b;
  s += ')';
  return s;
}

std::vector<std::vector<int>> components(const Graph& g, const std::vector<char>& mask) {
  int n = g.size();
  auto in = [&](int v) { return mask.empty() || mask[v]; };
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> out;
  std::vector<int> stack;
  for (int s = 0; s < n; ++s) {
    if (!in(s) || seen[s]) continue;
    out.emplace_back();
    auto& comp = out.back();
    seen[s] = 1;
    stack.push_back(s);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (int w : g.adj(v))
        if (in(w) && !seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
    std::sort(comp.begin(), comp.end());
  }
  return out;
}

bool is_connected(const Graph& g) { return g.size() > 0 && components(g).size() == 1; }

bool is_tree(const Graph& g) { return is_connected(g) && g.edge_count() == g.size() - 1; }

std::optional<std::pair<int, int>> is_arc(const Graph& g) {
  if (g.size() < 2 || !is_tree(g)) return std::nullopt;
  std::vector<int> ends;
  for (int v = 0; v < g.size(); ++v) {
    if (g.ord(v) > 2) return std::nullopt;
    if (g.ord(v) == 1) ends.push_back(v);
  }
  if (ends.size() != 2) return std::nullopt;
  return std::make_pair(ends[0], ends[1]);
}

std::vector<std::vector<int>> branches(const Graph& t) {
  if (!t.is_rooted_tree()) throw DomainError("branches needs a rooted tree");
  std::vector<std::vector<int>> out;
  for (int v = 0; v < t.size(); ++v) {
    if (!t.children(v).empty()) continue;
    std::vector<int> path;
    for (int x = v; x >= 0; x = t.parent(x)) path.push_back(x);
    std::reverse(path.begin(), path.end());
    out.push_back(std::move(path));
  }
  return out;
}

std::vector<int> subtree(const Graph& t, int v) {
  std::vector<int> out;
  const auto& info = *t.tree();
  for (int i = info.tin[v]; i < info.tout[v]; ++i) out.push_back(info.preorder[i]);
  return out;
}

VertexProfile profile(const Graph& t, int v) {
  if (!t.is_rooted_tree()) throw DomainError("profile needs a rooted tree");
  VertexProfile p;
  p.ord = t.ord(v);
  p.ht = t.ht(v);
  p.sord = t.sord(v);
  if (v == t.root())
    p.kind = VertexKind::root;
  else if (p.ord == 1)
    p.kind = VertexKind::end;
  else if (p.ord == 2)
    p.kind = VertexKind::ordinary;
  else
    p.kind = VertexKind::ramification;
  return p;
}

const char* kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::root: return "root";
    case VertexKind::end: return "end";
    case VertexKind::ordinary: return "ordinary";
    case VertexKind::ramification: return "ramification";
  }
  return "?";
}

Regularity is_regular(const Graph& t) {
  if (!t.is_rooted_tree()) throw DomainError("is_regular needs a rooted tree");
  Regularity r;
  r.height = t.tree_height();
  r.sord = t.sord(t.root());
  r.regular = true;
  for (int v = 0; v < t.size(); ++v) {
    if (t.children(v).empty()) {
      if (t.ht(v) != r.height) r.regular = false;
    } else if (t.sord(v) != r.sord) {
      r.regular = false;
    }
  }
  return r;
}

Graph induced(const Graph& g, const std::vector<int>& vs) {
  GraphBuilder b;
  std::vector<int> local(g.size(), -1);
  for (int v : vs) local[v] = b.add_vertex(g.name(v));
  for (int v : vs)
    for (int w : g.adj(v))
      if (local[w] >= 0 && v < w) b.add_edge(local[v], local[w]);
  if (g.has_root() && local[g.root()] >= 0) b.set_root(local[g.root()]);
  return b.build().graph;
}

}  // namespace fraisse
