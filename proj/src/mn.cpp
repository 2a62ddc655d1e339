#include "fraisse/mn.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "fraisse/canon.hpp"
#include "fraisse/sequences.hpp"

namespace fraisse {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\n"), b = s.find_last_not_of(" \t\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

long long parse_ll(const std::string& s) {
  size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw UsageError("bad rational: '" + s + "'");
  }
  if (pos != s.size()) throw UsageError("bad rational: '" + s + "'");
  return v;
}

std::vector<Rational> grid_of(const MNSequence& d) {
  std::set<Rational> g{Rational(0), Rational(1)};
  for (const auto& x : d) {
    if (x < 0 || x >= 1) throw DomainError("mn sequence entry " + to_string(x) + " is outside [0,1)");
    g.insert(x);
  }
  return {g.begin(), g.end()};
}

// word of bits b_0..b_{n-1}, forgetting bit j when v <= d_j
std::string word_at(const MNSequence& d, const Rational& v, unsigned long long bits) {
  std::string w;
  for (size_t j = 0; j < d.size(); ++j) w += v <= d[j] ? '*' : ((bits >> j) & 1ULL ? '1' : '0');
  return w;
}

std::string vertex_name(const Rational& v, const std::string& w) { return to_string(v) + ":" + w; }

}  // namespace

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::string to_string(const MNSequence& d) {
  std::string s;
  for (size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + to_string(d[i]);
  return s;
}

MNSequence parse_mn_sequence(const std::string& text) {
  MNSequence out;
  std::string t = trim(text);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    auto slash = item.find('/');
    long long p = parse_ll(trim(item.substr(0, slash)));
    long long q = slash == std::string::npos ? 1 : parse_ll(trim(item.substr(slash + 1)));
    if (q == 0) throw UsageError("zero denominator in '" + item + "'");
    out.emplace_back(p, q);
  }
  return out;
}

HeightedTree mn_tree(const MNSequence& d) {
  if (d.size() > 20) throw DomainError("mn sequence longer than 20 entries");
  auto grid = grid_of(d);
  const unsigned long long leaves = 1ULL << d.size();
  // vertex count, checked against the cap before building
  long long total = 0;
  for (const auto& v : grid) {
    int free = 0;
    for (const auto& x : d) free += v > x;
    total += 1LL << free;
  }
  if (total > materialization_cap())
    throw DomainError("mn tree would have " + std::to_string(total) + " vertices (cap " +
                      std::to_string(materialization_cap()) + ")");
  GraphBuilder b;
  std::vector<Rational> hs;
  auto vid = [&](const Rational& v, unsigned long long bits) {
    std::string nm = vertex_name(v, word_at(d, v, bits));
    int id = b.id(nm);
    if (id < 0) {
      id = b.add_vertex(nm);
      hs.push_back(v);
    }
    return id;
  };
  b.set_root(vid(grid[0], 0));
  for (unsigned long long bits = 0; bits < leaves; ++bits)
    for (size_t i = 1; i < grid.size(); ++i) b.add_edge(vid(grid[i - 1], bits), vid(grid[i], bits));
  auto res = b.build();
  HeightedTree out;
  out.heights.resize(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) out.heights[res.index[i]] = hs[i];
  out.tree = share(std::move(res.graph));
  return out;
}

Morphism mn_map(const MNSequence& prefix, const MNSequence& full) {
  if (prefix.size() > full.size() || !std::equal(prefix.begin(), prefix.end(), full.begin()))
    throw DomainError("mn_map: " + to_string(prefix) + " is not an initial segment of " + to_string(full));
  HeightedTree big = mn_tree(full), small = mn_tree(prefix);
  auto pgrid = grid_of(prefix);
  const Graph& B = *big.tree;
  std::vector<int> m(B.size());
  for (int v = 0; v < B.size(); ++v) {
    const Rational& h = big.heights[v];
    Rational lo = *std::prev(std::upper_bound(pgrid.begin(), pgrid.end(), h));
    const std::string& nm = B.name(v);
    std::string w = nm.substr(nm.find(':') + 1, prefix.size());
    for (size_t j = 0; j < prefix.size(); ++j)
      if (lo <= prefix[j]) w[j] = '*';
    int t = small.tree->index(vertex_name(lo, w));
    if (t < 0) throw DomainError("mn_map: no image for " + nm);
    m[v] = t;
  }
  return Morphism(big.tree, small.tree, std::move(m));
}

std::optional<std::map<Rational, Rational>> order_equivalent(const MNSequence& d, const MNSequence& e) {
  if (d.size() != e.size()) throw DomainError("order_equivalent: length mismatch");
  auto cmp = [](const Rational& a, const Rational& b) { return a < b ? -1 : (b < a ? 1 : 0); };
  for (size_t i = 0; i < d.size(); ++i) {
    if (cmp(d[i], 0) != cmp(e[i], 0)) return std::nullopt;
    for (size_t j = 0; j < d.size(); ++j)
      if (cmp(d[i], d[j]) != cmp(e[i], e[j])) return std::nullopt;
  }
  std::map<Rational, Rational> h{{Rational(0), Rational(0)}};
  for (size_t i = 0; i < d.size(); ++i) h[d[i]] = e[i];
  return h;
}

HeightedTree heighted(const GraphPtr& t, long long denom) {
  if (!t->is_rooted_tree()) throw DomainError("heighted: rooted tree required");
  HeightedTree out{t, {}};
  for (int v = 0; v < t->size(); ++v) out.heights.emplace_back(t->ht(v), denom);
  return out;
}

HeightedTree suppress_ordinary(const HeightedTree& t) {
  const Graph& T = *t.tree;
  if (!T.is_rooted_tree()) throw DomainError("suppress_ordinary: rooted tree required");
  auto keep = [&](int v) { return v == T.root() || T.ord(v) != 2; };
  GraphBuilder b;
  std::vector<int> id(T.size(), -1);
  std::vector<Rational> hs;
  for (int v = 0; v < T.size(); ++v)
    if (keep(v)) {
      id[v] = b.add_vertex(T.name(v));
      hs.push_back(t.heights[v]);
    }
  b.set_root(id[T.root()]);
  for (int v = 0; v < T.size(); ++v) {
    if (!keep(v) || v == T.root()) continue;
    int p = T.parent(v);
    while (!keep(p)) p = T.parent(p);
    b.add_edge(id[p], id[v]);
  }
  auto res = b.build();
  HeightedTree out;
  out.heights.resize(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) out.heights[res.index[i]] = hs[i];
  out.tree = share(std::move(res.graph));
  return out;
}

namespace {

// heights replaced by their rank among the union of both height sets
std::pair<std::vector<int>, std::vector<int>> rank_labels(const HeightedTree& a, const HeightedTree& b) {
  std::set<Rational> all(a.heights.begin(), a.heights.end());
  all.insert(b.heights.begin(), b.heights.end());
  std::vector<Rational> sorted(all.begin(), all.end());
  auto rank = [&](const std::vector<Rational>& hs) {
    std::vector<int> r;
    for (const auto& h : hs) r.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), h) - sorted.begin()));
    return r;
  };
  return {rank(a.heights), rank(b.heights)};
}

}  // namespace

bool heighted_iso(const HeightedTree& a, const HeightedTree& b) {
  if (a.tree->size() != b.tree->size()) return false;
  auto [la, lb] = rank_labels(a, b);
  return rooted_iso(*a.tree, *b.tree, &la, &lb).has_value();
}

int leaf_count(const Graph& t) {
  int n = 0;
  for (int v = 0; v < t.size(); ++v)
    if (t.is_rooted_tree() ? (t.sord(v) == 0 && v != t.root()) : t.ord(v) == 1) ++n;
  return n;
}

namespace {

std::string decimal(const Rational& r) {
  long long scaled = r.numerator() * 10000 / r.denominator();
  bool neg = scaled < 0;
  if (neg) scaled = -scaled;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%04lld", neg ? "-" : "", scaled / 10000, scaled % 10000);
  return buf;
}

}  // namespace

std::string geometric_export(const HeightedTree& t) {
  const Graph& T = *t.tree;
  if (!T.is_rooted_tree()) throw DomainError("geometric_export: rooted tree required");
  auto [labels, unused] = rank_labels(t, t);
  auto codes = cone_codes(T, &labels);
  std::vector<Rational> x(T.size());
  long long next_leaf = 0;
  std::function<void(int)> place = [&](int v) {
    auto ch = T.children(v);
    std::sort(ch.begin(), ch.end(), [&](int a, int b) { return std::tie(codes[a], T.name(a)) < std::tie(codes[b], T.name(b)); });
    if (ch.empty()) {
      x[v] = Rational(next_leaf++);
      return;
    }
    Rational sum = 0;
    for (int c : ch) {
      place(c);
      sum += x[c];
    }
    x[v] = sum / static_cast<long long>(ch.size());
  };
  place(T.root());
  std::ostringstream os;
  os << "graph MN {\n  node [shape=point];\n";
  for (int v = 0; v < T.size(); ++v)
    os << "  \"" << T.name(v) << "\" [pos=\"" << decimal(x[v]) << "," << decimal(t.heights[v]) << "!\", height_label=\""
       << to_string(t.heights[v]) << "\"];\n";
  for (auto [a, b] : T.edges()) os << "  \"" << T.name(a) << "\" -- \"" << T.name(b) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace fraisse
