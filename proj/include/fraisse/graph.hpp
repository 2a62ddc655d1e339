#pragma once
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fraisse/error.hpp"

namespace fraisse {

class Graph;
using GraphPtr = std::shared_ptr<const Graph>;

// rooted-tree bookkeeping, present only when the graph is a tree with a root
struct TreeInfo {
  std::vector<int> parent;  // -1 at the root
  std::vector<std::vector<int>> children;
  std::vector<int> height;
  std::vector<int> preorder;
  std::vector<int> tin, tout;
};

// Finite simple graph; loops are implicit and never stored.  Vertices are
// indexed in lexicographic order of their names.
class Graph {
 public:
  Graph() = default;

  static Graph from_names(std::vector<std::string> vertices,
                          const std::vector<std::pair<std::string, std::string>>& edges,
                          std::optional<std::string> root = std::nullopt);

  int size() const { return static_cast<int>(names_.size()); }
  int edge_count() const { return m_; }
  const std::string& name(int v) const { return names_[v]; }
  const std::vector<std::string>& names() const { return names_; }
  int index(std::string_view name) const;  // -1 if absent
  const std::vector<int>& adj(int v) const { return adj_[v]; }
  int ord(int v) const { return static_cast<int>(adj_[v].size()); }
  bool adjacent(int u, int v) const;
  std::vector<std::pair<int, int>> edges() const;

  bool has_root() const { return root_ >= 0; }
  int root() const { return root_; }
  const TreeInfo* tree() const { return tree_.get(); }
  bool is_rooted_tree() const { return tree_ != nullptr; }

  // rooted-tree helpers; only valid when is_rooted_tree()
  int parent(int v) const { return tree_->parent[v]; }
  const std::vector<int>& children(int v) const { return tree_->children[v]; }
  int ht(int v) const { return tree_->height[v]; }
  int sord(int v) const { return static_cast<int>(tree_->children[v].size()); }
  bool leq(int a, int b) const { return tree_->tin[a] <= tree_->tin[b] && tree_->tin[b] < tree_->tout[a]; }
  int tree_height() const;

  bool is_end(int v) const { return ord(v) == 1 && v != root_; }

  Graph with_root(int r) const;
  Graph without_root() const;

  bool operator==(const Graph& o) const {
    return names_ == o.names_ && adj_ == o.adj_ && root_ == o.root_;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<int>> adj_;
  int root_ = -1;
  int m_ = 0;
  std::shared_ptr<const TreeInfo> tree_;
  void finalize();
  friend class GraphBuilder;
};

inline GraphPtr share(Graph g) { return std::make_shared<const Graph>(std::move(g)); }

// Collects vertices by name and edges by builder id; build() sorts names.
class GraphBuilder {
 public:
  int add_vertex(std::string name);
  int id(const std::string& name) const;  // -1 if absent
  void add_edge(int a, int b);             // a == b is ignored
  void set_root(int b) { root_ = b; }
  int size() const { return static_cast<int>(names_.size()); }
  const std::string& name(int b) const { return names_[b]; }

  struct Result {
    Graph graph;
    std::vector<int> index;  // builder id -> graph index
  };
  Result build() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<int, int>> edges_;
  int root_ = -1;
  std::unordered_map<std::string, int> lookup_;
};

std::string pair_name(const std::string& a, const std::string& b);

// components of the subgraph induced by mask (all vertices when mask empty)
std::vector<std::vector<int>> components(const Graph& g, const std::vector<char>& mask = {});
bool is_connected(const Graph& g);
bool is_tree(const Graph& g);
// end vertices of an arc, or nullopt
std::optional<std::pair<int, int>> is_arc(const Graph& g);
std::vector<std::vector<int>> branches(const Graph& t);
std::vector<int> subtree(const Graph& t, int v);

enum class VertexKind { root, end, ordinary, ramification };
struct VertexProfile {
  int ord = 0;
  int ht = 0;
  int sord = 0;
  VertexKind kind = VertexKind::ordinary;
};
VertexProfile profile(const Graph& t, int v);
const char* kind_name(VertexKind k);

struct Regularity {
  bool regular = false;
  int height = 0;
  int sord = 0;
};
Regularity is_regular(const Graph& t);

// induced subgraph on the vertices listed (keeps names, root when included)
Graph induced(const Graph& g, const std::vector<int>& vs);

}  // namespace fraisse
