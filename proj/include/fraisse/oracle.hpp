#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fraisse/amalgamate.hpp"
#include "fraisse/factorize.hpp"

namespace fraisse {

struct EnumerationSpec {
  int max_vertices = 8;
  bool rooted = true;
  bool monotone = false;
  bool light = false;
  bool confluent = false;
  bool end_vertex_preserving = false;
  bool order_preserving = true;  // implied by validation when rooted
};

int oracle_cap();
void set_oracle_cap(int cap);

// one representative per class, ordered by size then canonical code;
// vertices are named a, b, c, ... in preorder (root a)
std::vector<GraphPtr> enumerate_rooted_trees(int max_v, int min_v = 1);
std::vector<GraphPtr> enumerate_trees(int max_v, int min_v = 1);
std::vector<GraphPtr> enumerate_connected_graphs(int max_v, int min_v = 1);
GraphPtr tree_from_code(const std::string& code, bool keep_root = true);

std::vector<Morphism> enumerate_epimorphisms(const GraphPtr& s, const GraphPtr& t, const EnumerationSpec& spec);
bool satisfies(const Morphism& f, const EnumerationSpec& spec);

// exhaustive search over chains of splits and cone merges (star: also leaf
// additions) ending in an isomorphism
std::optional<Decomposition> brute_simple_confluent(const Morphism& f, int max_chain = 64, bool star = false);

bool is_hereditarily_unicoherent(const Graph& g);

struct AmalgamSpec {
  bool rooted = false;
  bool tree = true;  // otherwise connected graphs
  bool monotone = false;
  bool light = false;
  bool confluent = false;
};
struct SearchStats {
  long long shapes = 0;
  long long candidates = 0;
};
std::optional<AmalgamResult> search_amalgam(const Morphism& f, const Morphism& g, const AmalgamSpec& spec,
                                            int max_v, SearchStats* stats = nullptr);

struct Stages {
  std::vector<GraphPtr> trees;   // trees[i] is stage i+1
  std::vector<Morphism> maps;    // maps[i]: stage i+2 -> stage i+1
};
struct ExtensionFound {
  int n = 0;
  Morphism psi;
};
struct ExtensionOutcome {
  std::optional<ExtensionFound> found;
  std::string report;
};
// phi: a -> stage m (1-based); searches n in [m, horizon]
ExtensionOutcome check_extension(const Stages& stages, const Morphism& phi, int m, int horizon,
                                 const EnumerationSpec& spec = {});

}  // namespace fraisse
