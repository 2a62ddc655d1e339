#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fraisse/graph.hpp"

namespace fraisse {

// AHU code of a rooted tree; labels (one int per vertex) are folded in when given
std::string canonical_code(const Graph& t, const std::vector<int>* labels = nullptr);
// codes of every cone, indexed by vertex
std::vector<std::string> cone_codes(const Graph& t, const std::vector<int>* labels = nullptr);

// root-preserving isomorphism a -> b respecting labels, if one exists
std::optional<std::vector<int>> rooted_iso(const Graph& a, const Graph& b,
                                           const std::vector<int>* la = nullptr,
                                           const std::vector<int>* lb = nullptr);
bool iso_rooted(const Graph& a, const Graph& b);

// rooted cone isomorphism between cones at u and w inside t, respecting labels
std::optional<std::vector<std::pair<int, int>>> cone_iso(const Graph& t, int u, int w,
                                                         const std::vector<int>* labels = nullptr);

// canonical code of an unrooted tree (minimum over centres)
std::string unrooted_tree_code(const Graph& t);

// canonical code of a small connected or disconnected graph by
// individualisation and refinement; exact, exponential in the worst case
std::string graph_canonical_code(const Graph& g);

// colour-refinement invariant, cheap on large graphs
std::string refinement_invariant(const Graph& g);

}  // namespace fraisse
