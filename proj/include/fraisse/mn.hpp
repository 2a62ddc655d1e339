#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "fraisse/morphism.hpp"

namespace fraisse {

using Rational = boost::rational<long long>;
using MNSequence = std::vector<Rational>;

// "p/q,p/q,..."; an empty string is the empty sequence
MNSequence parse_mn_sequence(const std::string& text);
std::string to_string(const Rational& r);
std::string to_string(const MNSequence& d);

struct HeightedTree {
  GraphPtr tree;
  std::vector<Rational> heights;
};

// vertices sit at every value of D together with 0 and 1; a vertex at height
// v carries the doubling word with bit j forgotten whenever v <= d_j
HeightedTree mn_tree(const MNSequence& d);
// bonding map mn_tree(full) -> mn_tree(prefix)
Morphism mn_map(const MNSequence& prefix, const MNSequence& full);
// h with h(0) = 0 and h(d_i) = e_i, strictly increasing on the values
std::optional<std::map<Rational, Rational>> order_equivalent(const MNSequence& d, const MNSequence& e);

// heights of a rooted tree divided by denom
HeightedTree heighted(const GraphPtr& t, long long denom = 1);
// drop non-root vertices of order 2
HeightedTree suppress_ordinary(const HeightedTree& t);
// root-preserving isomorphism respecting heights
bool heighted_iso(const HeightedTree& a, const HeightedTree& b);
int leaf_count(const Graph& t);
// DOT with pos attributes: leaves spread by canonical child order, y = height
std::string geometric_export(const HeightedTree& t);

}  // namespace fraisse
