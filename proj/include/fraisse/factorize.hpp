#pragma once
#include <optional>
#include <string>
#include <vector>

#include "fraisse/morphism.hpp"

namespace fraisse {

enum class FactorTag { splitting_edge, adding_edge, elementary_light_confluent };
const char* tag_name(FactorTag t);

// factors[0] starts at the domain of composite; residual is an isomorphism
// from the last factor's codomain onto the codomain of composite
struct Decomposition {
  std::vector<Morphism> factors;
  std::vector<FactorTag> tags;
  Morphism residual;
  Morphism composite;

  Morphism recompose() const;
  bool verify() const;  // tags checked, residual iso, recomposition exact
};

struct DecomposeOutcome {
  std::optional<Decomposition> decomposition;
  std::string failure;
  explicit operator bool() const { return decomposition.has_value(); }
};

struct MonotoneLight {
  GraphPtr M;
  Morphism m, l;
};
MonotoneLight monotone_light(const Morphism& f);

// quotient of g by rep (rep[v] is the class representative); the map g -> quotient
Morphism quotient_map(const GraphPtr& g, const std::vector<int>& rep);

// a vertex of sord >= 2 in the codomain
bool is_branching(const Graph& t, int p);

struct SpecialVertex {
  int q = -1;
  // alpha[i]: child of p whose cone is covered by the cone of children(q)[i];
  // -1 when that cone maps to {p} (special* only)
  std::vector<int> alpha;
};
std::vector<SpecialVertex> special_vertices(const Morphism& f, int p, bool star = false);

struct SpecialCheck {
  bool ok = false;
  std::string failure;
};
SpecialCheck check_special(const Morphism& f, bool star = false);
bool is_special(const Morphism& f);
bool is_special_star(const Morphism& f);
// special, and the domain root is special for a branching codomain root
bool is_special_rooted(const Morphism& f, bool star = false);

DecomposeOutcome decompose_simple_confluent(const Morphism& f);
DecomposeOutcome decompose_light_confluent(const Morphism& f);
DecomposeOutcome decompose_simple_star(const Morphism& f);

// greedy split (and, for star, leaf) contraction chain
std::optional<Decomposition> simple_monotone_chain(const Morphism& f, bool star = false);
bool is_simple_monotone(const Morphism& f);
bool is_simple_star_monotone(const Morphism& f);

}  // namespace fraisse
