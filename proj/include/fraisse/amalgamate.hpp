#pragma once
#include <vector>

#include "fraisse/factorize.hpp"
#include "fraisse/morphism.hpp"

namespace fraisse {

// D with legs f0: D -> B and g0: D -> C over f: B -> A, g: C -> A
struct AmalgamResult {
  GraphPtr D;
  Morphism f0, g0;
};

struct JointProjection {
  GraphPtr D;
  Morphism f, g;
};

// vertexwise check of f o f0 == g o g0 and leg endpoints
bool commutes(const Morphism& f, const Morphism& g, const Morphism& f0, const Morphism& g0);
inline bool commutes(const Morphism& f, const Morphism& g, const AmalgamResult& r) {
  return commutes(f, g, r.f0, r.g0);
}

// raw fibre product with coordinate projections (legs are not validated)
AmalgamResult standard(const Morphism& f, const Morphism& g);

AmalgamResult component_amalgam(const Morphism& f, const Morphism& g);
AmalgamResult rooted_light(const Morphism& f, const Morphism& g);

AmalgamResult m3(const Morphism& f, const Morphism& g);
JointProjection jpp_m3(const GraphPtr& b, const GraphPtr& c);

AmalgamResult simple_monotone_pair(const Morphism& f, const Morphism& g, bool star = false);
AmalgamResult mono_light_pair(const Morphism& f, const Morphism& g, bool star = false);
AmalgamResult simple_confluent_pair(const Morphism& f, const Morphism& g, bool star = false);
JointProjection jpp_rooted(const GraphPtr& a, const GraphPtr& b);

// regular rooted tree of the given height and successor order
GraphPtr regular_tree(int height, int sord);

}  // namespace fraisse
