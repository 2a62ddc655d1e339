#pragma once
#include "fraisse/morphism.hpp"

namespace fraisse {

// a pair f: B -> A, g: C -> A over a common codomain
struct SpanPair {
  Morphism f, g;
};

SpanPair example_no_4od();
SpanPair example_no_confluent();
SpanPair example_rooted_standard_not_tree();
SpanPair example_not_order_pres();
// K3 onto an edge, two vertices collapsed
Morphism example_triangle_onto_edge();
// confluent map of rooted trees that is not simple-confluent-by-splits
Morphism example_non_confluent_rooted();

}  // namespace fraisse
