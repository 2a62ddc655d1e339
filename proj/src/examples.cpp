#include "fraisse/examples.hpp"

namespace fraisse {

namespace {

using Edges = std::vector<std::pair<std::string, std::string>>;

GraphPtr make(std::vector<std::string> vs, const Edges& es, std::optional<std::string> root = std::nullopt) {
  return share(Graph::from_names(std::move(vs), es, std::move(root)));
}

}  // namespace

SpanPair example_no_4od() {
  auto A = make({"a", "b", "c", "d", "x"}, {{"x", "a"}, {"x", "b"}, {"x", "c"}, {"x", "d"}});
  auto B = make({"aB", "bB", "cB", "dB", "x1", "x2"},
                {{"aB", "x1"}, {"bB", "x1"}, {"x1", "x2"}, {"cB", "x2"}, {"dB", "x2"}});
  auto C = make({"aC", "bC", "cC", "dC", "y1", "y2"},
                {{"aC", "y1"}, {"cC", "y1"}, {"y1", "y2"}, {"bC", "y2"}, {"dC", "y2"}});
  return {Morphism::from_names(B, A, {{"aB", "a"}, {"bB", "b"}, {"cB", "c"}, {"dB", "d"}, {"x1", "x"}, {"x2", "x"}}),
          Morphism::from_names(C, A, {{"aC", "a"}, {"bC", "b"}, {"cC", "c"}, {"dC", "d"}, {"y1", "x"}, {"y2", "x"}})};
}

SpanPair example_no_confluent() {
  auto A = make({"0", "1"}, {{"0", "1"}});
  auto B = make({"a", "b", "c"}, {{"a", "c"}, {"c", "b"}});
  auto C = make({"p", "q", "r"}, {{"p", "r"}, {"r", "q"}});
  return {Morphism::from_names(B, A, {{"a", "0"}, {"b", "0"}, {"c", "1"}}),
          Morphism::from_names(C, A, {{"p", "1"}, {"q", "1"}, {"r", "0"}})};
}

SpanPair example_rooted_standard_not_tree() {
  auto A = make({"o"}, {}, "o");
  auto B = make({"b0", "b1"}, {{"b0", "b1"}}, "b0");
  auto C = make({"c0", "c1"}, {{"c0", "c1"}}, "c0");
  return {Morphism::from_names(B, A, {{"b0", "o"}, {"b1", "o"}}),
          Morphism::from_names(C, A, {{"c0", "o"}, {"c1", "o"}})};
}

SpanPair example_not_order_pres() {
  auto A = make({"aA", "bA", "cA", "xA"}, {{"xA", "aA"}, {"xA", "bA"}, {"xA", "cA"}}, "xA");
  auto B = make({"aB", "bB", "cB", "xB", "yB"}, {{"yB", "aB"}, {"yB", "bB"}, {"xB", "yB"}, {"xB", "cB"}}, "xB");
  auto C = make({"aC", "bC", "cC", "xC", "yC"}, {{"xC", "aC"}, {"yC", "bC"}, {"yC", "cC"}, {"xC", "yC"}}, "xC");
  return {Morphism::from_names(B, A, {{"aB", "aA"}, {"bB", "bA"}, {"cB", "cA"}, {"xB", "xA"}, {"yB", "xA"}}),
          Morphism::from_names(C, A, {{"aC", "aA"}, {"bC", "bA"}, {"cC", "cA"}, {"xC", "xA"}, {"yC", "xA"}})};
}

Morphism example_triangle_onto_edge() {
  auto K3 = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"a", "c"}});
  auto P = make({"p", "q"}, {{"p", "q"}});
  return Morphism::from_names(K3, P, {{"a", "p"}, {"b", "q"}, {"c", "q"}});
}

Morphism example_non_confluent_rooted() {
  auto S = make({"A", "B", "C", "D"}, {{"A", "B"}, {"B", "C"}, {"B", "D"}}, "A");
  auto T = make({"a", "b1", "b2", "c", "d1", "d2"},
                {{"a", "b1"}, {"a", "b2"}, {"b1", "c"}, {"b1", "d1"}, {"b2", "d2"}}, "a");
  return Morphism::from_names(T, S, {{"a", "A"}, {"b1", "B"}, {"b2", "B"}, {"c", "C"}, {"d1", "D"}, {"d2", "D"}});
}

}  // namespace fraisse
