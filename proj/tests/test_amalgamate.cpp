#include <doctest.h>

#include <map>

#include "fraisse/canon.hpp"
#include "fraisse/examples.hpp"
#include "fraisse/oracle.hpp"
#include "ref_oracle.hpp"

using namespace fraisse;

namespace {

// maps grouped by codomain
std::map<const Graph*, std::vector<Morphism>> grouped(const std::vector<GraphPtr>& doms, const std::vector<GraphPtr>& cods,
                                                      const EnumerationSpec& spec) {
  std::map<const Graph*, std::vector<Morphism>> out;
  for (const auto& t : cods)
    for (const auto& s : doms)
      if (t->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, t, spec)) out[t.get()].push_back(f);
  return out;
}

bool legs_are_epis(const AmalgamResult& r) {
  return is_epimorphism(r.f0.domain(), r.f0.codomain(), r.f0.map()) &&
         is_epimorphism(r.g0.domain(), r.g0.codomain(), r.g0.map());
}

int max_order(const Graph& g) {
  int m = 0;
  for (int v = 0; v < g.size(); ++v) m = std::max(m, g.ord(v));
  return m;
}

}  // namespace

TEST_CASE("standard product has exactly the fibre-product edges") {
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(4);
  for (auto& [cod, maps] : grouped(graphs, graphs, any))
    for (const auto& f : maps)
      for (const auto& g : maps) {
        auto p = standard(f, g);
        CHECK(commutes(f, g, p));
        std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> got;
        for (auto [u, w] : p.D->edges()) {
          std::pair<int, int> a{p.f0(u), p.g0(u)}, b{p.f0(w), p.g0(w)};
          got.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
        }
        CHECK(got == ref::product_edges(f, g));
        int pairs = 0;
        for (int x = 0; x < f.domain().size(); ++x)
          for (int y = 0; y < g.domain().size(); ++y) pairs += f(x) == g(y);
        CHECK(p.D->size() == pairs);
      }
}

TEST_CASE("product of the no-confluent pair is a 4-cycle") {
  auto ex = example_no_confluent();
  auto p = standard(ex.f, ex.g);
  CHECK(p.D->size() == 4);
  CHECK(p.D->edge_count() == 4);
  for (int v = 0; v < 4; ++v) CHECK(p.D->ord(v) == 2);
  CHECK_FALSE(is_tree(*p.D));
}

TEST_CASE("rooted product of two edges over a point is K4") {
  auto ex = example_rooted_standard_not_tree();
  auto p = standard(ex.f, ex.g);
  CHECK(p.D->size() == 4);
  CHECK(p.D->edge_count() == 6);
}

TEST_CASE("component amalgam of confluent maps") {
  EnumerationSpec conf;
  conf.rooted = false;
  conf.confluent = true;
  auto graphs = enumerate_connected_graphs(4);
  long long n = 0;
  for (auto& [cod, maps] : grouped(graphs, graphs, conf))
    for (const auto& f : maps)
      for (const auto& g : maps) {
        ++n;
        auto p = component_amalgam(f, g);
        CHECK(is_connected(*p.D));
        CHECK(commutes(f, g, p));
        REQUIRE(legs_are_epis(p));
        CHECK(is_confluent(p.f0));
        CHECK(is_confluent(p.g0));
        if (f.report().monotone) CHECK(is_monotone(p.g0));
        if (f.report().light) CHECK(is_light(p.g0));
      }
  CHECK(n > 100);
  auto nc = example_no_confluent();
  CHECK_NOTHROW(component_amalgam(nc.f, nc.g));
}

TEST_CASE("rooted light amalgam keeps the product order") {
  auto t = share(Graph::from_names({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}}, "r"));
  auto s = share(Graph::from_names({"r", "a1", "a2", "b1"}, {{"r", "a1"}, {"r", "a2"}, {"r", "b1"}}, "r"));
  auto f = Morphism::from_names(s, t, {{"r", "r"}, {"a1", "a"}, {"a2", "a"}, {"b1", "b"}});
  auto c = share(Graph::from_names({"r", "m", "a", "b"}, {{"r", "m"}, {"m", "a"}, {"m", "b"}}, "r"));
  auto g = Morphism::from_names(c, t, {{"r", "r"}, {"m", "r"}, {"a", "a"}, {"b", "b"}});
  auto p = rooted_light(f, g);
  REQUIRE(p.D->is_rooted_tree());
  CHECK(p.D->size() == 5);
  CHECK(commutes(f, g, p));
  CHECK(p.g0.report().light);
  CHECK(p.g0.report().confluent);
  CHECK(p.f0.report().confluent);
  CHECK_THROWS_AS(rooted_light(g, f), DomainError);
}

TEST_CASE("m3 refuses order 4") {
  auto ex = example_no_4od();
  CHECK_THROWS_AS(m3(ex.f, ex.g), DomainError);
}

TEST_CASE("m3 on monotone maps of small trees") {
  EnumerationSpec mono;
  mono.rooted = false;
  mono.monotone = true;
  std::vector<GraphPtr> trees;
  for (auto& t : enumerate_trees(5))
    if (max_order(*t) <= 3) trees.push_back(t);
  for (auto& [cod, maps] : grouped(trees, trees, mono))
    for (const auto& f : maps)
      for (const auto& g : maps) {
        auto p = m3(f, g);
        CHECK(is_tree(*p.D));
        CHECK(max_order(*p.D) <= 3);
        CHECK(commutes(f, g, p));
        REQUIRE(legs_are_epis(p));
        CHECK(is_monotone(p.f0));
        CHECK(is_monotone(p.g0));
      }
}

TEST_CASE("joint projections of trees of order at most 3") {
  std::vector<GraphPtr> trees;
  for (auto& t : enumerate_trees(5))
    if (max_order(*t) <= 3) trees.push_back(t);
  for (const auto& b : trees)
    for (const auto& c : trees) {
      auto j = jpp_m3(b, c);
      CHECK(is_tree(*j.D));
      CHECK(max_order(*j.D) <= 3);
      REQUIRE(is_epimorphism(j.f.domain(), j.f.codomain(), j.f.map()));
      REQUIRE(is_epimorphism(j.g.domain(), j.g.codomain(), j.g.map()));
      CHECK(is_monotone(j.f));
      CHECK(is_monotone(j.g));
    }
}

TEST_CASE("joint projections of rooted trees") {
  auto trees = enumerate_rooted_trees(5, 2);
  for (const auto& a : trees)
    for (const auto& b : trees) {
      auto j = jpp_rooted(a, b);
      auto reg = is_regular(*j.D);
      CHECK(reg.regular);
      REQUIRE(is_epimorphism(j.f.domain(), j.f.codomain(), j.f.map()));
      REQUIRE(is_epimorphism(j.g.domain(), j.g.codomain(), j.g.map()));
      CHECK(j.f.report().confluent);
      CHECK(j.g.report().confluent);
      CHECK(j.f.report().end_vertex_preserving);
      CHECK(j.g.report().end_vertex_preserving);
    }
}

TEST_CASE("simple-monotone pairs") {
  EnumerationSpec mono;
  mono.monotone = true;
  auto trees = enumerate_rooted_trees(5);
  long long n = 0;
  for (auto& [cod, maps] : grouped(trees, trees, mono))
    for (const auto& f : maps) {
      if (!is_simple_monotone(f)) continue;
      for (const auto& g : maps) {
        if (!is_simple_monotone(g)) continue;
        ++n;
        auto p = simple_monotone_pair(f, g);
        CHECK(p.D->is_rooted_tree());
        CHECK(commutes(f, g, p));
        REQUIRE(legs_are_epis(p));
        CHECK(is_simple_monotone(p.f0));
        CHECK(is_simple_monotone(p.g0));
      }
    }
  CHECK(n > 0);
}

TEST_CASE("monotone against light pairs") {
  EnumerationSpec conf;
  conf.confluent = true;
  auto trees = enumerate_rooted_trees(5);
  long long n = 0;
  for (auto& [cod, maps] : grouped(trees, trees, conf))
    for (const auto& f : maps) {
      if (!is_simple_monotone(f)) continue;
      for (const auto& g : maps) {
        if (!g.report().light) continue;
        ++n;
        auto p = mono_light_pair(f, g);
        CHECK(commutes(f, g, p));
        REQUIRE(legs_are_epis(p));
        CHECK(is_simple_monotone(p.g0));
        CHECK(p.f0.report().light);
        CHECK(p.f0.report().confluent);
      }
    }
  CHECK(n > 0);
}

TEST_CASE("simple-confluent pairs") {
  EnumerationSpec spec;
  spec.confluent = true;
  spec.end_vertex_preserving = true;
  auto trees = enumerate_rooted_trees(5);
  long long n = 0;
  for (auto& [cod, maps] : grouped(trees, trees, spec)) {
    std::vector<Morphism> simple;
    for (const auto& f : maps)
      if (decompose_simple_confluent(f)) simple.push_back(f);
    for (const auto& f : simple)
      for (const auto& g : simple) {
        ++n;
        auto p = simple_confluent_pair(f, g);
        CHECK(p.D->is_rooted_tree());
        CHECK(commutes(f, g, p));
        REQUIRE(legs_are_epis(p));
        CHECK(static_cast<bool>(decompose_simple_confluent(p.f0)));
        CHECK(static_cast<bool>(decompose_simple_confluent(p.g0)));
      }
  }
  CHECK(n > 0);
}

TEST_CASE("regular trees") {
  CHECK(regular_tree(0, 3)->size() == 1);
  CHECK(regular_tree(2, 3)->size() == 13);
  CHECK(regular_tree(3, 4)->size() == 85);
  auto r = is_regular(*regular_tree(3, 2));
  CHECK(r.regular);
  CHECK(r.height == 3);
  CHECK(r.sord == 2);
  CHECK_THROWS_AS(regular_tree(1, 0), DomainError);
}

TEST_CASE("split against a cone doubling lifts every preimage edge separately") {
  auto A = share(Graph::from_names({"a", "b"}, {{"a", "b"}}, "a"));
  auto B = share(Graph::from_names({"a", "x", "b"}, {{"a", "x"}, {"x", "b"}}, "a"));
  auto C = share(Graph::from_names({"a", "b1", "b2"}, {{"a", "b1"}, {"a", "b2"}}, "a"));
  auto g = Morphism::from_names(C, A, {{"a", "a"}, {"b1", "b"}, {"b2", "b"}});
  for (const char* image : {"a", "b"}) {
    auto f = Morphism::from_names(B, A, {{"a", "a"}, {"x", image}, {"b", "b"}});
    auto p = mono_light_pair(f, g);
    CHECK(p.D->size() == 5);
    CHECK(p.D->sord(p.D->root()) == 2);
    CHECK(commutes(f, g, p));
    auto chain = simple_monotone_chain(p.g0);
    REQUIRE(chain);
    CHECK(chain->factors.size() == 2);
    CHECK(p.f0.report().light);
    CHECK(p.f0.report().confluent);
  }
  // with x over the root the literal product shares one inserted vertex
  auto f = Morphism::from_names(B, A, {{"a", "a"}, {"x", "a"}, {"b", "b"}});
  auto raw = standard(f, g);
  CHECK(raw.D->size() == 4);
  CHECK_FALSE(is_simple_monotone(Morphism::make(raw.D, C, raw.g0.map())));
}

TEST_CASE("mono-light pairs with identity legs") {
  auto A = share(Graph::from_names({"a", "b"}, {{"a", "b"}}, "a"));
  auto B = share(Graph::from_names({"a", "x", "b"}, {{"a", "x"}, {"x", "b"}}, "a"));
  auto f = Morphism::from_names(B, A, {{"a", "a"}, {"x", "b"}, {"b", "b"}});
  auto p = mono_light_pair(f, Morphism::identity(A));
  CHECK(iso_rooted(*p.D, *B));
  auto C = share(Graph::from_names({"a", "b1", "b2"}, {{"a", "b1"}, {"a", "b2"}}, "a"));
  auto g = Morphism::from_names(C, A, {{"a", "a"}, {"b1", "b"}, {"b2", "b"}});
  auto q = mono_light_pair(Morphism::identity(A), g);
  CHECK(iso_rooted(*q.D, *C));
}
