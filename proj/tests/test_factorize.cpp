#include <doctest.h>

#include "fraisse/examples.hpp"
#include "fraisse/oracle.hpp"
#include "ref_oracle.hpp"

using namespace fraisse;

namespace {

template <class Fn>
void each_rooted(int max_dom, int max_cod, const EnumerationSpec& spec, Fn fn) {
  auto doms = enumerate_rooted_trees(max_dom);
  auto cods = enumerate_rooted_trees(max_cod);
  for (const auto& s : doms)
    for (const auto& t : cods)
      if (t->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, t, spec)) fn(f);
}

}  // namespace

TEST_CASE("monotone-light factorization") {
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(5);
  long long n = 0;
  for (const auto& s : graphs)
    for (const auto& t : graphs)
      if (t->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, t, any)) {
          auto ml = monotone_light(f);
          ref::G rs(f.domain()), rm(*ml.M), rt(f.codomain());
          CHECK(ref::epi(rs, rm, ml.m.map()));
          CHECK(ref::epi(rm, rt, ml.l.map()));
          CHECK(ref::monotone(rs, rm, ml.m.map()));
          CHECK(ref::light(rm, ml.l.map()));
          CHECK(compose(ml.l, ml.m).map() == f.map());
          ++n;
        }
  CHECK(n > 1000);
}

TEST_CASE("quotient_map collapses a class") {
  auto p = share(Graph::from_names({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}}, "r"));
  std::vector<int> rep{0, 1, 1};
  rep[p->index("b")] = p->index("a");
  rep[p->index("a")] = p->index("a");
  rep[p->index("r")] = p->index("r");
  auto q = quotient_map(p, rep);
  CHECK(q.codomain().size() == 2);
  CHECK(q.codomain().edge_count() == 1);
  CHECK(is_monotone(q));
  CHECK(is_splitting_edge(q));
}

TEST_CASE("special vertices over the root of A_1") {
  auto t = share(Graph::from_names({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}}, "r"));
  auto s = share(Graph::from_names({"r", "a1", "a2", "b1"}, {{"r", "a1"}, {"r", "a2"}, {"r", "b1"}}, "r"));
  auto f = Morphism::from_names(s, t, {{"r", "r"}, {"a1", "a"}, {"a2", "a"}, {"b1", "b"}});
  auto sv = special_vertices(f, t->root());
  REQUIRE(sv.size() == 1);
  CHECK(sv[0].q == s->root());
  CHECK(sv[0].alpha.size() == 3);
  CHECK(is_special(f));
  CHECK_THROWS_AS(special_vertices(f, t->index("a")), DomainError);

  // the root of the domain sees only one cone, the vertex above it sees both
  auto s2 = share(Graph::from_names({"r", "m", "a1", "b1"}, {{"r", "m"}, {"m", "a1"}, {"m", "b1"}}, "r"));
  auto f2 = Morphism::from_names(s2, t, {{"r", "r"}, {"m", "r"}, {"a1", "a"}, {"b1", "b"}});
  auto sv2 = special_vertices(f2, t->root());
  REQUIRE(sv2.size() == 1);
  CHECK(s2->name(sv2[0].q) == "m");
  CHECK(is_special(f2));
  CHECK_FALSE(is_special_rooted(f2));

  // a vertex that reaches a only on one branch and b only on the other has no special vertex
  auto s3 = share(Graph::from_names({"r", "a1", "b1", "m"}, {{"r", "m"}, {"m", "a1"}, {"r", "b1"}}, "r"));
  auto f3 = Morphism::from_names(s3, t, {{"r", "r"}, {"m", "r"}, {"a1", "a"}, {"b1", "b"}});
  CHECK(is_special(f3));
}

TEST_CASE("special rejects maps that are not end-vertex preserving") {
  auto t = share(Graph::from_names({"r", "a"}, {{"r", "a"}}, "r"));
  auto s = share(Graph::from_names({"r", "a", "y"}, {{"r", "a"}, {"r", "y"}}, "r"));
  auto f = Morphism::from_names(s, t, {{"r", "r"}, {"a", "a"}, {"y", "r"}});
  CHECK_FALSE(is_special(f));
  CHECK(is_special_star(f));
  CHECK_THROWS_AS(decompose_simple_confluent(f), DomainError);
  auto d = decompose_simple_star(f);
  REQUIRE(d);
  CHECK(d.decomposition->verify());
  CHECK(d.decomposition->tags == std::vector<FactorTag>{FactorTag::adding_edge});
}

TEST_CASE("every decomposition found recomposes exactly") {
  EnumerationSpec spec;
  spec.confluent = true;
  long long found = 0, total = 0;
  each_rooted(6, 5, spec, [&](const Morphism& f) {
    ++total;
    if (f.report().end_vertex_preserving) {
      auto d = decompose_simple_confluent(f);
      if (d) {
        ++found;
        CHECK(d.decomposition->verify());
        for (auto tag : d.decomposition->tags) CHECK(tag != FactorTag::adding_edge);
      } else {
        CHECK_FALSE(d.failure.empty());
      }
    }
    auto ds = decompose_simple_star(f);
    if (ds) CHECK(ds.decomposition->verify());
  });
  CHECK(found > 0);
  CHECK(total > found);
}

TEST_CASE("decompose agrees with exhaustive chain search") {
  EnumerationSpec spec;
  spec.confluent = true;
  spec.end_vertex_preserving = true;
  each_rooted(6, 5, spec, [&](const Morphism& f) {
    auto d = decompose_simple_confluent(f);
    auto b = brute_simple_confluent(f);
    CHECK(static_cast<bool>(d) == b.has_value());
    if (b) CHECK(b->verify());
  });
}

TEST_CASE("light confluent maps factor into elementary light confluent maps") {
  EnumerationSpec spec;
  spec.light = true;
  spec.confluent = true;
  long long n = 0;
  each_rooted(7, 5, spec, [&](const Morphism& f) {
    ++n;
    auto d = decompose_light_confluent(f);
    REQUIRE_MESSAGE(d, d.failure);
    CHECK(d.decomposition->verify());
    for (auto tag : d.decomposition->tags) CHECK(tag == FactorTag::elementary_light_confluent);
  });
  CHECK(n > 0);
}

TEST_CASE("simple-monotone chains") {
  EnumerationSpec spec;
  spec.monotone = true;
  each_rooted(6, 5, spec, [&](const Morphism& f) {
    auto c = simple_monotone_chain(f, false);
    if (c) {
      CHECK(c->verify());
      for (auto tag : c->tags) CHECK(tag == FactorTag::splitting_edge);
      CHECK(f.report().end_vertex_preserving);
      CHECK(is_simple_star_monotone(f));
    }
    auto cs = simple_monotone_chain(f, true);
    if (cs) CHECK(cs->verify());
  });
}

TEST_CASE("identity decomposes trivially") {
  auto t = enumerate_rooted_trees(5).back();
  auto id = Morphism::identity(t);
  auto d = decompose_simple_confluent(id);
  REQUIRE(d);
  CHECK(d.decomposition->factors.empty());
  CHECK(is_special(id));
}

TEST_CASE("decompose rejects non-confluent input") {
  auto bad = example_non_confluent_rooted();
  CHECK_THROWS_AS(decompose_simple_confluent(bad), DomainError);
  CHECK_THROWS_AS(decompose_light_confluent(bad), DomainError);
}
