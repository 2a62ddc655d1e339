#include <doctest.h>

#include "fraisse/canon.hpp"
#include "fraisse/examples.hpp"
#include "fraisse/oracle.hpp"
#include "fraisse/sequences.hpp"
#include "ref_oracle.hpp"

using namespace fraisse;

TEST_CASE("tree codes round-trip") {
  for (const auto& t : enumerate_rooted_trees(7)) {
    auto back = tree_from_code(canonical_code(*t));
    CHECK(iso_rooted(*back, *t));
  }
}

TEST_CASE("unrooted trees are counted by brute force") {
  // trees up to isomorphism on n vertices
  std::vector<long long> want{1, 1, 1, 2, 3, 6, 11, 23};
  for (int n = 1; n <= 8; ++n) CHECK(static_cast<long long>(enumerate_trees(n, n).size()) == want[n - 1]);
  for (int n = 1; n <= 5; ++n) {
    long long trees = 0;
    for (const auto& g : enumerate_connected_graphs(n, n)) trees += ref::is_tree(ref::G(*g));
    CHECK(trees == static_cast<long long>(enumerate_trees(n, n).size()));
  }
}

TEST_CASE("enumeration respects the oracle cap") {
  int old = oracle_cap();
  set_oracle_cap(4);
  CHECK_THROWS_AS(enumerate_rooted_trees(5), DomainError);
  CHECK_NOTHROW(enumerate_rooted_trees(4));
  set_oracle_cap(old);
}

TEST_CASE("satisfies filters by class") {
  auto ex = example_no_confluent();
  EnumerationSpec any;
  any.rooted = false;
  CHECK(satisfies(ex.f, any));
  EnumerationSpec mono = any;
  mono.monotone = true;
  CHECK_FALSE(satisfies(ex.f, mono));
  EnumerationSpec light = any;
  light.light = true;
  CHECK(satisfies(ex.f, light));
}

TEST_CASE("brute chain search") {
  auto t = enumerate_rooted_trees(5).back();
  auto b = brute_simple_confluent(Morphism::identity(t));
  REQUIRE(b);
  CHECK(b->factors.empty());
  CHECK(b->verify());
  auto f = fraisse_double(1).map;
  auto c = brute_simple_confluent(f);
  REQUIRE(c);
  CHECK(c->verify());
  CHECK(c->factors.size() == 4);
}

TEST_CASE("amalgam search finds amalgams when they exist") {
  auto t = share(Graph::from_names({"0", "1"}, {{"0", "1"}}));
  auto s = share(Graph::from_names({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}));
  auto f = Morphism::from_names(s, t, {{"a", "0"}, {"b", "1"}, {"c", "1"}});
  AmalgamSpec mono;
  mono.monotone = true;
  SearchStats st;
  auto r = search_amalgam(f, f, mono, 6, &st);
  REQUIRE(r);
  CHECK(commutes(f, f, *r));
  CHECK(is_monotone(r->f0));
  CHECK(is_monotone(r->g0));
  CHECK(is_tree(*r->D));
  CHECK(r->D->size() <= 6);
  CHECK(st.candidates > 0);

  auto id = Morphism::identity(t);
  auto r2 = search_amalgam(id, f, mono, 3, nullptr);
  REQUIRE(r2);
  CHECK(r2->D->size() == 3);
}

TEST_CASE("amalgam search finds nothing for the no-confluent pair within a small bound") {
  auto ex = example_no_confluent();
  AmalgamSpec conf;
  conf.confluent = true;
  CHECK_FALSE(search_amalgam(ex.f, ex.g, conf, 7).has_value());
  CHECK_THROWS_AS(search_amalgam(ex.f, ex.g, conf, 11), DomainError);
}

TEST_CASE("bounded extension search") {
  Stages st;
  st.trees = {fraisse_stage(1), fraisse_stage(2)};
  st.maps = {fraisse_map(1)};
  auto id = Morphism::identity(fraisse_stage(1));
  auto out = check_extension(st, id, 1, 2);
  REQUIRE(out.found);
  CHECK(out.found->n == 1);

  auto f1 = fraisse_map(1);
  CHECK_THROWS_AS(check_extension(st, f1, 2, 2), DomainError);
}

TEST_CASE("hereditary unicoherence of small graphs") {
  auto c4 = share(Graph::from_names({"a", "b", "c", "d"}, {{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}}));
  CHECK_FALSE(is_hereditarily_unicoherent(*c4));
  CHECK(is_hereditarily_unicoherent(*enumerate_trees(6, 6).front()));
}

TEST_CASE("extension search on a miniature cone-doubling sequence") {
  auto a1 = fraisse_stage(1);
  auto s2 = multiply_branches(a1, 4);
  auto s3 = multiply_branches(s2.tree, 8);
  Stages st;
  st.trees = {a1, s2.tree, s3.tree};
  st.maps = {s2.map, s3.map};
  auto out = check_extension(st, s2.map, 1, 3);
  REQUIRE(out.found);
  CHECK(out.found->n == 2);
  CHECK(equal_maps(compose(s2.map, out.found->psi), s2.map));

  // a tree of height 2 is never covered by stages of height 1
  auto tall = share(Graph::from_names({"r", "a", "b", "c"}, {{"r", "a"}, {"a", "c"}, {"r", "b"}}, "r"));
  auto phi = Morphism::from_names(tall, a1, {{"r", a1->name(a1->root())},
                                             {"a", a1->name(a1->children(a1->root())[0])},
                                             {"c", a1->name(a1->children(a1->root())[0])},
                                             {"b", a1->name(a1->children(a1->root())[1])}});
  auto none = check_extension(st, phi, 1, 3);
  CHECK_FALSE(none.found);
  CHECK(none.report.find("exhausted") != std::string::npos);
}
