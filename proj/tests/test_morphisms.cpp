#include <doctest.h>

#include "fraisse/examples.hpp"
#include "fraisse/oracle.hpp"
#include "ref_oracle.hpp"

using namespace fraisse;

namespace {

GraphPtr P3() { return share(Graph::from_names({"r", "a", "b"}, {{"r", "a"}, {"a", "b"}}, "r")); }
GraphPtr P2() { return share(Graph::from_names({"r", "a"}, {{"r", "a"}}, "r")); }
GraphPtr A1() { return share(Graph::from_names({"r", "a", "b"}, {{"r", "a"}, {"r", "b"}}, "r")); }

int v(const GraphPtr& g, const char* n) { return g->index(n); }

// fibre sizes sorted
std::vector<int> fibre_sizes(const Morphism& f) {
  std::vector<int> s;
  for (auto& fb : f.fibers()) s.push_back(static_cast<int>(fb.size()));
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

TEST_CASE("validation") {
  auto p = P3();
  CHECK_NOTHROW(Morphism::identity(p));
  CHECK(violations(*p, *p, Morphism::identity(p).map()).empty());
  auto ex = example_no_confluent();
  CHECK(is_epimorphism(ex.f.domain(), ex.f.codomain(), ex.f.map()));
  std::vector<int> all_root(3, p->root());
  CHECK_FALSE(is_epimorphism(*p, *p, all_root));
  CHECK_THROWS_AS(Morphism::make(p, p, all_root), DomainError);
}

TEST_CASE("validation agrees with the reference on every map up to 4 vertices") {
  auto graphs = enumerate_connected_graphs(4);
  for (const auto& s : graphs)
    for (const auto& t : graphs) {
      ref::G rs(*s), rt(*t);
      std::vector<int> f(s->size(), 0);
      std::function<void(int)> rec = [&](int i) {
        if (i == s->size()) {
          CHECK(is_epimorphism(*s, *t, f) == ref::epi(rs, rt, f));
          return;
        }
        for (int y = 0; y < t->size(); ++y) {
          f[i] = y;
          rec(i + 1);
        }
      };
      rec(0);
    }
}

TEST_CASE("enumerate_epimorphisms finds exactly the brute-force epimorphisms") {
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(4);
  for (const auto& s : graphs)
    for (const auto& t : graphs) {
      auto mine = enumerate_epimorphisms(s, t, any);
      std::set<std::vector<int>> got;
      for (auto& f : mine) got.insert(f.map());
      auto want = ref::all_epis(*s, *t);
      CHECK(got == std::set<std::vector<int>>(want.begin(), want.end()));
    }
  auto trees = enumerate_rooted_trees(5);
  for (const auto& s : trees)
    for (const auto& t : trees) {
      std::set<std::vector<int>> got;
      for (auto& f : enumerate_epimorphisms(s, t, EnumerationSpec{})) got.insert(f.map());
      auto want = ref::all_epis(*s, *t);
      CHECK(got == std::set<std::vector<int>>(want.begin(), want.end()));
    }
}

TEST_CASE("small epimorphism counts") {
  CHECK(enumerate_epimorphisms(P2(), P2(), EnumerationSpec{}).size() == 1);
  // either leaf may collapse onto the root, but not both
  CHECK(enumerate_epimorphisms(A1(), P2(), EnumerationSpec{}).size() == 3);
  CHECK(enumerate_epimorphisms(P2(), A1(), EnumerationSpec{}).empty());
}

TEST_CASE("compose") {
  auto p = P3();
  auto ex = example_no_confluent();
  CHECK(equal_maps(compose(Morphism::identity(ex.f.codomain_ptr()), ex.f), ex.f));
  auto s1 = split_edge(p, v(p, "a"), v(p, "b"), v(p, "b"));
  const auto& q = s1.domain_ptr();
  auto s2 = split_edge(q, q->index("x"), q->index("b"), q->index("b"));
  auto c = compose(s1, s2);
  CHECK(fibre_sizes(c) == std::vector<int>{1, 1, 3});
  CHECK(compose(s1, s2).report().monotone);
  CHECK_THROWS_AS(compose(s1, s1), DomainError);
}

TEST_CASE("monotone") {
  auto m = example_triangle_onto_edge();
  CHECK(is_monotone(m));
  CHECK_FALSE(is_monotone(example_no_confluent().f));
  CHECK(is_monotone(Morphism::identity(P3())));
}

TEST_CASE("light") {
  CHECK(is_light(Morphism::identity(P3())));
  auto p = P3();
  CHECK_FALSE(is_light(split_edge(p, v(p, "r"), v(p, "a"), v(p, "a"))));
  CHECK(is_light(example_no_confluent().g));
}

TEST_CASE("confluent") {
  auto ex = example_no_confluent();
  CHECK(is_confluent(ex.f));
  CHECK(is_confluent(ex.g));
  CHECK(is_confluent_semantic(ex.f));
  auto bad = example_non_confluent_rooted();
  CHECK_FALSE(is_confluent(bad));
  CHECK_FALSE(is_confluent_semantic(bad));
  CHECK(is_confluent(Morphism::identity(P3())));
}

TEST_CASE("classifiers agree with the reference definitions") {
  EnumerationSpec any;
  any.rooted = false;
  auto graphs = enumerate_connected_graphs(5);
  for (const auto& s : graphs)
    for (const auto& t : graphs) {
      if (t->size() > s->size()) continue;
      ref::G rs(*s), rt(*t);
      for (auto& f : enumerate_epimorphisms(s, t, any)) {
        CHECK(is_monotone(f) == ref::monotone(rs, rt, f.map()));
        CHECK(is_light(f) == ref::light(rs, f.map()));
        CHECK(is_confluent(f) == ref::confluent(rs, rt, f.map()));
        CHECK(is_confluent_semantic(f) == ref::confluent(rs, rt, f.map()));
      }
    }
  auto trees = enumerate_rooted_trees(6);
  for (const auto& s : trees)
    for (const auto& t : trees) {
      if (t->size() > s->size()) continue;
      ref::G rs(*s), rt(*t);
      for (auto& f : enumerate_epimorphisms(s, t, EnumerationSpec{})) {
        CHECK(is_confluent(f) == ref::confluent(rs, rt, f.map()));
        CHECK(is_end_vertex_preserving(f) == ref::end_vertex_preserving(rs, rt, f.map()));
      }
    }
}

TEST_CASE("monotone implies confluent") {
  EnumerationSpec mono;
  mono.rooted = false;
  mono.monotone = true;
  auto graphs = enumerate_connected_graphs(5);
  for (const auto& s : graphs)
    for (const auto& t : graphs)
      if (t->size() <= s->size())
        for (auto& f : enumerate_epimorphisms(s, t, mono)) CHECK(is_confluent(f));
}

TEST_CASE("monotone images of arcs are arcs with end vertices preserved") {
  EnumerationSpec mono;
  mono.rooted = false;
  mono.monotone = true;
  auto graphs = enumerate_connected_graphs(6);
  for (const auto& s : graphs) {
    auto arc = is_arc(*s);
    if (!arc) continue;
    for (const auto& t : graphs) {
      if (t->size() > s->size()) continue;
      if (t->size() == 1) continue;
      for (auto& f : enumerate_epimorphisms(s, t, mono)) {
        auto image_arc = is_arc(*t);
        REQUIRE(image_arc);
        CHECK(t->ord(f(arc->first)) == 1);
        CHECK(t->ord(f(arc->second)) == 1);
      }
    }
  }
}

TEST_CASE("fibres along a branch are intervals") {
  auto trees = enumerate_rooted_trees(6);
  for (const auto& s : trees)
    for (const auto& t : trees) {
      if (t->size() > s->size()) continue;
      for (auto& f : enumerate_epimorphisms(s, t, EnumerationSpec{}))
        for (const auto& br : branches(*s)) {
          // fibres of f along the branch are intervals
          for (size_t i = 0; i < br.size(); ++i)
            for (size_t k = i + 2; k < br.size(); ++k)
              if (f(br[i]) == f(br[k]))
                for (size_t j = i + 1; j < k; ++j) CHECK(f(br[j]) == f(br[i]));
        }
    }
}

TEST_CASE("right-factor laws on rooted trees up to 5 vertices") {
  auto trees = enumerate_rooted_trees(5);
  for (const auto& x : trees)
    for (const auto& y : trees) {
      if (y->size() > x->size()) continue;
      auto fs = enumerate_epimorphisms(x, y, EnumerationSpec{});
      if (fs.empty()) continue;
      for (const auto& z : trees) {
        if (z->size() > y->size()) continue;
        for (auto& g : enumerate_epimorphisms(y, z, EnumerationSpec{}))
          for (auto& f : fs) {
            auto h = compose(g, f);
            if (h.report().confluent) CHECK(g.report().confluent);
            if (h.report().monotone) CHECK(g.report().monotone);
            if (h.report().end_vertex_preserving) CHECK(g.report().end_vertex_preserving);
          }
      }
    }
}

TEST_CASE("end-vertex preservation") {
  CHECK(is_end_vertex_preserving(Morphism::identity(P3())));
  auto ex = example_not_order_pres();
  CHECK(is_end_vertex_preserving(ex.f));
  auto p = P3();
  CHECK(is_end_vertex_preserving(split_edge(p, v(p, "r"), v(p, "a"), v(p, "a"))));
}

TEST_CASE("split_edge") {
  auto p = P2();
  auto s = split_edge(p, v(p, "r"), v(p, "a"), v(p, "a"));
  CHECK(s.domain().size() == 3);
  int x = s.domain().index("x");
  REQUIRE(x >= 0);
  CHECK(s(x) == v(p, "a"));
  CHECK(is_arc(s.domain()).has_value());
  CHECK(is_monotone(s));
  CHECK(is_splitting_edge(s));
}

TEST_CASE("add_edge") {
  auto p = P2();
  auto at_root = add_edge(p, p->root());
  CHECK(at_root.domain().sord(at_root.domain().root()) == 2);
  auto at_end = add_edge(p, v(p, "a"));
  CHECK_FALSE(is_light(at_end));
  CHECK(is_end_vertex_preserving(at_end));
  CHECK(is_adding_edge(at_end));
  auto q = P3();
  CHECK_FALSE(is_end_vertex_preserving(add_edge(q, v(q, "a"))));
}

TEST_CASE("antitransitivity split") {
  auto p = share(P3()->without_root());
  auto f = antitransitivity_split(p, v(p, "r"), v(p, "a"));
  CHECK(f.domain().size() == 5);
  CHECK(is_arc(f.domain()).has_value());
  CHECK(is_monotone(f));
  // the new neighbours of a and b map to a and b
  for (auto [a, b] : f.domain().edges()) {
    int fa = f(a), fb = f(b);
    CHECK((fa == fb || p->adjacent(fa, fb)));
  }
}

TEST_CASE("elementary light confluent") {
  // duplicate the cone of a in A1 with child c
  auto t = share(Graph::from_names({"r", "a", "c"}, {{"r", "a"}, {"a", "c"}}, "r"));
  auto s = share(Graph::from_names({"r", "a1", "a2", "c1", "c2"}, {{"r", "a1"}, {"r", "a2"}, {"a1", "c1"}, {"a2", "c2"}}, "r"));
  auto f = Morphism::from_names(s, t, {{"r", "r"}, {"a1", "a"}, {"a2", "a"}, {"c1", "c"}, {"c2", "c"}});
  auto w = is_elementary_light_confluent(f);
  REQUIRE(w);
  CHECK(s->name(w->v) == "r");
  CHECK_FALSE(is_elementary_light_confluent(Morphism::identity(t)));
  CHECK_FALSE(is_elementary_light_confluent(split_edge(t, v(t, "r"), v(t, "a"), v(t, "a"))));
}

TEST_CASE("restrict_to_component") {
  auto ex = example_no_confluent();
  const Graph& A = ex.f.codomain();
  std::vector<int> all{0, 1};
  std::vector<int> dom_all{0, 1, 2};
  auto whole = restrict_to_component(ex.f, all, dom_all);
  CHECK(whole.map() == ex.f.map());
  std::vector<int> x0{A.index("0")};
  std::vector<int> ya{ex.f.domain().index("a")};
  auto r = restrict_to_component(ex.f, x0, ya);
  CHECK(r.domain().size() == 1);
  CHECK(r.codomain().size() == 1);
}
