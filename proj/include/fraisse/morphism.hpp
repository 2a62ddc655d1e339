#pragma once
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fraisse/graph.hpp"

namespace fraisse {

struct ClassReport {
  bool monotone = false;
  bool light = false;
  bool confluent = false;
  bool end_vertex_preserving = false;
  bool splitting_edge = false;
  bool adding_edge = false;
  bool elementary_light_confluent = false;
};

// vertex map between graphs; make() validates it as an epimorphism
class Morphism {
 public:
  Morphism() = default;
  Morphism(GraphPtr dom, GraphPtr cod, std::vector<int> map);  // unchecked
  static Morphism make(GraphPtr dom, GraphPtr cod, std::vector<int> map);
  static Morphism from_names(GraphPtr dom, GraphPtr cod, const std::map<std::string, std::string>& m);
  static Morphism identity(GraphPtr g);

  const Graph& domain() const { return *dom_; }
  const Graph& codomain() const { return *cod_; }
  const GraphPtr& domain_ptr() const { return dom_; }
  const GraphPtr& codomain_ptr() const { return cod_; }
  int operator()(int v) const { return map_[v]; }
  const std::vector<int>& map() const { return map_; }
  std::vector<std::vector<int>> fibers() const;

  const ClassReport& report() const;

 private:
  GraphPtr dom_, cod_;
  std::vector<int> map_;
  struct Cache {
    std::once_flag once;
    ClassReport r;
  };
  std::shared_ptr<Cache> cache_;
};

// names of violated clauses, empty when the map is an epimorphism
std::vector<std::string> violations(const Graph& dom, const Graph& cod, const std::vector<int>& map);
bool is_epimorphism(const Graph& dom, const Graph& cod, const std::vector<int>& map);

// g after f
Morphism compose(const Morphism& g, const Morphism& f);
bool same_graph(const Graph& a, const Graph& b);
bool equal_maps(const Morphism& a, const Morphism& b);

bool is_monotone(const Morphism& f);
bool is_light(const Morphism& f);
bool is_confluent(const Morphism& f);
bool is_confluent_semantic(const Morphism& f);
bool is_end_vertex_preserving(const Morphism& f);
bool is_isomorphism(const Morphism& f);
bool is_splitting_edge(const Morphism& f);
bool is_adding_edge(const Morphism& f);

struct ElcWitness {
  int v = -1;
  std::vector<int> c1, c2;
};
std::optional<ElcWitness> is_elementary_light_confluent(const Morphism& f);

ClassReport classify(const Morphism& f);

// rooted tree obtained by splitting edge {a,b} with a new vertex; the map
// sends the new vertex to toward (a or b)
Morphism split_edge(const GraphPtr& t, int a, int b, int toward, const std::string& fresh = "");
Morphism add_edge(const GraphPtr& t, int v, const std::string& fresh = "");

Morphism antitransitivity_split(const GraphPtr& g, int a, int b);

// restriction of f to a component y of the preimage of x, onto x
Morphism restrict_to_component(const Morphism& f, const std::vector<int>& x, const std::vector<int>& y);

std::string fresh_name(const Graph& g, const std::string& stem);

}  // namespace fraisse
