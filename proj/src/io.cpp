#include "fraisse/io.hpp"

#include <sstream>

namespace fraisse {

json graph_to_json(const Graph& g) {
  json j;
  j["vertices"] = g.names();
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({g.name(u), g.name(v)});
  j["edges"] = edges;
  j["root"] = g.has_root() ? json(g.name(g.root())) : json(nullptr);
  return j;
}

Graph graph_from_json(const json& j) {
  try {
    std::vector<std::string> vs = j.at("vertices").get<std::vector<std::string>>();
    std::vector<std::pair<std::string, std::string>> es;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw DomainError("edge must be a pair");
      es.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    std::optional<std::string> root;
    if (j.contains("root") && !j["root"].is_null()) root = j["root"].get<std::string>();
    return Graph::from_names(std::move(vs), es, root);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed graph json: ") + e.what());
  }
}

json morphism_to_json(const Morphism& f) {
  json j;
  j["domain"] = graph_to_json(f.domain());
  j["codomain"] = graph_to_json(f.codomain());
  json m = json::object();
  for (int v = 0; v < f.domain().size(); ++v) m[f.domain().name(v)] = f.codomain().name(f(v));
  j["map"] = m;
  return j;
}

Morphism morphism_from_json(const json& j) {
  try {
    auto dom = share(graph_from_json(j.at("domain")));
    auto cod = share(graph_from_json(j.at("codomain")));
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : j.at("map").items()) m[k] = v.get<std::string>();
    return Morphism::from_names(dom, cod, m);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed morphism json: ") + e.what());
  }
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void emit_graph(std::ostringstream& os, const Graph& g, const std::string& prefix) {
  for (int v = 0; v < g.size(); ++v) {
    os << "  " << quote(prefix + g.name(v)) << " [label=" << quote(g.name(v));
    if (v == g.root()) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (auto [u, v] : g.edges())
    os << "  " << quote(prefix + g.name(u)) << " -- " << quote(prefix + g.name(v)) << ";\n";
}

}  // namespace

std::string graph_to_dot(const Graph& g, const std::string& name) {
  std::ostringstream os;
  os << "graph " << quote(name) << " {\n";
  emit_graph(os, g, "");
  os << "}\n";
  return os.str();
}

std::string morphism_to_dot(const Morphism& f, const std::string& name) {
  std::ostringstream os;
  os << "graph " << quote(name) << " {\n";
  os << " subgraph cluster_dom {\n  label=\"domain\";\n";
  emit_graph(os, f.domain(), "d:");
  os << " }\n subgraph cluster_cod {\n  label=\"codomain\";\n";
  emit_graph(os, f.codomain(), "c:");
  os << " }\n";
  for (int v = 0; v < f.domain().size(); ++v)
    os << "  " << quote("d:" + f.domain().name(v)) << " -- " << quote("c:" + f.codomain().name(f(v)))
       << " [style=dashed, constraint=false];\n";
  os << "}\n";
  return os.str();
}

json report_to_json(const ClassReport& r) {
  json j;
  j["monotone"] = r.monotone;
  j["light"] = r.light;
  j["confluent"] = r.confluent;
  j["end_vertex_preserving"] = r.end_vertex_preserving;
  j["splitting_edge"] = r.splitting_edge;
  j["adding_edge"] = r.adding_edge;
  j["elementary_light_confluent"] = r.elementary_light_confluent;
  return j;
}

}  // namespace fraisse
