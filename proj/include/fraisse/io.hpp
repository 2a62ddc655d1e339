#pragma once
#include <string>

#include <json.hpp>

#include "fraisse/morphism.hpp"

namespace fraisse {

using json = nlohmann::ordered_json;

json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);
json morphism_to_json(const Morphism& f);
Morphism morphism_from_json(const json& j);

std::string graph_to_dot(const Graph& g, const std::string& name = "G");
std::string morphism_to_dot(const Morphism& f, const std::string& name = "F");

json report_to_json(const ClassReport& r);

}  // namespace fraisse
