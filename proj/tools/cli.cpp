#include "cli.hpp"

#include <unistd.h>

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fraisse/amalgamate.hpp"
#include "fraisse/canon.hpp"
#include "fraisse/factorize.hpp"
#include "fraisse/io.hpp"
#include "fraisse/mn.hpp"
#include "fraisse/oracle.hpp"
#include "fraisse/sequences.hpp"
#include "fraisse/suite.hpp"

namespace fraisse {

namespace {

enum class Format { json, dot, table };

struct Common {
  std::string input;
  std::string format;
  int max_vertices = 8;
  int horizon = 3;
  long long cap = 0;
  unsigned seed = 1;
};

Format resolve_format(const std::string& f) {
  if (f.empty()) return isatty(STDOUT_FILENO) ? Format::table : Format::json;
  if (f == "json") return Format::json;
  if (f == "dot") return Format::dot;
  if (f == "table") return Format::table;
  throw UsageError("--format: expected json, dot or table, got '" + f + "'");
}

json read_input(const std::string& in) {
  if (in.empty()) throw UsageError("--input is required");
  std::string text;
  auto first = in.find_first_not_of(" \t\n");
  if (first != std::string::npos && (in[first] == '{' || in[first] == '[')) {
    text = in;
  } else {
    std::ifstream f(in);
    if (!f) throw UsageError("--input: cannot open '" + in + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("--input is not valid json: ") + e.what());
  }
}

bool is_morphism_json(const json& j) { return j.is_object() && j.contains("map"); }

void table_graph(std::ostream& out, const Graph& g) {
  out << "vertices " << g.size() << ", edges " << g.edge_count();
  if (g.has_root()) out << ", root " << g.name(g.root());
  out << "\n";
  for (int v = 0; v < g.size(); ++v) {
    out << "  " << g.name(v) << ":";
    for (int w : g.adj(v)) out << " " << g.name(w);
    out << "\n";
  }
}

void table_morphism(std::ostream& out, const Morphism& f) {
  out << "domain: ";
  table_graph(out, f.domain());
  out << "codomain: ";
  table_graph(out, f.codomain());
  out << "map:\n";
  for (int v = 0; v < f.domain().size(); ++v) out << "  " << f.domain().name(v) << " -> " << f.codomain().name(f(v)) << "\n";
}

void emit_graph(std::ostream& out, const Graph& g, Format fmt) {
  if (fmt == Format::json) out << graph_to_json(g).dump(2) << "\n";
  else if (fmt == Format::dot) out << graph_to_dot(g);
  else table_graph(out, g);
}

void emit_morphism(std::ostream& out, const Morphism& f, Format fmt) {
  if (fmt == Format::json) out << morphism_to_json(f).dump(2) << "\n";
  else if (fmt == Format::dot) out << morphism_to_dot(f);
  else table_morphism(out, f);
}

void emit_json_or_table(std::ostream& out, const json& j, Format fmt) {
  if (fmt == Format::dot) throw UsageError("--format dot is not available for this verb");
  if (fmt == Format::json) {
    out << j.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

json classification(const Morphism& f) {
  json j = report_to_json(f.report());
  j["epimorphism"] = is_epimorphism(f.domain(), f.codomain(), f.map());
  j["isomorphism"] = is_isomorphism(f);
  if (f.domain().is_rooted_tree() && f.codomain().is_rooted_tree()) {
    j["special"] = is_special(f);
    j["special_star"] = is_special_star(f);
    j["simple_confluent"] = f.report().confluent && f.report().end_vertex_preserving &&
                            static_cast<bool>(decompose_simple_confluent(f));
  }
  return j;
}

json decomposition_json(const Decomposition& d) {
  json j;
  json fs = json::array();
  for (size_t i = 0; i < d.factors.size(); ++i) {
    json e = morphism_to_json(d.factors[i]);
    e["tag"] = tag_name(d.tags[i]);
    fs.push_back(e);
  }
  j["factors"] = fs;
  j["residual"] = morphism_to_json(d.residual);
  j["verified"] = d.verify();
  return j;
}

json amalgam_json(const AmalgamResult& r) {
  json j;
  j["D"] = graph_to_json(*r.D);
  j["f0"] = morphism_to_json(r.f0);
  j["g0"] = morphism_to_json(r.g0);
  return j;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"finite constructions for trees, epimorphisms and their Fraisse sequence", "fraisse"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* s) {
    s->add_option("--input", c.input, "file path or inline json");
    s->add_option("--format", c.format, "json, dot or table");
    s->add_option("--max-vertices", c.max_vertices, "vertex bound for searches and enumeration");
    s->add_option("--horizon", c.horizon, "stage horizon for extension checks");
    s->add_option("--cap", c.cap, "materialization cap in vertices");
    s->add_option("--seed", c.seed, "random seed");
  };

  int height = 2, sord = 2, min_vertices = 1;
  bool rooted = true;
  auto* gen = app.add_subcommand("gen-tree", "regular tree, or all rooted trees up to --max-vertices");
  common(gen);
  gen->add_option("--height", height);
  gen->add_option("--sord", sord);
  gen->add_option("--min-vertices", min_vertices);
  bool enumerate = false;
  gen->add_flag("--all", enumerate, "enumerate every tree up to --max-vertices");
  gen->add_flag("!--unrooted", rooted, "enumerate unrooted trees");

  auto* cls = app.add_subcommand("classify", "classify a morphism");
  common(cls);

  std::string mode = "simple";
  auto* fac = app.add_subcommand("factorize", "factor a morphism");
  common(fac);
  fac->add_option("--mode", mode, "simple, star, light or monotone-light");

  std::string method = "standard";
  auto* am = app.add_subcommand("amalgamate", "amalgamate {\"f\": ..., \"g\": ...}");
  common(am);
  am->add_option("--method", method,
                 "standard, component, rooted-light, m3, simple-monotone, mono-light, simple-confluent or search");
  bool want_monotone = false, want_light = false, want_confluent = false, want_rooted = false;
  am->add_flag("--monotone", want_monotone, "search: monotone legs");
  am->add_flag("--light", want_light, "search: light legs");
  am->add_flag("--confluent", want_confluent, "search: confluent legs");
  am->add_flag("--rooted", want_rooted, "search: rooted trees");

  int m = 1;
  bool count_only = false;
  auto* fs = app.add_subcommand("fraisse-stage", "stage A_m of the sequence");
  common(fs);
  fs->add_option("--m", m)->required();
  fs->add_flag("--count-only", count_only);
  bool with_map = false;
  fs->add_flag("--map", with_map, "emit f_m : A_{m+1} -> A_m instead");

  std::string seq, export_as;
  auto* mn = app.add_subcommand("mn-tree", "discrete MN tree of a sequence");
  common(mn);
  mn->add_option("--seq", seq)->required();
  mn->add_option("--export", export_as, "dot or json");
  std::string prefix;
  bool has_prefix = false;
  mn->add_option("--prefix", prefix, "emit the bonding map from this initial segment instead")->each([&](const std::string&) {
    has_prefix = true;
  });

  int gn = 1, gk = 1;
  std::string direction = "tree";
  auto* grid = app.add_subcommand("grid", "A_{nk} and its bonding maps");
  common(grid);
  grid->add_option("--n", gn)->required();
  grid->add_option("--k", gk)->required();
  grid->add_option("--map", direction, "tree, horizontal or vertical");

  std::vector<int> only;
  auto* vs = app.add_subcommand("verify-suite", "run the acceptance criteria");
  common(vs);
  vs->add_option("--only", only, "criteria to run");

  auto* ex = app.add_subcommand("export", "re-emit a graph or morphism");
  common(ex);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (c.cap > 0) set_materialization_cap(c.cap);
    Format fmt = resolve_format(c.format);

    if (gen->parsed()) {
      if (enumerate) {
        auto trees = rooted ? enumerate_rooted_trees(c.max_vertices, min_vertices)
                            : enumerate_trees(c.max_vertices, min_vertices);
        if (fmt == Format::json) {
          json arr = json::array();
          for (auto& t : trees) arr.push_back(graph_to_json(*t));
          out << arr.dump(2) << "\n";
        } else {
          for (auto& t : trees) emit_graph(out, *t, fmt);
        }
        return 0;
      }
      emit_graph(out, *regular_tree(height, sord), fmt);
      return 0;
    }

    if (cls->parsed()) {
      Morphism f = morphism_from_json(read_input(c.input));
      emit_json_or_table(out, classification(f), fmt);
      return 0;
    }

    if (fac->parsed()) {
      Morphism f = morphism_from_json(read_input(c.input));
      if (mode == "monotone-light") {
        auto ml = monotone_light(f);
        json j;
        j["monotone"] = morphism_to_json(ml.m);
        j["light"] = morphism_to_json(ml.l);
        emit_json_or_table(out, j, fmt);
        return 0;
      }
      DecomposeOutcome d;
      if (mode == "simple") d = decompose_simple_confluent(f);
      else if (mode == "star") d = decompose_simple_star(f);
      else if (mode == "light") d = decompose_light_confluent(f);
      else throw UsageError("--mode: unknown mode '" + mode + "'");
      if (!d) throw DomainError("no decomposition: " + d.failure);
      emit_json_or_table(out, decomposition_json(*d.decomposition), fmt);
      return 0;
    }

    if (am->parsed()) {
      json j = read_input(c.input);
      if (!j.is_object() || !j.contains("f") || !j.contains("g")) throw DomainError("amalgamate input needs keys f and g");
      Morphism f = morphism_from_json(j["f"]), g = morphism_from_json(j["g"]);
      if (!same_graph(f.codomain(), g.codomain())) throw DomainError("f and g have different codomains");
      g = Morphism(g.domain_ptr(), f.codomain_ptr(), g.map());
      AmalgamResult r;
      if (method == "standard") r = standard(f, g);
      else if (method == "component") r = component_amalgam(f, g);
      else if (method == "rooted-light") r = rooted_light(f, g);
      else if (method == "m3") r = m3(f, g);
      else if (method == "simple-monotone") r = simple_monotone_pair(f, g);
      else if (method == "mono-light") r = mono_light_pair(f, g);
      else if (method == "simple-confluent") r = simple_confluent_pair(f, g);
      else if (method == "search") {
        AmalgamSpec spec;
        spec.rooted = want_rooted;
        spec.monotone = want_monotone;
        spec.light = want_light;
        spec.confluent = want_confluent;
        SearchStats st;
        auto found = search_amalgam(f, g, spec, c.max_vertices, &st);
        if (!found) throw DomainError("no amalgam with at most " + std::to_string(c.max_vertices) + " vertices (" +
                                      std::to_string(st.shapes) + " shapes searched)");
        r = *found;
      } else {
        throw UsageError("--method: unknown method '" + method + "'");
      }
      json out_j = amalgam_json(r);
      out_j["commutes"] = commutes(f, g, r);
      if (fmt == Format::dot) out << graph_to_dot(*r.D, "D");
      else emit_json_or_table(out, out_j, fmt);
      return 0;
    }

    if (fs->parsed()) {
      if (count_only) {
        out << fraisse_stage(m)->size() << "\n";
        return 0;
      }
      if (with_map) emit_morphism(out, fraisse_map(m), fmt);
      else emit_graph(out, *fraisse_stage(m), fmt);
      return 0;
    }

    if (mn->parsed()) {
      MNSequence d = parse_mn_sequence(seq);
      if (has_prefix) {
        emit_morphism(out, mn_map(parse_mn_sequence(prefix), d), fmt);
        return 0;
      }
      HeightedTree t = mn_tree(d);
      std::string as = export_as.empty() ? (fmt == Format::dot ? "dot" : fmt == Format::json ? "json" : "table") : export_as;
      if (as == "dot") {
        out << geometric_export(t);
      } else if (as == "json") {
        json j = graph_to_json(*t.tree);
        json hs = json::object();
        for (int v = 0; v < t.tree->size(); ++v) hs[t.tree->name(v)] = to_string(t.heights[v]);
        j["heights"] = hs;
        j["leaves"] = leaf_count(*t.tree);
        out << j.dump(2) << "\n";
      } else if (as == "table") {
        table_graph(out, *t.tree);
        out << "leaves " << leaf_count(*t.tree) << "\n";
      } else {
        throw UsageError("--export: expected dot or json, got '" + export_as + "'");
      }
      return 0;
    }

    if (grid->parsed()) {
      if (direction == "tree") emit_graph(out, *grid_tree(gn, gk), fmt);
      else if (direction == "horizontal") emit_morphism(out, grid_horizontal(gn, gk), fmt);
      else if (direction == "vertical") emit_morphism(out, grid_vertical(gn, gk), fmt);
      else throw UsageError("--map: expected tree, horizontal or vertical");
      return 0;
    }

    if (vs->parsed()) {
      SuiteOptions opt;
      opt.seed = c.seed;
      opt.only = only;
      bool all = true;
      json arr = json::array();
      run_suite(opt, [&](const CriterionResult& r) {
        all = all && r.pass;
        // timings vary run to run, so they go to stderr
        err << "criterion " << r.id << " took " << r.seconds << " s\n";
        if (fmt == Format::json) {
          json j;
          j["criterion"] = r.id;
          j["title"] = r.title;
          j["pass"] = r.pass;
          j["detail"] = r.detail;
          arr.push_back(j);
        } else {
          out << format_result(r) << "\n" << std::flush;
        }
      });
      if (fmt == Format::json) out << arr.dump(2) << "\n";
      return all ? 0 : 1;
    }

    if (ex->parsed()) {
      json j = read_input(c.input);
      if (is_morphism_json(j)) emit_morphism(out, morphism_from_json(j), fmt);
      else emit_graph(out, graph_from_json(j), fmt);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace fraisse
