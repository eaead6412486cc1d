#include "arbor/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "arbor/error.hpp"

namespace arbor {
namespace {

using ojson = nlohmann::ordered_json;

void expect_object(const ojson& j, const std::string& what) {
  if (!j.is_object()) throw_invalid(what + " must be a JSON object");
}

void expect_array(const ojson& j, const std::string& what) {
  if (!j.is_array()) throw_invalid(what + " must be a JSON array");
}

const ojson& require_field(const ojson& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw_invalid(what + " is missing field '" + key + "'");
  return j.at(key);
}

void reject_unknown(const ojson& j, std::initializer_list<const char*> allowed,
                    const std::string& what) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || item.key() == a;
    if (!known) throw_invalid(what + " has unknown field '" + item.key() + "'");
  }
}

int int_field(const ojson& j, const char* key, const std::string& what) {
  const ojson& v = require_field(j, key, what);
  if (!v.is_number_integer()) throw_invalid(what + " field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string string_field(const ojson& j, const char* key, const std::string& what) {
  const ojson& v = require_field(j, key, what);
  if (!v.is_string()) throw_invalid(what + " field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<Permutation> permutations_from_array(const ojson& j, int degree,
                                                 const std::string& what) {
  expect_array(j, what);
  std::vector<Permutation> result;
  for (const ojson& item : j) result.push_back(permutation_from_json(item, degree));
  return result;
}

ojson permutations_to_array(const std::vector<Permutation>& perms) {
  ojson j = ojson::array();
  for (const Permutation& p : perms) j.push_back(permutation_to_json(p));
  return j;
}

}  // namespace

ojson permutation_to_json(const Permutation& p) {
  ojson j;
  j["degree"] = p.degree();
  j["images"] = p.images();
  return j;
}

Permutation permutation_from_json(const ojson& j, int degree_hint) {
  if (j.is_string()) {
    if (degree_hint < 0) {
      throw_invalid("a cycle-string permutation needs a degree from context: " +
                    j.get<std::string>());
    }
    return parse_cycles(j.get<std::string>(), degree_hint);
  }
  expect_object(j, "a permutation");
  reject_unknown(j, {"degree", "images"}, "a permutation");
  int degree = int_field(j, "degree", "a permutation");
  if (degree_hint >= 0 && degree != degree_hint) {
    throw_invalid("permutation degree " + std::to_string(degree) + " does not match the " +
                  "expected degree " + std::to_string(degree_hint));
  }
  const ojson& images = require_field(j, "images", "a permutation");
  expect_array(images, "permutation images");
  std::vector<int> table;
  for (const ojson& v : images) {
    if (!v.is_number_integer()) throw_invalid("permutation images must be integers");
    table.push_back(v.get<int>());
  }
  if (static_cast<int>(table.size()) != degree) {
    throw_invalid("permutation images have length " + std::to_string(table.size()) +
                  ", expected " + std::to_string(degree));
  }
  return Permutation(std::move(table));
}

ojson group_to_json(const PermGroup& group) {
  ojson j;
  j["degree"] = group.degree();
  j["generators"] = permutations_to_array(group.generators());
  return j;
}

PermGroup group_from_json(const ojson& j) {
  expect_object(j, "a permutation group");
  reject_unknown(j, {"degree", "generators"}, "a permutation group");
  int degree = int_field(j, "degree", "a permutation group");
  if (degree < 0) throw_invalid("a permutation group cannot have negative degree");
  std::vector<Permutation> generators = permutations_from_array(
      require_field(j, "generators", "a permutation group"), degree, "group generators");
  return PermGroup(degree, std::move(generators));
}

ojson graph_to_json(const SerreGraph& graph) {
  std::vector<SerreVertex> vertices = graph.vertices();
  std::sort(vertices.begin(), vertices.end(),
            [](const SerreVertex& a, const SerreVertex& b) { return a.id < b.id; });
  ojson jv = ojson::array();
  for (const SerreVertex& v : vertices) {
    ojson rec;
    rec["id"] = v.id;
    rec["boundary"] = v.boundary;
    jv.push_back(std::move(rec));
  }
  ojson je = ojson::array();
  for (const SerreEdge& e : graph.edges()) {
    ojson rec;
    rec["id"] = e.id;
    rec["origin"] = e.origin;
    rec["target"] = e.target;
    rec["reverse"] = e.reverse;
    je.push_back(std::move(rec));
  }
  ojson j;
  j["vertices"] = std::move(jv);
  j["edges"] = std::move(je);
  return j;
}

SerreGraph graph_from_json(const ojson& j) {
  expect_object(j, "a graph");
  reject_unknown(j, {"vertices", "edges"}, "a graph");
  const ojson& jv = require_field(j, "vertices", "a graph");
  expect_array(jv, "graph vertices");
  std::vector<SerreVertex> vertices;
  for (const ojson& rec : jv) {
    expect_object(rec, "a vertex");
    reject_unknown(rec, {"id", "boundary"}, "a vertex");
    SerreVertex v;
    v.id = string_field(rec, "id", "a vertex");
    if (rec.contains("boundary")) {
      if (!rec.at("boundary").is_boolean()) throw_invalid("vertex boundary must be a boolean");
      v.boundary = rec.at("boundary").get<bool>();
    }
    vertices.push_back(std::move(v));
  }
  const ojson& je = require_field(j, "edges", "a graph");
  expect_array(je, "graph edges");
  std::vector<SerreEdge> edges;
  for (const ojson& rec : je) {
    expect_object(rec, "an edge");
    reject_unknown(rec, {"id", "origin", "target", "reverse"}, "an edge");
    edges.push_back({string_field(rec, "id", "an edge"), string_field(rec, "origin", "an edge"),
                     string_field(rec, "target", "an edge"),
                     string_field(rec, "reverse", "an edge")});
  }
  return SerreGraph(std::move(vertices), std::move(edges));
}

ojson group_ref_to_json(const GroupRef& ref, const std::string& implicit_leaf) {
  if (ref.is_finite()) {
    if (ref.finite_leaf_id() == implicit_leaf) return group_to_json(ref.finite_group());
    ojson j;
    j["kind"] = "finite";
    j["leaf"] = ref.finite_leaf_id();
    j["group"] = group_to_json(ref.finite_group());
    return j;
  }
  const GroupRef::AmalgamNode& node = ref.amalgam_node();
  ojson j;
  j["kind"] = "amalgam";
  j["label"] = node.label;
  j["left"] = group_ref_to_json(node.left);
  j["right"] = group_ref_to_json(node.right);
  j["edge_group"] = group_to_json(node.edge_group);
  j["left_leaf"] = node.left_leaf;
  j["left_images"] = permutations_to_array(node.left_inclusion.generator_images());
  j["right_leaf"] = node.right_leaf;
  j["right_images"] = permutations_to_array(node.right_inclusion.generator_images());
  return j;
}

GroupRef group_ref_from_json(const ojson& j, const std::string& implicit_leaf) {
  expect_object(j, "a group reference");
  if (!j.contains("kind")) {
    if (implicit_leaf.empty()) {
      throw_invalid("a bare permutation group is not a valid group reference here; "
                    "use the {\"kind\": ...} form");
    }
    return GroupRef::finite(implicit_leaf, group_from_json(j));
  }
  std::string kind = string_field(j, "kind", "a group reference");
  if (kind == "finite") {
    reject_unknown(j, {"kind", "leaf", "group"}, "a finite group reference");
    return GroupRef::finite(string_field(j, "leaf", "a finite group reference"),
                            group_from_json(require_field(j, "group", "a finite group "
                                                                      "reference")));
  }
  if (kind != "amalgam") throw_invalid("unknown group reference kind '" + kind + "'");
  reject_unknown(j,
                 {"kind", "label", "left", "right", "edge_group", "left_leaf", "left_images",
                  "right_leaf", "right_images"},
                 "an amalgam reference");
  GroupRef left = group_ref_from_json(require_field(j, "left", "an amalgam reference"));
  GroupRef right = group_ref_from_json(require_field(j, "right", "an amalgam reference"));
  PermGroup edge_group =
      group_from_json(require_field(j, "edge_group", "an amalgam reference"));
  std::string left_leaf = string_field(j, "left_leaf", "an amalgam reference");
  std::string right_leaf = string_field(j, "right_leaf", "an amalgam reference");
  const PermGroup& left_group = left.leaf_group(left_leaf);
  const PermGroup& right_group = right.leaf_group(right_leaf);
  Homomorphism left_inclusion = make_homomorphism(
      edge_group,
      permutations_from_array(require_field(j, "left_images", "an amalgam reference"),
                              left_group.degree(), "left images"),
      left_group);
  Homomorphism right_inclusion = make_homomorphism(
      edge_group,
      permutations_from_array(require_field(j, "right_images", "an amalgam reference"),
                              right_group.degree(), "right images"),
      right_group);
  std::string label = j.contains("label") ? string_field(j, "label", "an amalgam reference")
                                          : std::string();
  return GroupRef::amalgam(std::move(left), std::move(right), std::move(edge_group), left_leaf,
                           std::move(left_inclusion), right_leaf, std::move(right_inclusion),
                           std::move(label));
}

ojson gog_to_json(const GraphOfGroups& gog) {
  ojson j = graph_to_json(gog.graph);
  ojson groups = ojson::object();
  for (const auto& [vertex, ref] : gog.vertex_groups) {
    groups[vertex] = group_ref_to_json(ref, vertex);
  }
  j["vertex_groups"] = std::move(groups);
  ojson edge_groups = ojson::object();
  for (const auto& [key, group] : gog.edge_groups) {
    edge_groups[key] = group_to_json(group);
  }
  j["edge_groups"] = std::move(edge_groups);
  ojson inclusions = ojson::object();
  for (const auto& [edge, inc] : gog.inclusions) {
    const GroupRef& ref = gog.vertex_group(gog.graph.edge(edge).target);
    if (ref.is_finite() && inc.target_leaf == ref.finite_leaf_id()) {
      inclusions[edge] = permutations_to_array(inc.hom.generator_images());
    } else {
      ojson rec;
      rec["leaf"] = inc.target_leaf;
      rec["images"] = permutations_to_array(inc.hom.generator_images());
      inclusions[edge] = std::move(rec);
    }
  }
  j["inclusions"] = std::move(inclusions);
  return j;
}

GraphOfGroups gog_from_json(const ojson& j) {
  expect_object(j, "a graph of groups");
  reject_unknown(j, {"vertices", "edges", "vertex_groups", "edge_groups", "inclusions"},
                 "a graph of groups");
  ojson graph_part;
  graph_part["vertices"] = require_field(j, "vertices", "a graph of groups");
  graph_part["edges"] = require_field(j, "edges", "a graph of groups");

  GraphOfGroups gog;
  gog.graph = graph_from_json(graph_part);

  const ojson& groups = require_field(j, "vertex_groups", "a graph of groups");
  expect_object(groups, "vertex_groups");
  for (const auto& item : groups.items()) {
    if (!gog.graph.has_vertex(item.key())) {
      throw_invalid("vertex_groups names unknown vertex '" + item.key() + "'");
    }
    gog.vertex_groups.emplace(item.key(), group_ref_from_json(item.value(), item.key()));
  }

  const ojson& edge_groups = require_field(j, "edge_groups", "a graph of groups");
  expect_object(edge_groups, "edge_groups");
  for (const auto& item : edge_groups.items()) {
    if (!gog.graph.has_edge(item.key())) {
      throw_invalid("edge_groups names unknown edge '" + item.key() + "'");
    }
    if (gog.graph.edge(item.key()).reverse < item.key()) {
      throw_invalid("edge_groups must be keyed by the lexicographically smaller direction, "
                    "got '" + item.key() + "'");
    }
    gog.edge_groups.emplace(item.key(), group_from_json(item.value()));
  }

  const ojson& inclusions = require_field(j, "inclusions", "a graph of groups");
  expect_object(inclusions, "inclusions");
  for (const auto& item : inclusions.items()) {
    const std::string& edge = item.key();
    if (!gog.graph.has_edge(edge)) {
      throw_invalid("inclusions names unknown edge '" + edge + "'");
    }
    const PermGroup& domain = gog.edge_group(edge);
    const GroupRef& ref = gog.vertex_group(gog.graph.edge(edge).target);
    std::string leaf;
    const ojson* images = nullptr;
    if (item.value().is_array()) {
      if (!ref.is_finite()) {
        throw_invalid("inclusion for edge '" + edge +
                      "' targets an amalgam vertex group and must name a leaf");
      }
      leaf = ref.finite_leaf_id();
      images = &item.value();
    } else {
      expect_object(item.value(), "an inclusion");
      reject_unknown(item.value(), {"leaf", "images"}, "an inclusion");
      leaf = string_field(item.value(), "leaf", "an inclusion");
      images = &require_field(item.value(), "images", "an inclusion");
    }
    const PermGroup& codomain = ref.leaf_group(leaf);
    Homomorphism hom = make_homomorphism(
        domain, permutations_from_array(*images, codomain.degree(), "inclusion images"),
        codomain);
    gog.inclusions.emplace(edge, EdgeInclusion{std::move(leaf), std::move(hom)});
  }

  validate_gog(gog);
  return gog;
}

ojson reduction_to_json(const ReductionResult& reduction) {
  ojson j;
  j["reduced"] = graph_to_json(reduction.reduced);
  ojson paths = ojson::object();
  for (const auto& [edge, chain] : reduction.edge_paths) {
    ojson rec;
    rec["vertices"] = chain.vertex_ids;
    rec["edges"] = chain.edge_ids;
    paths[edge] = std::move(rec);
  }
  j["edge_paths"] = std::move(paths);
  return j;
}

ReductionResult reduction_from_json(const ojson& j) {
  expect_object(j, "a reduction");
  reject_unknown(j, {"reduced", "edge_paths"}, "a reduction");
  ReductionResult result;
  result.reduced = graph_from_json(require_field(j, "reduced", "a reduction"));
  const ojson& paths = require_field(j, "edge_paths", "a reduction");
  expect_object(paths, "edge_paths");
  for (const auto& item : paths.items()) {
    expect_object(item.value(), "a chain path");
    reject_unknown(item.value(), {"vertices", "edges"}, "a chain path");
    ChainPath chain;
    chain.vertex_ids =
        require_field(item.value(), "vertices", "a chain path").get<std::vector<std::string>>();
    chain.edge_ids =
        require_field(item.value(), "edges", "a chain path").get<std::vector<std::string>>();
    result.edge_paths.emplace(item.key(), std::move(chain));
  }
  return result;
}

ojson load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_invalid("malformed JSON input: cannot read file " + path);
  try {
    return ojson::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw_invalid("malformed JSON in " + path + ": " + e.what());
  }
}

}  // namespace arbor
