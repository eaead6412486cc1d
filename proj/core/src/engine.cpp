#include "arbor/engine.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "arbor/ball.hpp"
#include "arbor/caps.hpp"
#include "arbor/error.hpp"
#include "arbor/serre_graph.hpp"

namespace arbor {
namespace {

using ojson = nlohmann::ordered_json;

constexpr const char* kNoCriterion = "No applicable criterion";
constexpr const char* kReasonLimit =
    "inductive limit of compact groups contradiction path unavailable at finite scale";
constexpr const char* kReasonSingleVertex =
    "the quotient is a single vertex and no criterion applies";
constexpr const char* kReasonThin = "the unfolded tree is not thick";
constexpr const char* kReasonLocallyTwoTransitive =
    "the action is edge transitive and locally 2-transitive; this regime admits type I "
    "groups and no criterion here applies";
constexpr const char* kReasonNoProperOpposite =
    "no vertex failing 2-transitivity has a proper opposite inclusion";

// ---------------------------------------------------------------------------
// Shared helpers

ojson ref_json(const GroupRef& ref) {
  ojson j;
  if (ref.is_finite()) {
    j["kind"] = "finite";
    j["leaf"] = ref.finite_leaf_id();
    j["order"] = ref.finite_group().order();
    return j;
  }
  j["kind"] = "amalgam";
  j["expression"] = ref.describe();
  bool compact = ref.is_compact();
  j["compact"] = compact;
  if (compact) j["collapsed_order"] = *ref.collapsed_order();
  return j;
}

struct Properness {
  bool proper = false;
  std::string basis;  // "order" | "leaf" | "collapsed-order" | "noncompact-rule"
};

// Properness of a subgroup of the given order, embedded at a named leaf of a
// group reference.  An image smaller than its leaf is always proper; an image
// filling its leaf is proper exactly when the expression does not collapse
// onto that scale (structural non-degeneracy rule for amalgams).
Properness properness_in_ref(std::size_t image_order, const std::string& leaf,
                             const GroupRef& ref) {
  if (ref.is_finite()) {
    return {image_order < ref.finite_group().order(), "order"};
  }
  std::size_t leaf_order = ref.leaf_group(leaf).order();
  if (image_order < leaf_order) return {true, "leaf"};
  if (ref.is_compact()) return {image_order < *ref.collapsed_order(), "collapsed-order"};
  return {true, "noncompact-rule"};
}

ojson inclusion_record(const GraphOfGroups& gog, const std::string& edge_id) {
  const SerreEdge& e = gog.graph.edge(edge_id);
  const EdgeInclusion& inc = gog.inclusion(edge_id);
  const GroupRef& ref = gog.vertex_group(e.target);
  Properness pr = properness_in_ref(inc.hom.image_order(), inc.target_leaf, ref);
  ojson j;
  j["edge"] = edge_id;
  j["vertex"] = e.target;
  j["edge_group_order"] = gog.edge_group(edge_id).order();
  j["image_order"] = inc.hom.image_order();
  j["vertex_group"] = ref_json(ref);
  j["proper"] = pr.proper;
  j["basis"] = pr.basis;
  return j;
}

bool inclusion_proper(const GraphOfGroups& gog, const std::string& edge_id) {
  const SerreEdge& e = gog.graph.edge(edge_id);
  const EdgeInclusion& inc = gog.inclusion(edge_id);
  return properness_in_ref(inc.hom.image_order(), inc.target_leaf, gog.vertex_group(e.target))
      .proper;
}

const PermGroup& finite_vertex(const GraphOfGroups& gog, const std::string& vertex_id,
                               const std::string& where) {
  const GroupRef& ref = gog.vertex_group(vertex_id);
  if (!ref.is_finite()) {
    throw_invalid(where + " requires finite vertex groups, found an amalgam at vertex " +
                  vertex_id);
  }
  return ref.finite_group();
}

// Inverse of a bijective homomorphism, rebuilt from preimages of the
// codomain's generators.
Homomorphism invert_iso(const Homomorphism& hom) {
  if (!hom.is_injective() || !hom.is_surjective()) {
    throw_invalid("cannot invert a non-bijective homomorphism");
  }
  const PermGroup& dom = hom.codomain();
  const PermGroup& cod = hom.domain();
  const std::vector<Permutation>& elements = hom.domain().elements();
  const std::vector<Permutation>& images = hom.images_by_element();
  std::vector<Permutation> generator_images;
  for (const Permutation& g : dom.generators()) {
    for (std::size_t i = 0; i < images.size(); ++i) {
      if (images[i] == g) {
        generator_images.push_back(elements[i]);
        break;
      }
    }
  }
  return make_homomorphism(dom, generator_images, cod, true);
}

std::string least_vertex_id(const SerreGraph& graph) {
  std::string least;
  for (const SerreVertex& v : graph.vertices()) {
    if (least.empty() || v.id < least) least = v.id;
  }
  return least;
}

// The unique directed edge pointing at a degree-1 vertex.
std::string edge_into_terminal(const SerreGraph& graph, const std::string& vertex_id) {
  for (const SerreEdge& e : graph.edges()) {
    if (e.target == vertex_id) return e.id;
  }
  throw_invalid("terminal vertex without an incoming edge: " + vertex_id);
}

CertStep reason_step(const std::string& reason, ojson extra = ojson::object()) {
  ojson w;
  for (auto& [key, value] : extra.items()) w[key] = value;
  w["reason"] = reason;
  return {kNoCriterion, "no criterion of the decision pipeline applies to this quotient data",
          std::move(w)};
}

CertStep type_preserving_step() {
  ojson w;
  w["assertion"] = "action type-preserving";
  return {"Type-preserving reduction",
          "non-amenability of the group von Neumann algebra passes to open subgroups of "
          "index at most two, so the analysis runs on type-preserving quotient data",
          std::move(w)};
}

CertStep narration_step(const std::string& result, const std::string& citation, int rank,
                        const std::string& route, ojson context,
                        ojson extra = ojson::object()) {
  ojson w;
  w["rank"] = rank;
  w["route"] = route;
  w["context"] = std::move(context);
  for (auto& [key, value] : extra.items()) w[key] = value;
  return {result, citation, std::move(w)};
}

const CertStep* find_step(const Certificate& cert, const std::string& result) {
  for (const CertStep& s : cert.steps) {
    if (s.result == result) return &s;
  }
  return nullptr;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lemma hypothesis checkers

namespace {

void validate_embedding(const std::string& role, const PermGroup& k, const EmbeddedGroup& eg) {
  if (!eg.group.has_leaf(eg.embedding.leaf)) {
    throw_invalid("embedding names a leaf absent from the " + role + ": " + eg.embedding.leaf);
  }
  if (!eg.embedding.hom.domain().same_group(k)) {
    throw_invalid("embedding domain of the " + role + " differs from the counted subgroup");
  }
  if (!eg.embedding.hom.codomain().same_group(eg.group.leaf_group(eg.embedding.leaf))) {
    throw_invalid("embedding codomain of the " + role + " is not the named leaf group");
  }
  if (!eg.embedding.hom.is_injective()) {
    throw_invalid("embedding into the " + role + " is not injective");
  }
}

}  // namespace

StepOutcome check_lemma_3_1(const PermGroup& k, const EmbeddedGroup& counting_side,
                            const EmbeddedGroup& proper_side) {
  validate_embedding("counting side", k, counting_side);
  validate_embedding("proper side", k, proper_side);

  ojson counting;
  counting["ambient"] = ref_json(counting_side.group);
  counting["embedding_leaf"] = counting_side.embedding.leaf;
  std::size_t finite_count = 0;
  if (counting_side.group.is_compact()) {
    // In a collapsing expression every leaf has the collapsed order, so the
    // double cosets can be counted inside the embedding leaf.
    const PermGroup& ambient = counting_side.group.leaf_group(counting_side.embedding.leaf);
    PermGroup image = counting_side.embedding.hom.image();
    DoubleCosets dc = double_cosets(ambient, image, image);
    finite_count = dc.count();
    counting["double_cosets"] = finite_count;
    if (finite_count < 3) {
      return {false, std::nullopt,
              "double-coset count " + std::to_string(finite_count) + " is below three"};
    }
  } else {
    counting["double_cosets"] = "infinite";
    counting["rule"] =
        "the ambient expression contains a nondegenerate amalgamation of compact groups, "
        "so it is non-compact and a compact subgroup has infinitely many double cosets";
  }

  Properness pr = properness_in_ref(proper_side.embedding.hom.image_order(),
                                    proper_side.embedding.leaf, proper_side.group);
  ojson proper;
  proper["ambient"] = ref_json(proper_side.group);
  proper["embedding_leaf"] = proper_side.embedding.leaf;
  proper["image_order"] = proper_side.embedding.hom.image_order();
  proper["proper"] = pr.proper;
  proper["basis"] = pr.basis;
  if (!pr.proper) {
    return {false, std::nullopt, "the subgroup fills the second factor"};
  }

  ojson w;
  w["subgroup_order"] = k.order();
  w["counting_side"] = std::move(counting);
  w["proper_side"] = std::move(proper);
  CertStep step{"Lemma 3.1",
                "an amalgamated free product over a subgroup with at least three double "
                "cosets in one factor and a proper inclusion into the other has a "
                "non-amenable group von Neumann algebra",
                std::move(w)};
  return {true, std::move(step), ""};
}

StepOutcome check_lemma_3_2(const GraphOfGroups& gog) {
  validate_gog(gog);
  if (!gog.graph.is_tree()) {
    throw_invalid("the graph underlying the tree of groups is not a tree");
  }

  if (gog.graph.vertices().size() == 3) {
    // Three-vertex segment: both inclusions into the terminal vertex groups
    // must be proper, and at most one inclusion into the middle vertex group
    // may be an equality.
    std::string middle;
    for (const SerreVertex& v : gog.graph.vertices()) {
      if (gog.graph.degree(v.id) == 2) middle = v.id;
    }
    ojson records = ojson::array();
    bool outer_ok = true;
    int middle_equalities = 0;
    for (const SerreEdge& e : gog.graph.edges()) {
      ojson rec = inclusion_record(gog, e.id);
      rec["position"] = (e.target == middle) ? "middle" : "outer";
      bool proper = rec["proper"].get<bool>();
      if (e.target == middle) {
        if (!proper) ++middle_equalities;
      } else if (!proper) {
        outer_ok = false;
      }
      records.push_back(std::move(rec));
    }
    if (!outer_ok) {
      return {false, std::nullopt,
              "an inclusion into a terminal vertex group of the segment is an equality"};
    }
    if (middle_equalities > 1) {
      return {false, std::nullopt,
              "both inclusions into the middle vertex group are equalities"};
    }
    ojson w;
    w["case"] = "segment";
    w["middle_vertex"] = middle;
    w["inclusions"] = std::move(records);
    CertStep step{"Lemma 3.2(1)",
                  "a segment of three groups over compact edge groups, with proper outer "
                  "inclusions and at most one equality into the middle vertex group, has a "
                  "non-amenable group von Neumann algebra",
                  std::move(w)};
    return {true, std::move(step), ""};
  }

  // General tree: three terminal edges with proper inclusions into their
  // terminal vertex groups.
  ojson records = ojson::array();
  std::vector<std::string> chosen;
  for (const SerreEdge& e : gog.graph.edges()) {
    if (gog.graph.degree(e.target) != 1) continue;
    ojson rec = inclusion_record(gog, e.id);
    if (rec["proper"].get<bool>() && chosen.size() < 3) chosen.push_back(e.id);
    records.push_back(std::move(rec));
  }
  if (chosen.size() < 3) {
    return {false, std::nullopt, "fewer than three terminal edges carry proper inclusions"};
  }
  ojson w;
  w["case"] = "ends";
  w["terminal_edges"] = std::move(records);
  w["chosen"] = chosen;
  CertStep step{"Lemma 3.2(2)",
                "a tree of groups with at least three terminal edges whose inclusions into "
                "their terminal vertex groups are proper has a non-amenable group von "
                "Neumann algebra",
                std::move(w)};
  return {true, std::move(step), ""};
}

// ---------------------------------------------------------------------------
// Rank >= 2

namespace {

struct ContractedRose {
  GraphOfGroups gog;
  std::string vertex;
};

ContractedRose contract_spanning_tree(const GraphOfGroups& gog, const SpanningTree& st) {
  ContractedRose rose;
  rose.gog = st.tree_edges.empty() ? gog : contract_subtree(gog, st.tree_edges);
  rose.vertex = rose.gog.graph.vertices().front().id;
  return rose;
}

// A finite tree of groups shaped like the lifted configuration of the rank
// >= 2 argument: a three-vertex path of copies of the rose vertex group
// joined along the second loop, with one copy of the proper loop attached at
// each path vertex as a terminal edge.
GraphOfGroups build_z_configuration(const GraphOfGroups& rose, const std::string& rose_vertex,
                                    const std::string& proper_edge,
                                    const std::string& second_edge) {
  const GroupRef& a = rose.vertex_group(rose_vertex);
  const EdgeInclusion& e_fwd = rose.inclusion(proper_edge);
  const EdgeInclusion& e_bwd = rose.inclusion(rose.graph.edge(proper_edge).reverse);
  const EdgeInclusion& f_fwd = rose.inclusion(second_edge);
  const EdgeInclusion& f_bwd = rose.inclusion(rose.graph.edge(second_edge).reverse);
  const PermGroup& eg = rose.edge_group(proper_edge);
  const PermGroup& fg = rose.edge_group(second_edge);

  std::vector<SerreVertex> vertices;
  for (const char* id : {"c0", "c1", "c2", "t0", "t1", "t2"}) {
    vertices.push_back({id, false});
  }
  std::vector<SerreEdge> edges = {
      {"p0", "c0", "c1", "p0r"}, {"p0r", "c1", "c0", "p0"},
      {"p1", "c1", "c2", "p1r"}, {"p1r", "c2", "c1", "p1"},
      {"q0", "c0", "t0", "q0r"}, {"q0r", "t0", "c0", "q0"},
      {"q1", "c1", "t1", "q1r"}, {"q1r", "t1", "c1", "q1"},
      {"q2", "c2", "t2", "q2r"}, {"q2r", "t2", "c2", "q2"},
  };
  GraphOfGroups z;
  z.graph = SerreGraph(std::move(vertices), std::move(edges));
  for (const char* id : {"c0", "c1", "c2", "t0", "t1", "t2"}) {
    z.vertex_groups.emplace(id, a);
  }
  z.edge_groups.emplace("p0", fg);
  z.edge_groups.emplace("p1", fg);
  for (const char* id : {"q0", "q1", "q2"}) z.edge_groups.emplace(id, eg);
  z.inclusions.emplace("p0", f_fwd);
  z.inclusions.emplace("p0r", f_bwd);
  z.inclusions.emplace("p1", f_fwd);
  z.inclusions.emplace("p1r", f_bwd);
  for (const char* id : {"q0", "q1", "q2"}) {
    z.inclusions.emplace(id, e_fwd);
    z.inclusions.emplace(std::string(id) + "r", e_bwd);
  }
  return z;
}

// True when the image of the directed edge fills its whole target group (the
// negation of properness under the structural rules).
bool fills_target(const GraphOfGroups& gog, const std::string& edge_id) {
  return !inclusion_proper(gog, edge_id);
}

Certificate analyze_rank_two(const GraphOfGroups& gog, Certificate cert,
                             const SpanningTree& st) {
  ContractedRose rose = contract_spanning_tree(gog, st);
  const GroupRef& a = rose.gog.vertex_group(rose.vertex);

  bool all_fill = a.is_compact();
  if (all_fill) {
    for (const SerreEdge& e : rose.gog.graph.edges()) {
      if (!fills_target(rose.gog, e.id)) {
        all_fill = false;
        break;
      }
    }
  }

  ojson context;
  context["spanning_tree"] = st.tree_edges;
  context["contracted_vertex"] = rose.vertex;

  const std::string citation =
      "quotient data of fundamental-group rank at least two: contracting a spanning tree "
      "leaves a one-vertex graph whose free part forces non-amenability";

  if (all_fill) {
    cert.steps.push_back(narration_step("Proposition 4.1", citation, st.rank,
                                        "rank-two-free-quotient", std::move(context)));
    ojson w;
    w["free_rank"] = st.rank;
    w["compact_kernel_order"] = *a.collapsed_order();
    cert.steps.push_back(
        {"Discrete free quotient",
         "every inclusion is an equality, so collapsing the compact kernel leaves a "
         "discrete free group of rank at least two, whose group von Neumann algebra is "
         "non-amenable",
         std::move(w)});
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  std::string proper_edge;
  for (const SerreEdge& e : rose.gog.graph.edges()) {
    if (inclusion_proper(rose.gog, e.id)) {
      proper_edge = e.id;
      break;
    }
  }
  std::string proper_key = rose.gog.geometric_key(proper_edge);
  std::string second_edge;
  for (const SerreEdge& e : rose.gog.graph.edges()) {
    if (rose.gog.geometric_key(e.id) != proper_key) {
      second_edge = e.id;
      break;
    }
  }
  context["proper_edge"] = proper_edge;
  context["second_edge"] = second_edge;
  cert.steps.push_back(narration_step("Proposition 4.1", citation, st.rank,
                                      "rank-two-lifted-ends", std::move(context)));

  GraphOfGroups z = build_z_configuration(rose.gog, rose.vertex, proper_edge, second_edge);
  StepOutcome outcome = check_lemma_3_2(z);
  if (!outcome.ok) {
    cert.steps.push_back(reason_step(outcome.refusal));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }
  cert.steps.push_back(*outcome.step);
  cert.verdict = Verdict::NonamenableLvN;
  return cert;
}

// ---------------------------------------------------------------------------
// Rank 1

struct PruneResult {
  GraphOfGroups gog;
  // (vertex, geometric edge key) pairs, in removal order.
  std::vector<std::pair<std::string, std::string>> removed;
};

GraphOfGroups remove_terminal(const GraphOfGroups& gog, const std::string& vertex_id,
                              const std::string& in_edge) {
  const std::string out_edge = gog.graph.edge(in_edge).reverse;
  const std::string key = gog.geometric_key(in_edge);
  std::vector<SerreVertex> vertices;
  for (const SerreVertex& v : gog.graph.vertices()) {
    if (v.id != vertex_id) vertices.push_back(v);
  }
  std::vector<SerreEdge> edges;
  for (const SerreEdge& e : gog.graph.edges()) {
    if (e.id != in_edge && e.id != out_edge) edges.push_back(e);
  }
  GraphOfGroups out;
  out.graph = SerreGraph(std::move(vertices), std::move(edges));
  out.vertex_groups = gog.vertex_groups;
  out.vertex_groups.erase(vertex_id);
  out.edge_groups = gog.edge_groups;
  out.edge_groups.erase(key);
  out.inclusions = gog.inclusions;
  out.inclusions.erase(in_edge);
  out.inclusions.erase(out_edge);
  return out;
}

// Removes terminal vertices whose incoming inclusion fills the vertex group
// (their lifts are terminal in the unfolded tree and carry no information),
// least vertex id first, until none remain.
PruneResult prune_trivial_terminals(const GraphOfGroups& gog) {
  PruneResult result;
  result.gog = gog;
  for (;;) {
    std::string pick;
    std::string pick_edge;
    for (const SerreVertex& v : result.gog.graph.vertices()) {
      if (result.gog.graph.degree(v.id) != 1) continue;
      std::string in_edge = edge_into_terminal(result.gog.graph, v.id);
      const EdgeInclusion& inc = result.gog.inclusion(in_edge);
      if (inc.hom.image_order() !=
          finite_vertex(result.gog, v.id, "terminal pruning").order()) {
        continue;
      }
      if (pick.empty() || v.id < pick) {
        pick = v.id;
        pick_edge = in_edge;
      }
    }
    if (pick.empty()) break;
    result.removed.emplace_back(pick, result.gog.geometric_key(pick_edge));
    result.gog = remove_terminal(result.gog, pick, pick_edge);
  }
  return result;
}

ojson pruned_json(const PruneResult& pruned) {
  ojson j = ojson::array();
  for (const auto& [vertex, key] : pruned.removed) {
    j.push_back(ojson::array({vertex, key}));
  }
  return j;
}

// Vertices on the unique circuit (the 2-core of the graph).
std::set<std::string> circuit_vertices_of(const SerreGraph& graph) {
  std::set<std::string> alive;
  for (const SerreVertex& v : graph.vertices()) alive.insert(v.id);
  for (;;) {
    std::string drop;
    for (const std::string& v : alive) {
      int deg = 0;
      for (const SerreEdge& e : graph.edges()) {
        if (e.origin == v && alive.count(e.target)) ++deg;
      }
      if (deg == 1) {
        drop = v;
        break;
      }
    }
    if (drop.empty()) break;
    alive.erase(drop);
  }
  return alive;
}

int distance_to_set(const SerreGraph& graph, const std::string& from,
                    const std::set<std::string>& targets) {
  std::map<std::string, int> dist;
  std::vector<std::string> frontier = {from};
  dist[from] = 0;
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const std::string& v : frontier) {
      if (targets.count(v)) return dist[v];
      for (const std::string& e : graph.edges_at(v)) {
        const std::string& w = graph.edge(e).target;
        if (!dist.count(w)) {
          dist[w] = dist[v] + 1;
          next.push_back(w);
        }
      }
    }
    frontier = std::move(next);
  }
  throw_invalid("no path from " + from + " to the circuit");
}

// Orientation of a pure circuit: starts at the least vertex, follows the
// least outgoing edge, and never backtracks.  edges[i] runs from vertices[i]
// to vertices[(i+1) % p].
struct CircuitData {
  std::vector<std::string> vertices;
  std::vector<std::string> edges;
  std::vector<bool> origin_proper;
  std::vector<bool> target_proper;
};

CircuitData circuit_data(const GraphOfGroups& gog) {
  CircuitData c;
  const std::size_t p = gog.graph.geometric_edge_count();
  std::string current = least_vertex_id(gog.graph);
  std::string previous_edge;
  while (c.edges.size() < p) {
    std::string next;
    for (const std::string& cand : gog.graph.edges_at(current)) {
      if (previous_edge.empty() || cand != gog.graph.edge(previous_edge).reverse) {
        next = cand;
        break;
      }
    }
    if (next.empty()) throw_invalid("circuit walk stuck at vertex " + current);
    c.vertices.push_back(current);
    c.edges.push_back(next);
    previous_edge = next;
    current = gog.graph.edge(next).target;
  }
  for (std::size_t i = 0; i < p; ++i) {
    const SerreEdge& e = gog.graph.edge(c.edges[i]);
    const EdgeInclusion& fwd = gog.inclusion(e.id);
    const EdgeInclusion& bwd = gog.inclusion(e.reverse);
    c.target_proper.push_back(fwd.hom.image_order() <
                              finite_vertex(gog, e.target, "circuit analysis").order());
    c.origin_proper.push_back(bwd.hom.image_order() <
                              finite_vertex(gog, e.origin, "circuit analysis").order());
  }
  return c;
}

// Positions of the rank-1 circuit argument, in unrolled (periodic) indexing:
// m with a proper inclusion into the lower endpoint, then the next two
// positions n < o with proper inclusions into the upper endpoint.  The
// grouping records which side the generated middle group strictly exceeds.
struct CircuitPlan {
  bool found = false;
  int m = -1;
  int n = -1;
  int o = -1;
  std::string grouping;  // "A" | "B" | "flat"
};

CircuitPlan plan_circuit(const CircuitData& c) {
  CircuitPlan plan;
  const int p = static_cast<int>(c.vertices.size());
  bool any_origin = false;
  bool any_target = false;
  for (int i = 0; i < p; ++i) {
    any_origin = any_origin || c.origin_proper[static_cast<std::size_t>(i)];
    any_target = any_target || c.target_proper[static_cast<std::size_t>(i)];
  }
  if (!any_origin || !any_target) return plan;

  auto origin_at = [&](int j) { return c.origin_proper[static_cast<std::size_t>(j % p)]; };
  auto target_at = [&](int j) { return c.target_proper[static_cast<std::size_t>(j % p)]; };

  for (int i = 0; i < p; ++i) {
    if (origin_at(i)) {
      plan.m = i;
      break;
    }
  }
  for (int j = plan.m + 1; j <= plan.m + p; ++j) {
    if (target_at(j)) {
      plan.n = j;
      break;
    }
  }
  for (int j = plan.n + 1; j <= plan.n + p; ++j) {
    if (target_at(j)) {
      plan.o = j;
      break;
    }
  }
  bool exceeds_lower = false;
  for (int j = plan.m; j <= plan.n - 1; ++j) exceeds_lower = exceeds_lower || target_at(j);
  bool exceeds_upper = false;
  for (int j = plan.m + 1; j <= plan.n; ++j) exceeds_upper = exceeds_upper || origin_at(j);
  plan.grouping = exceeds_lower ? "A" : (exceeds_upper ? "B" : "flat");
  plan.found = true;
  return plan;
}

std::string circuit_leaf(const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  return c.vertices[static_cast<std::size_t>(j % p)] + "@" + std::to_string(j);
}

const PermGroup& circuit_group(const GraphOfGroups& gog, const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  return gog.vertex_group(c.vertices[static_cast<std::size_t>(j % p)]).finite_group();
}

const PermGroup& circuit_edge_group(const GraphOfGroups& gog, const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  return gog.edge_group(c.edges[static_cast<std::size_t>(j % p)]);
}

// Inclusion of the edge at position j into the upper endpoint (position j+1).
const Homomorphism& tau(const GraphOfGroups& gog, const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  return gog.inclusion(c.edges[static_cast<std::size_t>(j % p)]).hom;
}

// Inclusion of the edge at position j into the lower endpoint (position j).
const Homomorphism& omega(const GraphOfGroups& gog, const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  const SerreEdge& e = gog.graph.edge(c.edges[static_cast<std::size_t>(j % p)]);
  return gog.inclusion(e.reverse).hom;
}

std::string circuit_label(const GraphOfGroups& gog, const CircuitData& c, int j) {
  const int p = static_cast<int>(c.vertices.size());
  return gog.geometric_key(c.edges[static_cast<std::size_t>(j % p)]) + "@" + std::to_string(j);
}

// Amalgam of the circuit vertex groups at unrolled positions [first, last]
// over the edges between them; leaves are tagged by unrolled position so a
// chain longer than the circuit stays well-formed.
GroupRef circuit_chain(const GraphOfGroups& gog, const CircuitData& c, int first, int last) {
  GroupRef acc = GroupRef::finite(circuit_leaf(c, first), circuit_group(gog, c, first));
  for (int j = first; j < last; ++j) {
    acc = GroupRef::amalgam(acc,
                            GroupRef::finite(circuit_leaf(c, j + 1), circuit_group(gog, c, j + 1)),
                            circuit_edge_group(gog, c, j), circuit_leaf(c, j), omega(gog, c, j),
                            circuit_leaf(c, j + 1), tau(gog, c, j), circuit_label(gog, c, j));
  }
  return acc;
}

struct Lemma31Input {
  PermGroup k;
  EmbeddedGroup counting;
  EmbeddedGroup proper;
};

Lemma31Input build_circuit_lemma_3_1(const GraphOfGroups& gog, const CircuitData& c,
                                     const CircuitPlan& plan) {
  GroupRef chain = circuit_chain(gog, c, plan.m + 1, plan.n);
  if (plan.grouping == "A") {
    GroupRef ambient = GroupRef::amalgam(
        GroupRef::finite(circuit_leaf(c, plan.m), circuit_group(gog, c, plan.m)), chain,
        circuit_edge_group(gog, c, plan.m), circuit_leaf(c, plan.m), omega(gog, c, plan.m),
        circuit_leaf(c, plan.m + 1), tau(gog, c, plan.m), circuit_label(gog, c, plan.m));
    return {circuit_edge_group(gog, c, plan.n),
            {ambient, {circuit_leaf(c, plan.n), omega(gog, c, plan.n)}},
            {GroupRef::finite(circuit_leaf(c, plan.n + 1), circuit_group(gog, c, plan.n + 1)),
             {circuit_leaf(c, plan.n + 1), tau(gog, c, plan.n)}}};
  }
  GroupRef ambient = GroupRef::amalgam(
      chain, GroupRef::finite(circuit_leaf(c, plan.n + 1), circuit_group(gog, c, plan.n + 1)),
      circuit_edge_group(gog, c, plan.n), circuit_leaf(c, plan.n), omega(gog, c, plan.n),
      circuit_leaf(c, plan.n + 1), tau(gog, c, plan.n), circuit_label(gog, c, plan.n));
  return {circuit_edge_group(gog, c, plan.m),
          {ambient, {circuit_leaf(c, plan.m + 1), tau(gog, c, plan.m)}},
          {GroupRef::finite(circuit_leaf(c, plan.m), circuit_group(gog, c, plan.m)),
           {circuit_leaf(c, plan.m), omega(gog, c, plan.m)}}};
}

// The flat case: the groups between positions m and n are all isomorphic
// images of the shared edge group, and between n and o the upper inclusions
// are isomorphisms, so the edge groups embed into the three surviving vertex
// groups along invertible steps.
GraphOfGroups build_flat_segment(const GraphOfGroups& gog, const CircuitData& c,
                                 const CircuitPlan& plan) {
  Homomorphism psi_h = tau(gog, c, plan.m);
  for (int j = plan.m + 1; j <= plan.n; ++j) {
    psi_h = compose(tau(gog, c, j), compose(invert_iso(omega(gog, c, j)), psi_h));
  }
  Homomorphism psi_o = omega(gog, c, plan.o);
  for (int j = plan.o - 1; j >= plan.n + 1; --j) {
    psi_o = compose(omega(gog, c, j), compose(invert_iso(tau(gog, c, j)), psi_o));
  }

  const std::string s0 = circuit_leaf(c, plan.m);
  const std::string s1 = circuit_leaf(c, plan.n + 1);
  const std::string s2 = circuit_leaf(c, plan.o + 1);
  std::vector<SerreVertex> vertices = {{s0, false}, {s1, false}, {s2, false}};
  std::vector<SerreEdge> edges = {
      {"h", s0, s1, "hr"}, {"hr", s1, s0, "h"}, {"k", s1, s2, "kr"}, {"kr", s2, s1, "k"}};
  GraphOfGroups segment;
  segment.graph = SerreGraph(std::move(vertices), std::move(edges));
  segment.vertex_groups.emplace(s0, GroupRef::finite(s0, circuit_group(gog, c, plan.m)));
  segment.vertex_groups.emplace(s1, GroupRef::finite(s1, circuit_group(gog, c, plan.n + 1)));
  segment.vertex_groups.emplace(s2, GroupRef::finite(s2, circuit_group(gog, c, plan.o + 1)));
  segment.edge_groups.emplace("h", circuit_edge_group(gog, c, plan.m));
  segment.edge_groups.emplace("k", circuit_edge_group(gog, c, plan.o));
  segment.inclusions.emplace("h", EdgeInclusion{s1, psi_h});
  segment.inclusions.emplace("hr", EdgeInclusion{s0, omega(gog, c, plan.m)});
  segment.inclusions.emplace("k", EdgeInclusion{s2, tau(gog, c, plan.o)});
  segment.inclusions.emplace("kr", EdgeInclusion{s1, psi_o});
  return segment;
}

Certificate analyze_rank_one(const GraphOfGroups& gog, Certificate cert,
                             const Assertions& assertions) {
  for (const SerreVertex& v : gog.graph.vertices()) {
    finite_vertex(gog, v.id, "rank-one analysis");
  }
  if (!assertions.nonamenable_group) {
    throw_missing_assertion(
        "rank-one analysis requires the caller-supplied non-amenability assertion");
  }
  cert.assumptions.push_back("group non-amenable");

  const std::string citation =
      "quotient data of fundamental-group rank one over a non-amenable group: proper "
      "inclusions along the circuit or at a surviving terminal vertex drive the amalgam "
      "criteria";

  PruneResult pruned = prune_trivial_terminals(gog);
  ojson context;
  context["pruned"] = pruned_json(pruned);

  // Surviving terminal vertex: its inclusion is proper, and enough lifts of
  // it appear in a finite truncation of the unfolded line to apply the
  // three-ends criterion.
  std::string base;
  for (const SerreVertex& v : pruned.gog.graph.vertices()) {
    if (pruned.gog.graph.degree(v.id) == 1 && (base.empty() || v.id < base)) base = v.id;
  }
  if (!base.empty()) {
    std::set<std::string> circuit = circuit_vertices_of(pruned.gog.graph);
    int d = distance_to_set(pruned.gog.graph, base, circuit);
    int circuit_length = 0;
    for (const auto& [lo, hi] : pruned.gog.graph.geometric_edges()) {
      const SerreEdge& e = pruned.gog.graph.edge(lo);
      if (circuit.count(e.origin) && circuit.count(e.target)) ++circuit_length;
    }
    int radius = 2 * d + circuit_length;
    context["base"] = base;
    context["distance_to_circuit"] = d;
    context["circuit_length"] = circuit_length;
    context["radius"] = radius;
    cert.steps.push_back(narration_step("Proposition 4.2", citation, 1,
                                        "rank-one-terminal-cover", std::move(context)));
    CoveringTruncation cover = covering_tree_truncation(pruned.gog, base, radius);
    StepOutcome outcome = check_lemma_3_2(cover.tree);
    if (!outcome.ok) {
      cert.steps.push_back(reason_step(outcome.refusal));
      cert.verdict = Verdict::Inconclusive;
      return cert;
    }
    cert.steps.push_back(*outcome.step);
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  // Pure circuit.
  CircuitData c = circuit_data(pruned.gog);
  CircuitPlan plan = plan_circuit(c);
  context["circuit_vertices"] = c.vertices;
  context["circuit_edges"] = c.edges;

  if (!plan.found) {
    cert.steps.push_back(narration_step("Proposition 4.2", citation, 1,
                                        "rank-one-circuit-limit", std::move(context)));
    cert.steps.push_back(reason_step(kReasonLimit));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }

  context["m"] = plan.m;
  context["n"] = plan.n;
  context["o"] = plan.o;
  context["grouping"] = plan.grouping;

  if (plan.grouping == "flat") {
    cert.steps.push_back(narration_step("Proposition 4.2", citation, 1,
                                        "rank-one-circuit-flat", std::move(context)));
    GraphOfGroups segment = build_flat_segment(pruned.gog, c, plan);
    StepOutcome outcome = check_lemma_3_2(segment);
    if (!outcome.ok) {
      cert.steps.push_back(reason_step(outcome.refusal));
      cert.verdict = Verdict::Inconclusive;
      return cert;
    }
    cert.steps.push_back(*outcome.step);
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  cert.steps.push_back(
      narration_step("Proposition 4.2", citation, 1, "rank-one-circuit", std::move(context)));
  Lemma31Input input = build_circuit_lemma_3_1(pruned.gog, c, plan);
  StepOutcome outcome = check_lemma_3_1(input.k, input.counting, input.proper);
  if (!outcome.ok) {
    cert.steps.push_back(reason_step(outcome.refusal));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }
  cert.steps.push_back(*outcome.step);
  cert.verdict = Verdict::NonamenableLvN;
  return cert;
}

// ---------------------------------------------------------------------------
// Rank 0

// Path vertices of a segment-shaped tree, starting at the least terminal.
std::vector<std::string> path_order(const SerreGraph& graph) {
  std::string start;
  for (const SerreVertex& v : graph.vertices()) {
    if (graph.degree(v.id) == 1 && (start.empty() || v.id < start)) start = v.id;
  }
  std::vector<std::string> order = {start};
  std::string previous;
  while (order.size() < graph.vertices().size()) {
    std::string next;
    for (const std::string& e : graph.edges_at(order.back())) {
      const std::string& t = graph.edge(e).target;
      if (t != previous) {
        next = t;
        break;
      }
    }
    previous = order.back();
    order.push_back(next);
  }
  return order;
}

// Directed edge from one vertex to an adjacent one in a tree.
std::string directed_edge_between(const SerreGraph& graph, const std::string& from,
                                  const std::string& to) {
  for (const std::string& e : graph.edges_at(from)) {
    if (graph.edge(e).target == to) return e;
  }
  throw_invalid("no edge from " + from + " to " + to);
}

// Left-coset action of a group on the cosets of a subgroup, with the induced
// permutation group, the double-coset count and the 2-transitivity verdict.
struct CosetAction {
  std::size_t index = 0;
  std::size_t double_cosets = 0;
  bool two_transitive = false;
};

CosetAction coset_action(const PermGroup& group, const PermGroup& image) {
  const std::vector<Permutation>& elements = group.elements();
  std::vector<int> coset_of(elements.size(), -1);
  std::vector<Permutation> representatives;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (coset_of[i] >= 0) continue;
    int idx = static_cast<int>(representatives.size());
    representatives.push_back(elements[i]);
    for (const Permutation& h : image.elements()) {
      std::ptrdiff_t at = group.index_of(elements[i].compose(h));
      coset_of[static_cast<std::size_t>(at)] = idx;
    }
  }
  int points = static_cast<int>(representatives.size());
  std::vector<Permutation> generator_actions;
  for (const Permutation& g : group.generators()) {
    std::vector<int> images(static_cast<std::size_t>(points));
    for (int cidx = 0; cidx < points; ++cidx) {
      Permutation moved = g.compose(representatives[static_cast<std::size_t>(cidx)]);
      std::ptrdiff_t at = group.index_of(moved);
      images[static_cast<std::size_t>(cidx)] = coset_of[static_cast<std::size_t>(at)];
    }
    generator_actions.push_back(Permutation(std::move(images)));
  }
  PermGroup action(points, std::move(generator_actions));
  CosetAction result;
  result.index = static_cast<std::size_t>(points);
  result.double_cosets = double_cosets(group, image, image).count();
  result.two_transitive = is_two_transitive(action);
  return result;
}

struct EdgeVertexReport {
  std::string vertex;
  std::string edge_into;
  CosetAction action;
};

std::vector<EdgeVertexReport> edge_local_actions(const GraphOfGroups& gog) {
  std::vector<EdgeVertexReport> reports;
  std::vector<std::string> ids;
  for (const SerreVertex& v : gog.graph.vertices()) ids.push_back(v.id);
  std::sort(ids.begin(), ids.end());
  for (const std::string& v : ids) {
    std::string in_edge = edge_into_terminal(gog.graph, v);
    const PermGroup& group = finite_vertex(gog, v, "edge-transitive analysis");
    PermGroup image = gog.inclusion(in_edge).hom.image();
    reports.push_back({v, in_edge, coset_action(group, image)});
  }
  return reports;
}

ojson edge_reports_json(const std::vector<EdgeVertexReport>& reports) {
  ojson j = ojson::array();
  for (const EdgeVertexReport& r : reports) {
    ojson rec;
    rec["vertex"] = r.vertex;
    rec["edge_into"] = r.edge_into;
    rec["index"] = r.action.index;
    rec["double_cosets"] = r.action.double_cosets;
    rec["two_transitive"] = r.action.two_transitive;
    j.push_back(std::move(rec));
  }
  return j;
}

Certificate analyze_edge(const GraphOfGroups& gog, Certificate cert) {
  std::vector<EdgeVertexReport> reports = edge_local_actions(gog);
  ojson extra;
  extra["local_actions"] = edge_reports_json(reports);
  cert.steps.push_back(narration_step(
      "Proposition 4.4",
      "edge-transitive quotient data: the vertex groups act on the lifted edge sets at "
      "their lifts, and a failure of 2-transitivity opposite a proper inclusion forces "
      "non-amenability",
      0, "edge-transitive", ojson::object(), std::move(extra)));

  for (const EdgeVertexReport& r : reports) {
    if (r.action.two_transitive) continue;
    const EdgeVertexReport& opposite = (reports[0].vertex == r.vertex) ? reports[1] : reports[0];
    if (opposite.action.index < 2) continue;
    const PermGroup& k = gog.edge_group(r.edge_into);
    EmbeddedGroup counting{
        GroupRef::finite(r.vertex, finite_vertex(gog, r.vertex, "edge-transitive analysis")),
        {r.vertex, gog.inclusion(r.edge_into).hom}};
    EmbeddedGroup proper{GroupRef::finite(opposite.vertex, finite_vertex(gog, opposite.vertex,
                                                                         "edge-transitive "
                                                                         "analysis")),
                         {opposite.vertex, gog.inclusion(opposite.edge_into).hom}};
    StepOutcome outcome = check_lemma_3_1(k, counting, proper);
    if (!outcome.ok) {
      cert.steps.push_back(reason_step(outcome.refusal));
      cert.verdict = Verdict::Inconclusive;
      return cert;
    }
    cert.steps.push_back(*outcome.step);
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  bool all_two_transitive = true;
  for (const EdgeVertexReport& r : reports) {
    all_two_transitive = all_two_transitive && r.action.two_transitive;
  }
  cert.steps.push_back(
      reason_step(all_two_transitive ? kReasonLocallyTwoTransitive : kReasonNoProperOpposite));
  cert.verdict = Verdict::Inconclusive;
  return cert;
}

struct Case2Input {
  int k = 0;
  PermGroup edge_group;
  EmbeddedGroup counting;
  EmbeddedGroup proper;
};

// The equality-chain case of the segment analysis: the first k upper
// inclusions from the lesser end are equalities, so the edge group at
// position k embeds into the first vertex group along invertible steps.
Case2Input build_equality_chain(const GraphOfGroups& gog, const std::vector<std::string>& path,
                                int k) {
  auto fwd = [&](int i) -> const Homomorphism& {
    return gog
        .inclusion(directed_edge_between(gog.graph, path[static_cast<std::size_t>(i)],
                                         path[static_cast<std::size_t>(i + 1)]))
        .hom;
  };
  auto bwd = [&](int i) -> const Homomorphism& {
    return gog
        .inclusion(directed_edge_between(gog.graph, path[static_cast<std::size_t>(i + 1)],
                                         path[static_cast<std::size_t>(i)]))
        .hom;
  };
  Homomorphism kappa = bwd(k);
  for (int i = k; i >= 1; --i) {
    kappa = compose(bwd(i - 1), compose(invert_iso(fwd(i - 1)), kappa));
  }
  const std::string& v0 = path.front();
  const std::string& vk1 = path[static_cast<std::size_t>(k + 1)];
  std::string edge_key = gog.geometric_key(
      directed_edge_between(gog.graph, path[static_cast<std::size_t>(k)], vk1));
  Case2Input input{k, gog.edge_group(edge_key),
                   {GroupRef::finite(v0, finite_vertex(gog, v0, "segment analysis")),
                    {v0, kappa}},
                   {GroupRef::finite(vk1, finite_vertex(gog, vk1, "segment analysis")),
                    {vk1, fwd(k)}}};
  return input;
}

Certificate analyze_rank_zero(const GraphOfGroups& gog, Certificate cert,
                              const Assertions& assertions) {
  // A single vertex carries no splitting at all.
  if (gog.graph.vertices().size() == 1 && gog.graph.edges().empty()) {
    ojson extra;
    extra["rank"] = 0;
    extra["route"] = "single-vertex";
    extra["context"] = ojson::object();
    cert.steps.push_back(reason_step(kReasonSingleVertex, std::move(extra)));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }

  for (const SerreVertex& v : gog.graph.vertices()) {
    finite_vertex(gog, v.id, "rank-zero analysis");
  }

  // A single geometric edge: the edge-transitive criterion needs no
  // non-amenability assumption.
  if (gog.graph.vertices().size() == 2 && gog.graph.geometric_edge_count() == 1) {
    return analyze_edge(gog, std::move(cert));
  }

  if (!assertions.nonamenable_group) {
    throw_missing_assertion(
        "rank-zero analysis requires the caller-supplied non-amenability assertion");
  }
  cert.assumptions.push_back("group non-amenable");

  const std::string citation =
      "tree quotient data of a thick action by a non-amenable group: terminal edges and "
      "segment chains drive the amalgam criteria";

  if (!is_thick(gog)) {
    cert.steps.push_back(narration_step("Proposition 4.3", citation, 0, "rank-zero-thin",
                                        ojson::object()));
    cert.steps.push_back(reason_step(kReasonThin));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }

  int terminal_count = 0;
  for (const SerreVertex& v : gog.graph.vertices()) {
    if (gog.graph.degree(v.id) == 1) ++terminal_count;
  }

  if (terminal_count >= 3) {
    cert.steps.push_back(narration_step("Proposition 4.3", citation, 0, "rank-zero-ends",
                                        ojson::object()));
    StepOutcome outcome = check_lemma_3_2(gog);
    if (!outcome.ok) {
      cert.steps.push_back(reason_step(outcome.refusal));
      cert.verdict = Verdict::Inconclusive;
      return cert;
    }
    cert.steps.push_back(*outcome.step);
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  // Segment [0..n] with n >= 2.
  std::vector<std::string> path = path_order(gog.graph);
  const int n = static_cast<int>(path.size()) - 1;
  ojson context;
  context["segment"] = path;

  auto upper_inclusion_proper = [&](int i) {
    // Edge between positions i and i+1, into the vertex at position i+1.
    std::string e = directed_edge_between(gog.graph, path[static_cast<std::size_t>(i)],
                                          path[static_cast<std::size_t>(i + 1)]);
    return gog.inclusion(e).hom.image_order() <
           finite_vertex(gog, path[static_cast<std::size_t>(i + 1)], "segment analysis").order();
  };
  auto lower_inclusion_proper = [&](int i) {
    std::string e = directed_edge_between(gog.graph, path[static_cast<std::size_t>(i + 1)],
                                          path[static_cast<std::size_t>(i)]);
    return gog.inclusion(e).hom.image_order() <
           finite_vertex(gog, path[static_cast<std::size_t>(i)], "segment analysis").order();
  };

  bool inner_first = upper_inclusion_proper(0);
  bool inner_last = lower_inclusion_proper(n - 1);
  if (inner_first || inner_last) {
    std::vector<std::string> inner_edges;
    for (int i = 1; i + 1 <= n - 1; ++i) {
      inner_edges.push_back(gog.geometric_key(directed_edge_between(
          gog.graph, path[static_cast<std::size_t>(i)], path[static_cast<std::size_t>(i + 1)])));
    }
    context["inner_edges"] = inner_edges;
    cert.steps.push_back(narration_step("Proposition 4.3", citation, 0,
                                        "rank-zero-segment-contraction", std::move(context)));
    GraphOfGroups contracted =
        inner_edges.empty() ? gog : contract_subtree(gog, inner_edges);
    StepOutcome outcome = check_lemma_3_2(contracted);
    if (!outcome.ok) {
      cert.steps.push_back(reason_step(outcome.refusal));
      cert.verdict = Verdict::Inconclusive;
      return cert;
    }
    cert.steps.push_back(*outcome.step);
    cert.verdict = Verdict::NonamenableLvN;
    return cert;
  }

  // Both inner terminal inclusions are equalities: follow the maximal
  // equality chain from the lesser end.
  int k = 0;
  while (k + 1 <= n - 1 && !upper_inclusion_proper(k)) ++k;
  context["k"] = k;
  cert.steps.push_back(narration_step("Proposition 4.3", citation, 0,
                                      "rank-zero-equality-chain", std::move(context)));
  Case2Input input = build_equality_chain(gog, path, k);
  StepOutcome outcome = check_lemma_3_1(input.edge_group, input.counting, input.proper);
  if (!outcome.ok) {
    cert.steps.push_back(reason_step(outcome.refusal));
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }
  cert.steps.push_back(*outcome.step);
  cert.verdict = Verdict::NonamenableLvN;
  return cert;
}

}  // namespace

// ---------------------------------------------------------------------------
// Decision pipeline

Certificate analyze(const GraphOfGroups& gog, const Assertions& assertions) {
  validate_gog(gog);
  if (!gog.graph.is_connected()) throw_invalid("the quotient graph is not connected");
  if (!assertions.type_preserving) {
    throw_missing_assertion(
        "analysis requires the type-preserving assertion about the quotient data");
  }

  Certificate cert;
  cert.assumptions.push_back("action type-preserving");
  cert.steps.push_back(type_preserving_step());

  SpanningTree st = spanning_tree_and_rank(gog);
  if (st.rank >= 2) return analyze_rank_two(gog, std::move(cert), st);
  if (st.rank == 1) return analyze_rank_one(gog, std::move(cert), assertions);
  return analyze_rank_zero(gog, std::move(cert), assertions);
}

// ---------------------------------------------------------------------------
// Local-action classification

namespace {

ojson stabilizer_orbits_json(const PermGroup& f, int point) {
  PermGroup stab = point_stabilizer(f, point);
  ojson j = ojson::array();
  for (const std::vector<int>& orbit : orbits(stab)) {
    if (orbit.size() == 1 && orbit[0] == point) continue;
    j.push_back(orbit);
  }
  return j;
}

// Least point whose stabiliser fails to act transitively on the rest, or -1.
int failing_point(const PermGroup& f) {
  for (int x = 0; x < f.degree(); ++x) {
    PermGroup stab = point_stabilizer(f, x);
    std::size_t orbit_count = 0;
    for (const std::vector<int>& orbit : orbits(stab)) {
      if (orbit.size() == 1 && orbit[0] == x) continue;
      ++orbit_count;
    }
    if (orbit_count > 1) return x;
  }
  return -1;
}

struct SphereEvidence {
  bool found = false;
  int radius = 0;
  std::size_t sphere_size = 0;
  std::vector<std::vector<int>> orbits;
  std::size_t group_order = 0;
};

SphereEvidence sphere_intransitivity(const PermGroup& f, int degree, int max_radius) {
  SphereEvidence evidence;
  ColouredBall ball = build_ball(degree, max_radius);
  std::vector<BallAutomorphism> group = ball_group(ball, f);
  for (int r = 1; r <= max_radius; ++r) {
    std::vector<std::vector<int>> sphere = sphere_orbits(ball, group, r);
    if (sphere.size() >= 2) {
      auto [first, last] = ball.sphere_range(r);
      evidence.found = true;
      evidence.radius = r;
      evidence.sphere_size = static_cast<std::size_t>(last - first);
      evidence.orbits = std::move(sphere);
      evidence.group_order = group.size();
      return evidence;
    }
  }
  return evidence;
}

}  // namespace

Certificate classify_bm(const PermGroup& f, int degree) {
  if (degree < 3) throw_invalid("local-action classification requires degree at least 3");
  if (f.degree() != degree) {
    throw_invalid("local action degree mismatch: group acts on " +
                  std::to_string(f.degree()) + " points, expected " + std::to_string(degree));
  }

  bool two_transitive = is_two_transitive(f);
  Certificate cert;

  ojson w;
  w["degree"] = degree;
  w["group_order"] = f.order();
  w["two_transitive"] = two_transitive;
  if (two_transitive) {
    w["stabilizer_point"] = 0;
    w["stabilizer_order"] = point_stabilizer(f, 0).order();
    w["stabilizer_orbits"] = stabilizer_orbits_json(f, 0);
  } else {
    int x = failing_point(f);
    w["failing_point"] = x;
    w["stabilizer_order"] = point_stabilizer(f, x).order();
    w["stabilizer_orbits"] = stabilizer_orbits_json(f, x);
  }
  cert.steps.push_back({"Definition 2.2",
                        "a permutation action is 2-transitive when every point stabiliser "
                        "acts transitively on the remaining points",
                        std::move(w)});

  if (!two_transitive && degree <= 4) {
    try {
      SphereEvidence evidence = sphere_intransitivity(f, degree, 3);
      if (evidence.found) {
        ojson sw;
        sw["radius"] = evidence.radius;
        sw["sphere_size"] = evidence.sphere_size;
        sw["orbit_count"] = evidence.orbits.size();
        sw["orbits"] = evidence.orbits;
        sw["ball_group_order"] = evidence.group_order;
        cert.steps.push_back({"Lemma 6.8",
                              "for the universal group of a local action, 2-transitivity is "
                              "equivalent to transitivity on every sphere about a vertex; an "
                              "intransitive sphere at finite radius corroborates the failure",
                              std::move(sw)});
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::cap_exceeded) throw;
    }
  }

  if (two_transitive) {
    ojson vw;
    vw["conclusion"] = "TypeI";
    cert.steps.push_back({"Theorem B",
                          "the universal group of a 2-transitive local action is a type I "
                          "group, via its boundary-transitive representation theory",
                          std::move(vw)});
    cert.verdict = Verdict::TypeI;
  } else {
    ojson vw;
    vw["conclusion"] = "NonamenableLvN";
    cert.steps.push_back({"Theorem A'",
                          "the group von Neumann algebra of the universal group is "
                          "non-amenable when the local action fails 2-transitivity",
                          std::move(vw)});
    cert.verdict = Verdict::NonamenableLvN;
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Verdict support and replay

bool verdict_supported(const Certificate& cert) {
  switch (cert.verdict) {
    case Verdict::Inconclusive:
      return find_step(cert, kNoCriterion) != nullptr;
    case Verdict::TypeI: {
      const CertStep* def = find_step(cert, "Definition 2.2");
      return find_step(cert, "Theorem B") != nullptr && def != nullptr &&
             def->witness.value("two_transitive", false);
    }
    case Verdict::NonamenableLvN: {
      for (const char* id : {"Lemma 3.1", "Lemma 3.2(1)", "Lemma 3.2(2)",
                             "Discrete free quotient"}) {
        if (find_step(cert, id) != nullptr) return true;
      }
      const CertStep* def = find_step(cert, "Definition 2.2");
      return find_step(cert, "Theorem A'") != nullptr && def != nullptr &&
             def->witness.contains("two_transitive") &&
             def->witness["two_transitive"].get<bool>() == false;
    }
  }
  return false;
}

namespace {

struct FailureLog {
  ReplayReport* report;
  void operator()(const std::string& message) const {
    report->ok = false;
    report->failures.push_back(message);
  }
};

bool same_witness(const ojson& a, const ojson& b) { return a == b; }

// Re-runs a lemma check and compares it to the recorded step.
void compare_step(const StepOutcome& fresh, const Certificate& cert,
                  const std::string& result, const FailureLog& fail) {
  if (!fresh.ok) {
    fail("recomputation refuses the recorded " + result + " step: " + fresh.refusal);
    return;
  }
  const CertStep* recorded = find_step(cert, result);
  if (recorded == nullptr) {
    fail("certificate lacks the expected " + result + " step");
    return;
  }
  if (fresh.step->result != result) {
    fail("recomputed step is " + fresh.step->result + ", certificate records " + result);
    return;
  }
  if (!same_witness(fresh.step->witness, recorded->witness)) {
    fail("recomputed " + result + " witness differs from the recorded one");
  }
}

// Route-specific audit: rebuilds the constructions of the recorded route
// with fresh computations and replays the lemma checks on them.
void audit_analyze_route(const Certificate& cert, const GraphOfGroups& gog,
                         const FailureLog& fail) {
  if (cert.steps.size() < 2) {
    fail("certificate has no route step");
    return;
  }
  const ojson& routed = cert.steps[1].witness;
  if (!routed.contains("route")) {
    fail("second step carries no route marker");
    return;
  }
  const std::string route = routed["route"].get<std::string>();
  const ojson context = routed.value("context", ojson::object());

  if (route == "single-vertex") {
    if (gog.graph.vertices().size() != 1 || !gog.graph.edges().empty()) {
      fail("single-vertex route recorded for a larger graph");
    }
    return;
  }

  SpanningTree st = spanning_tree_and_rank(gog);

  if (route == "rank-two-free-quotient" || route == "rank-two-lifted-ends") {
    if (st.rank < 2) {
      fail("rank-two route recorded for rank " + std::to_string(st.rank));
      return;
    }
    if (context.value("spanning_tree", std::vector<std::string>{}) != st.tree_edges) {
      fail("recorded spanning tree differs from the recomputed one");
      return;
    }
    ContractedRose rose = contract_spanning_tree(gog, st);
    if (rose.vertex != context.value("contracted_vertex", std::string())) {
      fail("recorded contracted vertex differs from the recomputed one");
      return;
    }
    if (route == "rank-two-free-quotient") {
      const GroupRef& a = rose.gog.vertex_group(rose.vertex);
      bool all_fill = a.is_compact();
      for (const SerreEdge& e : rose.gog.graph.edges()) {
        all_fill = all_fill && fills_target(rose.gog, e.id);
      }
      if (!all_fill) {
        fail("free-quotient route recorded although an inclusion is proper");
        return;
      }
      const CertStep* step = find_step(cert, "Discrete free quotient");
      if (step == nullptr) {
        fail("certificate lacks the discrete free-quotient step");
        return;
      }
      if (step->witness.value("free_rank", -1) != st.rank) {
        fail("recorded free rank differs from the recomputed circuit rank");
      }
      if (step->witness.value("compact_kernel_order", std::size_t{0}) !=
          *a.collapsed_order()) {
        fail("recorded compact kernel order differs from the recomputed collapse");
      }
      return;
    }
    std::string proper_edge = context.value("proper_edge", std::string());
    std::string second_edge = context.value("second_edge", std::string());
    if (!inclusion_proper(rose.gog, proper_edge)) {
      fail("recorded proper edge is not proper on recomputation");
      return;
    }
    if (rose.gog.geometric_key(proper_edge) == rose.gog.geometric_key(second_edge)) {
      fail("recorded second edge coincides with the proper edge");
      return;
    }
    GraphOfGroups z = build_z_configuration(rose.gog, rose.vertex, proper_edge, second_edge);
    compare_step(check_lemma_3_2(z), cert, "Lemma 3.2(2)", fail);
    return;
  }

  if (route.rfind("rank-one-", 0) == 0) {
    if (st.rank != 1) {
      fail("rank-one route recorded for rank " + std::to_string(st.rank));
      return;
    }
    PruneResult pruned = prune_trivial_terminals(gog);
    if (pruned_json(pruned) != context.value("pruned", ojson::array())) {
      fail("recorded pruning sequence differs from the recomputed one");
      return;
    }
    if (route == "rank-one-terminal-cover") {
      std::string base = context.value("base", std::string());
      if (pruned.gog.graph.degree(base) != 1) {
        fail("recorded base vertex is not terminal after pruning");
        return;
      }
      int radius = context.value("radius", 0);
      std::set<std::string> circuit = circuit_vertices_of(pruned.gog.graph);
      int d = distance_to_set(pruned.gog.graph, base, circuit);
      int circuit_length = 0;
      for (const auto& [lo, hi] : pruned.gog.graph.geometric_edges()) {
        const SerreEdge& e = pruned.gog.graph.edge(lo);
        if (circuit.count(e.origin) && circuit.count(e.target)) ++circuit_length;
      }
      if (radius != 2 * d + circuit_length) {
        fail("recorded truncation radius differs from the recomputed one");
        return;
      }
      CoveringTruncation cover = covering_tree_truncation(pruned.gog, base, radius);
      compare_step(check_lemma_3_2(cover.tree), cert, "Lemma 3.2(2)", fail);
      return;
    }
    CircuitData c = circuit_data(pruned.gog);
    if (context.value("circuit_vertices", std::vector<std::string>{}) != c.vertices ||
        context.value("circuit_edges", std::vector<std::string>{}) != c.edges) {
      fail("recorded circuit orientation differs from the recomputed one");
      return;
    }
    CircuitPlan plan = plan_circuit(c);
    if (route == "rank-one-circuit-limit") {
      if (plan.found) fail("limit route recorded although proper inclusions exist");
      return;
    }
    if (!plan.found || plan.m != context.value("m", -2) || plan.n != context.value("n", -2) ||
        plan.o != context.value("o", -2) ||
        plan.grouping != context.value("grouping", std::string())) {
      fail("recorded circuit positions differ from the recomputed plan");
      return;
    }
    if (route == "rank-one-circuit-flat") {
      GraphOfGroups segment = build_flat_segment(pruned.gog, c, plan);
      compare_step(check_lemma_3_2(segment), cert, "Lemma 3.2(1)", fail);
      return;
    }
    Lemma31Input input = build_circuit_lemma_3_1(pruned.gog, c, plan);
    compare_step(check_lemma_3_1(input.k, input.counting, input.proper), cert, "Lemma 3.1",
                 fail);
    return;
  }

  if (st.rank != 0) {
    fail("rank-zero route recorded for rank " + std::to_string(st.rank));
    return;
  }

  if (route == "edge-transitive") {
    std::vector<EdgeVertexReport> reports = edge_local_actions(gog);
    if (edge_reports_json(reports) != routed.value("local_actions", ojson::array())) {
      fail("recorded local actions differ from the recomputed ones");
      return;
    }
    for (const EdgeVertexReport& r : reports) {
      bool bound = r.action.double_cosets <= 2;
      if (bound != r.action.two_transitive) {
        fail("double-coset bound and 2-transitivity disagree at vertex " + r.vertex);
      }
    }
    if (cert.verdict == Verdict::NonamenableLvN) {
      for (const EdgeVertexReport& r : reports) {
        if (r.action.two_transitive) continue;
        const EdgeVertexReport& opposite =
            (reports[0].vertex == r.vertex) ? reports[1] : reports[0];
        if (opposite.action.index < 2) continue;
        const PermGroup& k = gog.edge_group(r.edge_into);
        EmbeddedGroup counting{GroupRef::finite(r.vertex, gog.vertex_group(r.vertex)
                                                              .finite_group()),
                               {r.vertex, gog.inclusion(r.edge_into).hom}};
        EmbeddedGroup proper{
            GroupRef::finite(opposite.vertex, gog.vertex_group(opposite.vertex).finite_group()),
            {opposite.vertex, gog.inclusion(opposite.edge_into).hom}};
        compare_step(check_lemma_3_1(k, counting, proper), cert, "Lemma 3.1", fail);
        return;
      }
      fail("non-amenability verdict recorded without a qualifying vertex");
    }
    return;
  }

  if (route == "rank-zero-thin") {
    if (is_thick(gog)) fail("thin route recorded for a thick quotient");
    return;
  }
  if (route == "rank-zero-ends") {
    compare_step(check_lemma_3_2(gog), cert, "Lemma 3.2(2)", fail);
    return;
  }
  if (route == "rank-zero-segment-contraction") {
    std::vector<std::string> path = path_order(gog.graph);
    if (context.value("segment", std::vector<std::string>{}) != path) {
      fail("recorded segment order differs from the recomputed one");
      return;
    }
    std::vector<std::string> inner =
        context.value("inner_edges", std::vector<std::string>{});
    GraphOfGroups contracted = inner.empty() ? gog : contract_subtree(gog, inner);
    compare_step(check_lemma_3_2(contracted), cert, "Lemma 3.2(1)", fail);
    return;
  }
  if (route == "rank-zero-equality-chain") {
    std::vector<std::string> path = path_order(gog.graph);
    if (context.value("segment", std::vector<std::string>{}) != path) {
      fail("recorded segment order differs from the recomputed one");
      return;
    }
    Case2Input input = build_equality_chain(gog, path, context.value("k", 0));
    compare_step(check_lemma_3_1(input.edge_group, input.counting, input.proper), cert,
                 "Lemma 3.1", fail);
    return;
  }
  fail("unknown route: " + route);
}

}  // namespace

ReplayReport replay_classify_bm(const Certificate& cert, const PermGroup& f, int degree) {
  ReplayReport report;
  FailureLog fail{&report};
  try {
    Certificate fresh = classify_bm(f, degree);
    if (dump_json(certificate_to_json(fresh)) != dump_json(certificate_to_json(cert))) {
      fail("certificate differs from its deterministic regeneration");
    }

    bool two_transitive = is_two_transitive(f);
    Verdict expected = two_transitive ? Verdict::TypeI : Verdict::NonamenableLvN;
    if (cert.verdict != expected) {
      fail("verdict does not match the recomputed 2-transitivity of the local action");
    }
    const CertStep* def = find_step(cert, "Definition 2.2");
    if (def == nullptr) {
      fail("certificate lacks the Definition 2.2 step");
    } else {
      if (def->witness.value("two_transitive", !two_transitive) != two_transitive) {
        fail("recorded 2-transitivity differs from the recomputed value");
      }
      int point = two_transitive ? def->witness.value("stabilizer_point", 0)
                                 : def->witness.value("failing_point", -1);
      if (point < 0 || point >= degree) {
        fail("recorded stabiliser point is out of range");
      } else {
        if (def->witness.value("stabilizer_order", std::size_t{0}) !=
            point_stabilizer(f, point).order()) {
          fail("recorded stabiliser order differs from the recomputed one");
        }
        if (def->witness.value("stabilizer_orbits", ojson::array()) !=
            stabilizer_orbits_json(f, point)) {
          fail("recorded stabiliser orbits differ from the recomputed partition");
        }
        if (!two_transitive &&
            def->witness.value("stabilizer_orbits", ojson::array()).size() < 2) {
          fail("failing point does not witness intransitivity of the stabiliser");
        }
      }
    }
    const CertStep* sphere = find_step(cert, "Lemma 6.8");
    if (sphere != nullptr) {
      int radius = sphere->witness.value("radius", 0);
      ColouredBall ball = build_ball(degree, radius);
      std::vector<BallAutomorphism> group = ball_group(ball, f);
      std::vector<std::vector<int>> orbits_fresh = sphere_orbits(ball, group, radius);
      if (orbits_fresh.size() < 2) {
        fail("recorded sphere is transitive on recomputation");
      }
      if (sphere->witness.value("orbit_count", std::size_t{0}) != orbits_fresh.size()) {
        fail("recorded sphere orbit count differs from the recomputed one");
      }
    }
    if (!verdict_supported(cert)) {
      fail("verdict is not supported by the recorded steps");
    }
  } catch (const std::exception& e) {
    fail(std::string("replay aborted: ") + e.what());
  }
  return report;
}

ReplayReport replay_analyze(const Certificate& cert, const GraphOfGroups& gog,
                            const Assertions& assertions) {
  ReplayReport report;
  FailureLog fail{&report};
  try {
    Certificate fresh = analyze(gog, assertions);
    if (dump_json(certificate_to_json(fresh)) != dump_json(certificate_to_json(cert))) {
      fail("certificate differs from its deterministic regeneration");
    }
    audit_analyze_route(cert, gog, fail);
    if (!verdict_supported(cert)) {
      fail("verdict is not supported by the recorded steps");
    }
  } catch (const std::exception& e) {
    fail(std::string("replay aborted: ") + e.what());
  }
  return report;
}

}  // namespace arbor
