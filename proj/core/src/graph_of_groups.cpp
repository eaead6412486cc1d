#include "arbor/graph_of_groups.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "arbor/caps.hpp"
#include "arbor/error.hpp"

namespace arbor {

std::string GraphOfGroups::geometric_key(const std::string& edge_id) const {
  const SerreEdge& e = graph.edge(edge_id);
  return std::min(e.id, e.reverse);
}

const PermGroup& GraphOfGroups::edge_group(const std::string& edge_id) const {
  auto it = edge_groups.find(geometric_key(edge_id));
  if (it == edge_groups.end()) {
    throw_invalid("no edge group for \"" + edge_id + "\"");
  }
  return it->second;
}

const GroupRef& GraphOfGroups::vertex_group(const std::string& vertex_id) const {
  auto it = vertex_groups.find(vertex_id);
  if (it == vertex_groups.end()) {
    throw_invalid("no vertex group for \"" + vertex_id + "\"");
  }
  return it->second;
}

const EdgeInclusion& GraphOfGroups::inclusion(const std::string& edge_id) const {
  auto it = inclusions.find(edge_id);
  if (it == inclusions.end()) {
    throw_invalid("no inclusion for edge \"" + edge_id + "\"");
  }
  return it->second;
}

void validate_gog(const GraphOfGroups& gog) {
  if (gog.graph.vertices().empty()) {
    throw_invalid("graph of groups needs at least one vertex");
  }
  for (const SerreVertex& v : gog.graph.vertices()) {
    if (gog.vertex_groups.find(v.id) == gog.vertex_groups.end()) {
      throw_invalid("vertex \"" + v.id + "\" has no group");
    }
  }
  for (const auto& [id, ref] : gog.vertex_groups) {
    if (!gog.graph.has_vertex(id)) {
      throw_invalid("vertex group for unknown vertex \"" + id + "\"");
    }
    (void)ref;
  }
  for (const auto& [key, group] : gog.edge_groups) {
    if (!gog.graph.has_edge(key) || gog.geometric_key(key) != key) {
      throw_invalid("edge group key \"" + key + "\" is not a geometric edge key");
    }
    (void)group;
  }
  for (const auto& [id, incl] : gog.inclusions) {
    if (!gog.graph.has_edge(id)) {
      throw_invalid("inclusion for unknown edge \"" + id + "\"");
    }
    (void)incl;
  }
  for (const auto& [e_min, e_max] : gog.graph.geometric_edges()) {
    if (gog.edge_groups.find(e_min) == gog.edge_groups.end()) {
      throw_invalid("geometric edge \"" + e_min + "\" has no group");
    }
    (void)e_max;
  }
  for (const SerreEdge& e : gog.graph.edges()) {
    const EdgeInclusion& incl = gog.inclusion(e.id);
    const PermGroup& eg = gog.edge_group(e.id);
    if (!incl.hom.domain().same_group(eg)) {
      throw_invalid("inclusion domain of edge \"" + e.id + "\" is not its edge group");
    }
    const GroupRef& target = gog.vertex_group(e.target);
    if (!target.has_leaf(incl.target_leaf)) {
      throw_invalid("inclusion of edge \"" + e.id + "\" targets missing leaf \"" +
                    incl.target_leaf + "\"");
    }
    if (!incl.hom.codomain().same_group(target.leaf_group(incl.target_leaf))) {
      throw_invalid("inclusion codomain of edge \"" + e.id +
                    "\" is not the leaf group of \"" + incl.target_leaf + "\"");
    }
    if (!incl.hom.is_injective()) {
      throw_invalid("inclusion of edge \"" + e.id + "\" is not injective");
    }
  }
}

int lifted_degree(const GraphOfGroups& gog, const std::string& vertex_id) {
  const GroupRef& ref = gog.vertex_group(vertex_id);
  if (!ref.is_finite()) {
    throw_invalid("lifted degree needs a finite vertex group at \"" + vertex_id + "\"");
  }
  const std::size_t order = ref.finite_group().order();
  int total = 0;
  for (const SerreEdge& e : gog.graph.edges()) {
    if (e.target != vertex_id) continue;
    std::size_t image = gog.inclusion(e.id).hom.image_order();
    total += static_cast<int>(order / image);
  }
  return total;
}

bool is_thick(const GraphOfGroups& gog) {
  for (const SerreVertex& v : gog.graph.vertices()) {
    if (lifted_degree(gog, v.id) < 3) return false;
  }
  return true;
}

const std::map<std::string, std::string>& TreeAction::action_of(const Permutation& g) const {
  std::ptrdiff_t idx = group.index_of(g);
  if (idx < 0) throw_invalid("action of an element outside the group");
  return vertex_maps[static_cast<std::size_t>(idx)];
}

namespace {

// Checks that `m` is a bijection of the vertex set preserving adjacency.
void check_tree_automorphism(const SerreGraph& tree,
                             const std::map<std::string, std::string>& m) {
  std::set<std::string> images;
  for (const SerreVertex& v : tree.vertices()) {
    auto it = m.find(v.id);
    if (it == m.end()) throw_invalid("action map misses vertex \"" + v.id + "\"");
    if (!tree.has_vertex(it->second)) {
      throw_invalid("action map sends \"" + v.id + "\" outside the tree");
    }
    images.insert(it->second);
  }
  if (images.size() != tree.vertices().size() || m.size() != tree.vertices().size()) {
    throw_invalid("action map is not a vertex bijection");
  }
  for (const SerreEdge& e : tree.edges()) {
    const std::string& a = m.at(e.origin);
    const std::string& b = m.at(e.target);
    bool adjacent = false;
    for (const std::string& eid : tree.edges_at(a)) {
      if (tree.edge(eid).target == b) adjacent = true;
    }
    if (!adjacent) {
      throw_invalid("action map does not preserve adjacency on edge \"" + e.id + "\"");
    }
  }
}

std::map<std::string, std::string> compose_maps(
    const std::map<std::string, std::string>& outer,
    const std::map<std::string, std::string>& inner) {
  std::map<std::string, std::string> result;
  for (const auto& [v, w] : inner) result[v] = outer.at(w);
  return result;
}

}  // namespace

TreeAction make_tree_action(
    PermGroup group, SerreGraph tree,
    const std::vector<std::map<std::string, std::string>>& generator_vertex_maps) {
  if (!tree.is_tree()) throw_invalid("tree action needs a tree");
  if (generator_vertex_maps.size() != group.generators().size()) {
    throw_invalid("need one vertex map per group generator");
  }
  for (const auto& m : generator_vertex_maps) check_tree_automorphism(tree, m);

  const auto& elems = group.elements();
  std::vector<std::map<std::string, std::string>> maps(elems.size());
  std::vector<bool> known(elems.size(), false);
  std::map<std::string, std::string> identity_map;
  for (const SerreVertex& v : tree.vertices()) identity_map[v.id] = v.id;
  std::ptrdiff_t id_idx = group.index_of(Permutation::identity(group.degree()));
  maps[static_cast<std::size_t>(id_idx)] = identity_map;
  known[static_cast<std::size_t>(id_idx)] = true;
  std::queue<std::size_t> frontier;
  frontier.push(static_cast<std::size_t>(id_idx));
  while (!frontier.empty()) {
    std::size_t x = frontier.front();
    frontier.pop();
    for (std::size_t i = 0; i < group.generators().size(); ++i) {
      std::size_t y = static_cast<std::size_t>(
          group.index_of(elems[x].compose(group.generators()[i])));
      std::map<std::string, std::string> candidate =
          compose_maps(maps[x], generator_vertex_maps[i]);
      if (!known[y]) {
        maps[y] = std::move(candidate);
        known[y] = true;
        frontier.push(y);
      } else if (maps[y] != candidate) {
        throw_invalid("generator vertex maps are inconsistent with group relations");
      }
    }
  }
  // Full multiplicativity check: the extension must be an action.
  for (std::size_t a = 0; a < elems.size(); ++a) {
    for (std::size_t b = 0; b < elems.size(); ++b) {
      std::size_t ab = static_cast<std::size_t>(group.index_of(elems[a].compose(elems[b])));
      if (maps[ab] != compose_maps(maps[a], maps[b])) {
        throw_invalid("generator vertex maps do not extend to an action");
      }
    }
  }
  // No inversions: no element may swap the endpoints of an edge.
  for (std::size_t x = 0; x < elems.size(); ++x) {
    for (const SerreEdge& e : tree.edges()) {
      if (maps[x].at(e.origin) == e.target && maps[x].at(e.target) == e.origin) {
        throw_invalid("action inverts edge \"" + e.id + "\" (element " +
                      format_cycles(elems[x]) + ")");
      }
    }
  }
  TreeAction action;
  action.group = std::move(group);
  action.tree = std::move(tree);
  action.vertex_maps = std::move(maps);
  return action;
}

namespace {

// Stabiliser of a set of vertices, as a subgroup of the acting group.
PermGroup vertex_set_stabilizer(const TreeAction& action,
                                const std::vector<std::string>& vertex_ids) {
  std::vector<Permutation> fixed;
  const auto& elems = action.group.elements();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    bool fixes = true;
    for (const std::string& v : vertex_ids) {
      if (action.vertex_maps[i].at(v) != v) {
        fixes = false;
        break;
      }
    }
    if (fixes) fixed.push_back(elems[i]);
  }
  return PermGroup::from_elements(action.group.degree(), std::move(fixed));
}

}  // namespace

QuotientResult quotient_of_action(const TreeAction& action) {
  const SerreGraph& tree = action.tree;
  const auto& maps = action.vertex_maps;

  // Vertex orbits and representatives.
  std::map<std::string, std::string> vertex_rep;
  QuotientResult result;
  for (const SerreVertex& v : tree.vertices()) {
    if (vertex_rep.count(v.id) > 0) continue;
    std::set<std::string> orb;
    for (const auto& m : maps) orb.insert(m.at(v.id));
    const std::string& rep = *orb.begin();
    for (const std::string& w : orb) vertex_rep[w] = rep;
    result.vertex_orbits[rep] = std::vector<std::string>(orb.begin(), orb.end());
  }

  // Directed edge orbits.  In a tree a directed edge is determined by its
  // ordered endpoint pair.
  std::map<std::pair<std::string, std::string>, std::string> edge_by_pair;
  for (const SerreEdge& e : tree.edges()) {
    edge_by_pair[{e.origin, e.target}] = e.id;
  }
  std::map<std::string, std::string> edge_rep;
  for (const SerreEdge& e : tree.edges()) {
    if (edge_rep.count(e.id) > 0) continue;
    std::set<std::string> orb;
    for (const auto& m : maps) {
      orb.insert(edge_by_pair.at({m.at(e.origin), m.at(e.target)}));
    }
    const std::string& rep = *orb.begin();
    for (const std::string& f : orb) edge_rep[f] = rep;
    result.edge_orbits[rep] = std::vector<std::string>(orb.begin(), orb.end());
  }

  // Quotient graph.
  std::vector<SerreVertex> q_vertices;
  for (const auto& [rep, orb] : result.vertex_orbits) {
    q_vertices.push_back(tree.vertex(rep));
    (void)orb;
  }
  std::vector<SerreEdge> q_edges;
  for (const auto& [rep, orb] : result.edge_orbits) {
    const SerreEdge& e = tree.edge(rep);
    SerreEdge q;
    q.id = rep;
    q.origin = vertex_rep.at(e.origin);
    q.target = vertex_rep.at(e.target);
    q.reverse = edge_rep.at(e.reverse);
    q_edges.push_back(std::move(q));
    (void)orb;
  }
  SerreGraph quotient(std::move(q_vertices), std::move(q_edges));

  // Connected fundamental domain: breadth-first over the quotient, lifting
  // each newly reached vertex through an edge lift at an already-lifted one.
  std::map<std::string, std::string>& lift = result.vertex_lift;
  std::set<std::string> bfs_tree_edges;  // directed quotient edges traversed
  const std::string& root = quotient.vertices().front().id;
  lift[root] = root;  // the representative itself is the least lift
  std::queue<std::string> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    std::string v = std::move(frontier.front());
    frontier.pop();
    for (const std::string& qe : quotient.edges_at(v)) {
      const std::string& w = quotient.edge(qe).target;
      if (lift.count(w) > 0) continue;
      // Least lift of qe originating at lift(v).
      std::string chosen;
      for (const std::string& orbit_member : result.edge_orbits.at(qe)) {
        if (tree.edge(orbit_member).origin == lift.at(v)) {
          if (chosen.empty() || orbit_member < chosen) chosen = orbit_member;
        }
      }
      if (chosen.empty()) {
        throw_invalid("internal: no edge lift at fundamental-domain vertex");
      }
      lift[w] = tree.edge(chosen).target;
      bfs_tree_edges.insert(qe);
      bfs_tree_edges.insert(quotient.edge(qe).reverse);
      result.edge_lift[qe] = chosen;
      result.edge_lift[quotient.edge(qe).reverse] = tree.edge(chosen).reverse;
      frontier.push(w);
    }
  }

  // Lifts for the remaining (non-tree) directed edges: least orbit member
  // based at the lift of the origin.
  for (const SerreEdge& qe : quotient.edges()) {
    if (result.edge_lift.count(qe.id) > 0) continue;
    std::string chosen;
    for (const std::string& orbit_member : result.edge_orbits.at(qe.id)) {
      if (tree.edge(orbit_member).origin == lift.at(qe.origin)) {
        if (chosen.empty() || orbit_member < chosen) chosen = orbit_member;
      }
    }
    if (chosen.empty()) {
      throw_invalid("internal: no edge lift based at the origin lift");
    }
    result.edge_lift[qe.id] = chosen;
  }

  // Groups: stabilisers of the chosen lifts.
  GraphOfGroups gog;
  gog.graph = quotient;
  for (const auto& [qv, tv] : lift) {
    gog.vertex_groups.emplace(qv, GroupRef::finite(qv, vertex_set_stabilizer(action, {tv})));
  }
  for (const auto& [e_min, e_max] : quotient.geometric_edges()) {
    // The geometric edge group comes from the lift of the canonical
    // direction (the smaller directed id).
    const std::string& lifted = result.edge_lift.at(e_min);
    const SerreEdge& le = tree.edge(lifted);
    PermGroup stab = vertex_set_stabilizer(action, {le.origin, le.target});
    gog.edge_groups.emplace(e_min, std::move(stab));
    (void)e_max;
  }
  // Inclusions: for each directed quotient edge, embed the geometric edge
  // group into the target vertex group, conjugating when the canonical
  // lift's endpoint is not the fundamental-domain lift.
  for (const SerreEdge& qe : quotient.edges()) {
    const std::string key = gog.geometric_key(qe.id);
    const PermGroup& edge_stab = gog.edge_groups.at(key);
    const std::string& lifted = result.edge_lift.at(key);
    const SerreEdge& le = tree.edge(lifted);
    // Endpoint of the canonical lift on this direction's target side.
    const std::string& endpoint = (qe.id == key) ? le.target : le.origin;
    const std::string& target_lift = lift.at(qe.target);
    const PermGroup& vertex_stab = gog.vertex_groups.at(qe.target).finite_group();
    std::vector<Permutation> images;
    if (endpoint == target_lift) {
      images.assign(edge_stab.elements().begin(), edge_stab.elements().end());
    } else {
      // Least g carrying the endpoint into the fundamental domain.
      const Permutation* mover = nullptr;
      const auto& elems = action.group.elements();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        if (action.vertex_maps[i].at(endpoint) == target_lift) {
          mover = &elems[i];
          break;
        }
      }
      if (mover == nullptr) {
        throw_invalid("internal: endpoint lift not in the orbit of the domain lift");
      }
      Permutation inv = mover->inverse();
      for (const Permutation& x : edge_stab.elements()) {
        images.push_back(mover->compose(x).compose(inv));
      }
    }
    EdgeInclusion incl{qe.target, Homomorphism(edge_stab, vertex_stab, std::move(images))};
    gog.inclusions.emplace(qe.id, std::move(incl));
  }
  result.gog = std::move(gog);
  return result;
}

GraphOfGroups contract_subtree(const GraphOfGroups& gog,
                               const std::vector<std::string>& subtree_edges) {
  if (subtree_edges.empty()) return gog;
  std::set<std::string> keys;
  std::set<std::string> spanned;
  std::set<std::string> directed;  // both directions of every subtree edge
  for (const std::string& key : subtree_edges) {
    if (!gog.graph.has_edge(key) || gog.geometric_key(key) != key) {
      throw_invalid("subtree edge \"" + key + "\" is not a geometric edge key");
    }
    if (!keys.insert(key).second) {
      throw_invalid("subtree edge \"" + key + "\" repeated");
    }
    const SerreEdge& e = gog.graph.edge(key);
    spanned.insert(e.origin);
    spanned.insert(e.target);
    directed.insert(e.id);
    directed.insert(e.reverse);
  }
  if (keys.size() != spanned.size() - 1) {
    throw_invalid("subtree edges do not form a tree (edge/vertex count mismatch)");
  }

  const std::string& contracted = *spanned.begin();

  // Fold the amalgam breadth-first from the least spanned vertex.
  GroupRef amalgam = gog.vertex_group(contracted);
  std::set<std::string> folded = {contracted};
  while (folded.size() < spanned.size()) {
    // Least directed subtree edge from a folded vertex to an unfolded one.
    std::string next;
    for (const std::string& eid : directed) {
      const SerreEdge& e = gog.graph.edge(eid);
      if (folded.count(e.origin) > 0 && folded.count(e.target) == 0) {
        next = eid;
        break;  // `directed` is sorted
      }
    }
    if (next.empty()) {
      throw_invalid("subtree edges do not form a connected tree");
    }
    const SerreEdge& e = gog.graph.edge(next);
    const EdgeInclusion& into_new = gog.inclusion(e.id);
    const EdgeInclusion& into_old = gog.inclusion(e.reverse);
    amalgam = GroupRef::amalgam(
        std::move(amalgam), gog.vertex_group(e.target), gog.edge_group(e.id),
        into_old.target_leaf, into_old.hom,
        into_new.target_leaf, into_new.hom,
        gog.geometric_key(e.id));
    folded.insert(e.target);
  }

  // Rebuild the graph with the spanned set collapsed to one vertex.
  std::vector<SerreVertex> vertices;
  for (const SerreVertex& v : gog.graph.vertices()) {
    if (spanned.count(v.id) == 0 || v.id == contracted) vertices.push_back(v);
  }
  auto map_vertex = [&](const std::string& id) {
    return spanned.count(id) > 0 ? contracted : id;
  };
  std::vector<SerreEdge> edges;
  for (const SerreEdge& e : gog.graph.edges()) {
    if (directed.count(e.id) > 0) continue;
    SerreEdge ne = e;
    ne.origin = map_vertex(e.origin);
    ne.target = map_vertex(e.target);
    edges.push_back(std::move(ne));
  }

  GraphOfGroups result;
  result.graph = SerreGraph(std::move(vertices), std::move(edges));
  for (const SerreVertex& v : result.graph.vertices()) {
    if (v.id == contracted) {
      result.vertex_groups.emplace(v.id, amalgam);
    } else {
      result.vertex_groups.emplace(v.id, gog.vertex_group(v.id));
    }
  }
  for (const auto& [key, group] : gog.edge_groups) {
    if (keys.count(key) == 0) result.edge_groups.emplace(key, group);
  }
  for (const auto& [eid, incl] : gog.inclusions) {
    if (directed.count(eid) == 0) result.inclusions.emplace(eid, incl);
  }
  return result;
}

CoveringTruncation covering_tree_truncation(const GraphOfGroups& gog,
                                            const std::string& base, int radius) {
  validate_gog(gog);
  if (!gog.graph.has_vertex(base)) throw_invalid("unknown base vertex \"" + base + "\"");
  if (!gog.graph.is_connected()) {
    throw_invalid("covering tree needs a connected graph");
  }
  if (radius < 0) throw_invalid("negative radius");

  CoveringTruncation result;
  std::vector<SerreVertex> vertices;
  std::vector<SerreEdge> edges;

  struct Item {
    std::string id;          // cover vertex id
    std::string projection;  // vertex of the base graph
    std::string arrived_by;  // projected directed edge used to get here ("" at base)
    int depth = 0;
  };
  std::queue<Item> frontier;
  SerreVertex root;
  root.id = "@";
  root.boundary = (radius == 0);
  vertices.push_back(root);
  result.vertex_projection.emplace("@", base);
  frontier.push({"@", base, "", 0});
  std::size_t vertex_budget = global_caps().ball_size;

  while (!frontier.empty()) {
    Item item = std::move(frontier.front());
    frontier.pop();
    if (item.depth == radius) continue;
    for (const std::string& eid : gog.graph.edges_at(item.projection)) {
      if (!item.arrived_by.empty() && eid == gog.graph.edge(item.arrived_by).reverse) {
        continue;  // non-backtracking
      }
      const SerreEdge& pe = gog.graph.edge(eid);
      std::string child_id = item.id + "/" + eid;
      SerreVertex child;
      child.id = child_id;
      child.boundary = (item.depth + 1 == radius);
      vertices.push_back(child);
      if (vertices.size() > vertex_budget) {
        throw_cap("covering tree exceeds cap of " + std::to_string(vertex_budget) +
                  " vertices");
      }
      result.vertex_projection.emplace(child_id, pe.target);
      SerreEdge forward;
      forward.id = child_id + "+";
      forward.origin = item.id;
      forward.target = child_id;
      forward.reverse = child_id + "-";
      SerreEdge backward;
      backward.id = child_id + "-";
      backward.origin = child_id;
      backward.target = item.id;
      backward.reverse = child_id + "+";
      edges.push_back(forward);
      edges.push_back(backward);
      result.edge_projection.emplace(forward.id, pe.id);
      result.edge_projection.emplace(backward.id, pe.reverse);
      frontier.push({child_id, pe.target, eid, item.depth + 1});
    }
  }

  GraphOfGroups tree;
  tree.graph = SerreGraph(std::move(vertices), std::move(edges));
  for (const auto& [cover_id, proj] : result.vertex_projection) {
    tree.vertex_groups.emplace(cover_id, gog.vertex_group(proj));
  }
  for (const auto& [cover_eid, proj_eid] : result.edge_projection) {
    const std::string key = tree.geometric_key(cover_eid);
    if (cover_eid == key) {
      tree.edge_groups.emplace(key, gog.edge_group(proj_eid));
    }
    tree.inclusions.emplace(cover_eid, gog.inclusion(proj_eid));
  }
  result.tree = std::move(tree);
  return result;
}

SpanningTree spanning_tree_and_rank(const GraphOfGroups& gog) {
  if (!gog.graph.is_connected()) {
    throw_invalid("spanning tree needs a connected graph");
  }
  SpanningTree result;
  std::set<std::string> visited;
  const std::string& root = gog.graph.vertices().front().id;
  visited.insert(root);
  std::queue<std::string> frontier;
  frontier.push(root);
  while (!frontier.empty()) {
    std::string v = std::move(frontier.front());
    frontier.pop();
    for (const std::string& eid : gog.graph.edges_at(v)) {
      const std::string& w = gog.graph.edge(eid).target;
      if (visited.count(w) > 0) continue;
      visited.insert(w);
      result.tree_edges.push_back(gog.geometric_key(eid));
      frontier.push(w);
    }
  }
  result.rank = gog.graph.circuit_rank();
  return result;
}

}  // namespace arbor
