#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arbor/group_ref.hpp"
#include "arbor/perm_group.hpp"
#include "arbor/serre_graph.hpp"

namespace arbor {

// The monomorphism attached to a directed edge e: it embeds the geometric
// edge's group into the group of target(e).  When that vertex group is an
// amalgam, `target_leaf` names the leaf the edge group actually maps into;
// for finite vertex groups it equals the vertex id.
struct EdgeInclusion {
  std::string target_leaf;
  Homomorphism hom;
};

// A graph together with a group for every vertex and geometric edge and an
// injective inclusion for every directed edge.
struct GraphOfGroups {
  SerreGraph graph;
  std::map<std::string, GroupRef> vertex_groups;   // by vertex id
  std::map<std::string, PermGroup> edge_groups;    // by geometric key (min of pair)
  std::map<std::string, EdgeInclusion> inclusions; // by directed edge id

  // Geometric key of a directed edge: the smaller of the two ids.
  std::string geometric_key(const std::string& edge_id) const;
  const PermGroup& edge_group(const std::string& edge_id) const;
  const GroupRef& vertex_group(const std::string& vertex_id) const;
  const EdgeInclusion& inclusion(const std::string& edge_id) const;
};

// Checks the shape of a GraphOfGroups: valid graph, total group assignments,
// and for every directed edge an injective inclusion whose domain is the
// edge group and whose codomain is the named leaf of the target's group.
// Throws on the first violation.
void validate_gog(const GraphOfGroups& gog);

// Number of edges at any lift of `v` in the tree the graph of groups
// unfolds to: the sum over directed edges e with target v of the index
// [G_v : image(G_e)].  Requires a finite vertex group.
int lifted_degree(const GraphOfGroups& gog, const std::string& vertex_id);

// True when every lift has degree >= 3, i.e. the unfolded tree is thick.
// Requires all vertex groups finite.
bool is_thick(const GraphOfGroups& gog);

// A finite group acting on a finite tree.  `vertex_maps` is aligned with
// group.elements(); each entry sends vertex ids to vertex ids.
struct TreeAction {
  PermGroup group;
  SerreGraph tree;
  std::vector<std::map<std::string, std::string>> vertex_maps;

  const std::map<std::string, std::string>& action_of(const Permutation& g) const;
};

// Extends generator images to the whole group (validating consistency), and
// checks that every element acts by a tree automorphism without inversions
// (no element may swap the endpoints of an edge).
TreeAction make_tree_action(
    PermGroup group, SerreGraph tree,
    const std::vector<std::map<std::string, std::string>>& generator_vertex_maps);

// Quotient graph of groups of a tree action.  Vertex and edge group data is
// read off from stabilisers of a connected fundamental domain; inclusions
// are genuine containments after conjugating each lift into the domain.
struct QuotientResult {
  GraphOfGroups gog;
  // Chosen lift (fundamental-domain representative) of each quotient vertex
  // and of each quotient directed edge.
  std::map<std::string, std::string> vertex_lift;
  std::map<std::string, std::string> edge_lift;
  // Orbits, keyed by quotient id, each sorted.
  std::map<std::string, std::vector<std::string>> vertex_orbits;
  std::map<std::string, std::vector<std::string>> edge_orbits;
};
QuotientResult quotient_of_action(const TreeAction& action);

// Collapses a connected subtree of the graph to a single vertex (the least
// vertex id the subtree spans).  `subtree_edges` lists geometric edge keys
// that must form a tree inside gog.graph.  The new vertex carries the
// iterated amalgam of the collapsed vertex groups over the collapsed edge
// groups; surviving edges that pointed into the subtree keep their original
// inclusion, now read as mapping into the matching leaf of the amalgam.
GraphOfGroups contract_subtree(const GraphOfGroups& gog,
                               const std::vector<std::string>& subtree_edges);

// Truncated universal cover of the underlying graph, based at `base`, to
// combinatorial radius `radius`; every lift carries a copy of the projected
// group data.  Vertices at distance exactly `radius` are boundary-marked.
struct CoveringTruncation {
  GraphOfGroups tree;
  std::map<std::string, std::string> vertex_projection;
  std::map<std::string, std::string> edge_projection;
};
CoveringTruncation covering_tree_truncation(const GraphOfGroups& gog,
                                            const std::string& base,
                                            int radius);

// Breadth-first spanning tree (geometric edge keys) from the least vertex,
// plus the circuit rank of the graph.  Requires a connected graph.
struct SpanningTree {
  std::vector<std::string> tree_edges;
  int rank = 0;
};
SpanningTree spanning_tree_and_rank(const GraphOfGroups& gog);

}  // namespace arbor
