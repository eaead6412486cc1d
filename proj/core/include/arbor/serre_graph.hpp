#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace arbor {

// Graphs in the directed-pair formalism: every edge is directed, and each
// edge e has a distinct reverse e^ with origin(e^) = target(e) and
// target(e^) = origin(e).  A "geometric edge" is the pair {e, e^}.  Loops
// (origin == target) are allowed, but e^ != e always.
struct SerreVertex {
  std::string id;
  bool boundary = false;  // marks truncation artifacts (retained by reductions)
};

struct SerreEdge {
  std::string id;
  std::string origin;
  std::string target;
  std::string reverse;  // id of the opposite direction
};

class SerreGraph {
 public:
  SerreGraph() = default;
  // Validates: unique ids, endpoints exist, reverse is a fixed-point-free
  // involution, and origin/target swap under reversal.
  SerreGraph(std::vector<SerreVertex> vertices, std::vector<SerreEdge> edges);

  const std::vector<SerreVertex>& vertices() const { return vertices_; }
  // All directed edges, sorted by id.
  const std::vector<SerreEdge>& edges() const { return edges_; }

  bool has_vertex(const std::string& id) const;
  bool has_edge(const std::string& id) const;
  const SerreVertex& vertex(const std::string& id) const;
  const SerreEdge& edge(const std::string& id) const;

  // Directed edges with the given origin, sorted by id.
  std::vector<std::string> edges_at(const std::string& vertex_id) const;
  // Number of directed edges with the given origin.  A loop contributes 2
  // (both of its directions originate here), the usual convention.
  int degree(const std::string& vertex_id) const;

  // One entry per geometric edge: (lexicographically smaller id, larger id).
  std::vector<std::pair<std::string, std::string>> geometric_edges() const;
  std::size_t geometric_edge_count() const { return edges_.size() / 2; }

  bool is_connected() const;  // the empty graph is not connected
  bool is_tree() const;       // connected, nonempty, acyclic
  // Number of independent circuits: geometric edges - vertices + 1.
  // Requires a connected graph.
  int circuit_rank() const;

 private:
  std::vector<SerreVertex> vertices_;
  std::vector<SerreEdge> edges_;
  std::map<std::string, std::size_t> vertex_index_;
  std::map<std::string, std::size_t> edge_index_;
};

// A SerreGraph validated to be a tree at construction.
class SerreTree {
 public:
  explicit SerreTree(SerreGraph graph);
  const SerreGraph& graph() const { return graph_; }

 private:
  SerreGraph graph_;
};

// Two-colouring of the vertices (colour 0 for the least vertex id of each
// component).  Returns nullopt when the graph has an odd cycle.
std::optional<std::map<std::string, int>> bipartition(const SerreGraph& graph);

// One maximal chain of the reduction: the directed path of old edges that a
// new edge replaces.  vertex_ids has edge_ids.size() + 1 entries and
// edge_ids[i] runs from vertex_ids[i] to vertex_ids[i+1]; interior vertices
// all had degree 2 in the original tree.
struct ChainPath {
  std::vector<std::string> vertex_ids;
  std::vector<std::string> edge_ids;
};

// Result of suppressing the degree-2 vertices of a tree.  The reduced tree
// keeps the original ids of its surviving vertices; each new directed edge
// reuses the id of the first old edge on its chain.  edge_paths is keyed by
// directed new-edge id and stores the chain in that direction.
struct ReductionResult {
  SerreGraph reduced;
  std::map<std::string, ChainPath> edge_paths;
};

// Replaces every degree-2 vertex of the tree by merging its two edges,
// keeping vertices of degree >= 3 and boundary-marked leaves.
// Preconditions (violations throw): the input is a tree, every leaf is
// boundary-marked, boundary marks appear only on leaves, and at least one
// vertex has degree >= 3.
ReductionResult suppress_degree_two(const SerreTree& tree);

// Reverses suppress_degree_two: re-expands every chain.  Applied to an
// unmodified ReductionResult this reproduces the original tree exactly
// (same ids, marks, and reverse pairing).
SerreGraph expand_chains(const ReductionResult& reduction);

// A graph automorphism, determined by its vertex bijection.  (All graphs
// this library searches have at most one geometric edge between any two
// vertices, so the edge action is induced.)
struct GraphAutomorphism {
  std::map<std::string, std::string> vertex_images;

  std::string apply(const std::string& vertex_id) const {
    return vertex_images.at(vertex_id);
  }
  bool operator==(const GraphAutomorphism& other) const = default;
  bool operator<(const GraphAutomorphism& other) const {
    return vertex_images < other.vertex_images;
  }
};

GraphAutomorphism compose(const GraphAutomorphism& outer, const GraphAutomorphism& inner);
GraphAutomorphism identity_automorphism(const SerreGraph& graph);

// All vertex bijections preserving adjacency (with multiplicity), loops,
// boundary marks, and — when `edge_labels` is given — the label of every
// geometric edge (keyed by the lexicographically smaller id of the pair).
// Results are sorted by image table.  Intended for graphs with at most 20
// vertices (errors beyond that).
std::vector<GraphAutomorphism> automorphisms(
    const SerreGraph& graph,
    const std::map<std::string, std::string>* edge_labels = nullptr);

}  // namespace arbor
