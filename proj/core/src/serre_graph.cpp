#include "arbor/serre_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "arbor/error.hpp"

namespace arbor {

SerreGraph::SerreGraph(std::vector<SerreVertex> vertices, std::vector<SerreEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  std::sort(vertices_.begin(), vertices_.end(),
            [](const SerreVertex& a, const SerreVertex& b) { return a.id < b.id; });
  std::sort(edges_.begin(), edges_.end(),
            [](const SerreEdge& a, const SerreEdge& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertex_index_.emplace(vertices_[i].id, i).second) {
      throw_invalid("duplicate vertex id \"" + vertices_[i].id + "\"");
    }
  }
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    if (vertex_index_.count(edges_[i].id) > 0) {
      throw_invalid("edge id \"" + edges_[i].id + "\" collides with a vertex id");
    }
    if (!edge_index_.emplace(edges_[i].id, i).second) {
      throw_invalid("duplicate edge id \"" + edges_[i].id + "\"");
    }
  }
  for (const SerreEdge& e : edges_) {
    if (!has_vertex(e.origin)) {
      throw_invalid("edge \"" + e.id + "\" has dangling origin \"" + e.origin + "\"");
    }
    if (!has_vertex(e.target)) {
      throw_invalid("edge \"" + e.id + "\" has dangling target \"" + e.target + "\"");
    }
    auto it = edge_index_.find(e.reverse);
    if (it == edge_index_.end()) {
      throw_invalid("edge \"" + e.id + "\" names missing reverse \"" + e.reverse + "\"");
    }
    const SerreEdge& r = edges_[it->second];
    if (r.id == e.id) {
      throw_invalid("edge \"" + e.id + "\" is its own reverse");
    }
    if (r.reverse != e.id) {
      throw_invalid("reverse involution broken between \"" + e.id + "\" and \"" + r.id + "\"");
    }
    if (r.origin != e.target || r.target != e.origin) {
      throw_invalid("edge \"" + e.id + "\" and its reverse do not swap endpoints");
    }
  }
}

bool SerreGraph::has_vertex(const std::string& id) const {
  return vertex_index_.count(id) > 0;
}

bool SerreGraph::has_edge(const std::string& id) const {
  return edge_index_.count(id) > 0;
}

const SerreVertex& SerreGraph::vertex(const std::string& id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) throw_invalid("unknown vertex \"" + id + "\"");
  return vertices_[it->second];
}

const SerreEdge& SerreGraph::edge(const std::string& id) const {
  auto it = edge_index_.find(id);
  if (it == edge_index_.end()) throw_invalid("unknown edge \"" + id + "\"");
  return edges_[it->second];
}

std::vector<std::string> SerreGraph::edges_at(const std::string& vertex_id) const {
  if (!has_vertex(vertex_id)) throw_invalid("unknown vertex \"" + vertex_id + "\"");
  std::vector<std::string> result;
  for (const SerreEdge& e : edges_) {
    if (e.origin == vertex_id) result.push_back(e.id);
  }
  return result;  // edges_ is sorted by id already
}

int SerreGraph::degree(const std::string& vertex_id) const {
  return static_cast<int>(edges_at(vertex_id).size());
}

std::vector<std::pair<std::string, std::string>> SerreGraph::geometric_edges() const {
  std::vector<std::pair<std::string, std::string>> result;
  for (const SerreEdge& e : edges_) {
    if (e.id < e.reverse) result.emplace_back(e.id, e.reverse);
  }
  return result;
}

bool SerreGraph::is_connected() const {
  if (vertices_.empty()) return false;
  std::set<std::string> seen;
  std::queue<std::string> frontier;
  seen.insert(vertices_.front().id);
  frontier.push(vertices_.front().id);
  while (!frontier.empty()) {
    std::string v = std::move(frontier.front());
    frontier.pop();
    for (const std::string& eid : edges_at(v)) {
      const std::string& w = edge(eid).target;
      if (seen.insert(w).second) frontier.push(w);
    }
  }
  return seen.size() == vertices_.size();
}

bool SerreGraph::is_tree() const {
  if (vertices_.empty() || !is_connected()) return false;
  return geometric_edge_count() == vertices_.size() - 1;
}

int SerreGraph::circuit_rank() const {
  if (!is_connected()) throw_invalid("circuit rank requires a connected graph");
  return static_cast<int>(geometric_edge_count()) -
         static_cast<int>(vertices_.size()) + 1;
}

SerreTree::SerreTree(SerreGraph graph) : graph_(std::move(graph)) {
  if (!graph_.is_tree()) throw_invalid("graph is not a tree");
}

std::optional<std::map<std::string, int>> bipartition(const SerreGraph& graph) {
  std::map<std::string, int> colour;
  for (const SerreVertex& v : graph.vertices()) {
    if (colour.count(v.id) > 0) continue;
    colour[v.id] = 0;  // least unvisited vertex id of the component
    std::queue<std::string> frontier;
    frontier.push(v.id);
    while (!frontier.empty()) {
      std::string x = std::move(frontier.front());
      frontier.pop();
      for (const std::string& eid : graph.edges_at(x)) {
        const std::string& y = graph.edge(eid).target;
        auto it = colour.find(y);
        if (it == colour.end()) {
          colour[y] = 1 - colour[x];
          frontier.push(y);
        } else if (it->second == colour[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return colour;
}

ReductionResult suppress_degree_two(const SerreTree& tree) {
  const SerreGraph& g = tree.graph();
  std::set<std::string> kept;
  bool any_branch = false;
  for (const SerreVertex& v : g.vertices()) {
    int d = g.degree(v.id);
    if (d == 1 && !v.boundary) {
      throw_invalid("leaf \"" + v.id + "\" is not boundary-marked");
    }
    if (d >= 2 && v.boundary) {
      throw_invalid("boundary mark on non-leaf vertex \"" + v.id + "\"");
    }
    if (d >= 3) any_branch = true;
    if (d != 2) kept.insert(v.id);
  }
  if (!any_branch) {
    throw_invalid("reduction needs at least one vertex of degree >= 3");
  }

  ReductionResult result;
  std::vector<SerreVertex> new_vertices;
  for (const SerreVertex& v : g.vertices()) {
    if (kept.count(v.id) > 0) new_vertices.push_back(v);
  }
  std::vector<SerreEdge> new_edges;
  // Walk each chain once, from the endpoint whose first edge comes first in
  // id order; record both directions of the resulting new edge.
  std::set<std::string> consumed;  // first old directed edge of walked chains
  std::vector<std::string> kept_ids(kept.begin(), kept.end());
  for (const std::string& start : kept_ids) {
    for (const std::string& first : g.edges_at(start)) {
      if (consumed.count(first) > 0) continue;
      ChainPath path;
      path.vertex_ids.push_back(start);
      std::string current_edge = first;
      while (true) {
        const SerreEdge& e = g.edge(current_edge);
        path.edge_ids.push_back(e.id);
        path.vertex_ids.push_back(e.target);
        if (kept.count(e.target) > 0) break;
        // Interior vertex: degree exactly 2, continue through the other edge.
        std::string next;
        for (const std::string& out : g.edges_at(e.target)) {
          if (out != e.reverse) next = out;
        }
        current_edge = next;
      }
      ChainPath reverse_path;
      reverse_path.vertex_ids.assign(path.vertex_ids.rbegin(), path.vertex_ids.rend());
      for (auto it = path.edge_ids.rbegin(); it != path.edge_ids.rend(); ++it) {
        reverse_path.edge_ids.push_back(g.edge(*it).reverse);
      }
      consumed.insert(path.edge_ids.front());
      consumed.insert(reverse_path.edge_ids.front());
      SerreEdge forward;
      forward.id = path.edge_ids.front();
      forward.origin = path.vertex_ids.front();
      forward.target = path.vertex_ids.back();
      forward.reverse = reverse_path.edge_ids.front();
      SerreEdge backward;
      backward.id = reverse_path.edge_ids.front();
      backward.origin = forward.target;
      backward.target = forward.origin;
      backward.reverse = forward.id;
      new_edges.push_back(forward);
      new_edges.push_back(backward);
      result.edge_paths.emplace(forward.id, std::move(path));
      result.edge_paths.emplace(backward.id, std::move(reverse_path));
    }
  }
  result.reduced = SerreGraph(std::move(new_vertices), std::move(new_edges));
  return result;
}

SerreGraph expand_chains(const ReductionResult& reduction) {
  const SerreGraph& s = reduction.reduced;
  std::map<std::string, SerreVertex> vertices;
  for (const SerreVertex& v : s.vertices()) vertices[v.id] = v;
  std::vector<SerreEdge> edges;
  for (const auto& [new_edge_id, path] : reduction.edge_paths) {
    if (!s.has_edge(new_edge_id)) {
      throw_invalid("edge path for unknown edge \"" + new_edge_id + "\"");
    }
    // Interior chain vertices were suppressed, hence unmarked by precondition.
    for (std::size_t i = 1; i + 1 < path.vertex_ids.size(); ++i) {
      SerreVertex v;
      v.id = path.vertex_ids[i];
      v.boundary = false;
      vertices.emplace(v.id, v);
    }
    const auto& reverse_path =
        reduction.edge_paths.at(s.edge(new_edge_id).reverse);
    for (std::size_t i = 0; i < path.edge_ids.size(); ++i) {
      SerreEdge e;
      e.id = path.edge_ids[i];
      e.origin = path.vertex_ids[i];
      e.target = path.vertex_ids[i + 1];
      // The reverse chain lists the opposite directions in opposite order.
      e.reverse = reverse_path.edge_ids[path.edge_ids.size() - 1 - i];
      edges.push_back(std::move(e));
    }
  }
  std::vector<SerreVertex> vertex_list;
  vertex_list.reserve(vertices.size());
  for (auto& [id, v] : vertices) vertex_list.push_back(v);
  return SerreGraph(std::move(vertex_list), std::move(edges));
}

GraphAutomorphism compose(const GraphAutomorphism& outer, const GraphAutomorphism& inner) {
  GraphAutomorphism result;
  for (const auto& [v, w] : inner.vertex_images) {
    result.vertex_images[v] = outer.vertex_images.at(w);
  }
  return result;
}

GraphAutomorphism identity_automorphism(const SerreGraph& graph) {
  GraphAutomorphism result;
  for (const SerreVertex& v : graph.vertices()) result.vertex_images[v.id] = v.id;
  return result;
}

namespace {

// Number of directed edges from u to v.
int adjacency_count(const SerreGraph& g, const std::string& u, const std::string& v) {
  int count = 0;
  for (const std::string& eid : g.edges_at(u)) {
    if (g.edge(eid).target == v) ++count;
  }
  return count;
}

// Label of the geometric edge between u and v (graphs searched with labels
// have at most one such edge).
const std::string* edge_label_between(const SerreGraph& g,
                                      const std::map<std::string, std::string>& labels,
                                      const std::string& u, const std::string& v) {
  for (const std::string& eid : g.edges_at(u)) {
    const SerreEdge& e = g.edge(eid);
    if (e.target != v) continue;
    const std::string& key = std::min(e.id, e.reverse);
    auto it = labels.find(key);
    return it == labels.end() ? nullptr : &it->second;
  }
  return nullptr;
}

}  // namespace

std::vector<GraphAutomorphism> automorphisms(
    const SerreGraph& graph, const std::map<std::string, std::string>* edge_labels) {
  if (graph.vertices().size() > 20) {
    throw_invalid("automorphism search limited to graphs with at most 20 vertices");
  }
  std::vector<std::string> ids;
  for (const SerreVertex& v : graph.vertices()) ids.push_back(v.id);
  const std::size_t n = ids.size();

  std::vector<std::string> image(n);
  std::vector<bool> taken(n, false);
  std::vector<GraphAutomorphism> result;

  // Backtracking over vertex images in id order; adjacency to all previously
  // placed vertices (with multiplicity, loops, marks, and labels) prunes.
  auto compatible = [&](std::size_t i, std::size_t j) {
    const std::string& v = ids[i];
    const std::string& w = ids[j];
    if (graph.vertex(v).boundary != graph.vertex(w).boundary) return false;
    if (graph.degree(v) != graph.degree(w)) return false;
    if (adjacency_count(graph, v, v) != adjacency_count(graph, w, w)) return false;
    for (std::size_t k = 0; k < i; ++k) {
      if (adjacency_count(graph, v, ids[k]) != adjacency_count(graph, w, image[k])) {
        return false;
      }
      if (edge_labels != nullptr) {
        const std::string* a = edge_label_between(graph, *edge_labels, v, ids[k]);
        const std::string* b = edge_label_between(graph, *edge_labels, w, image[k]);
        if ((a == nullptr) != (b == nullptr)) return false;
        if (a != nullptr && b != nullptr && *a != *b) return false;
      }
    }
    return true;
  };

  auto search = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      GraphAutomorphism a;
      for (std::size_t k = 0; k < n; ++k) a.vertex_images[ids[k]] = image[k];
      result.push_back(std::move(a));
      return;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      if (!compatible(i, j)) continue;
      taken[j] = true;
      image[i] = ids[j];
      self(self, i + 1);
      taken[j] = false;
    }
  };
  search(search, 0);
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace arbor
